#pragma once

#include <cstdint>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::egt {

enum class StationaryMethod { ExactSolve, TreeTheorem, MonteCarlo };

struct StationaryDistribution {
    std::vector<double> probs;
    StationaryMethod method = StationaryMethod::ExactSolve;
    double residual = 0.0; // max |mu P - mu|
};

// Stationary distribution of a strictly positive stochastic matrix.
// ExactSolve: linear system mu P = mu with normalization.
// TreeTheorem: each weight as the principal cofactor of I - P (the spanning
//   arborescence sum in closed form).
// MonteCarlo: long-run occupancy of a simulated path.
StationaryDistribution stationary(const la::Matrix& p, StationaryMethod method,
                                  std::uint64_t seed = 0, long mc_steps = 1'000'000);

// Dobrushin contraction coefficient 1 - min_{i,j} sum_s min(P_is, P_js).
double dobrushin(const la::Matrix& p);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

} // namespace sgl::egt
