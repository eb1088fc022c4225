#pragma once

#include <vector>

#include "sgl/egt/chain.hpp"
#include "sgl/la/matrix.hpp"

namespace sgl::egt {

// Mutation-energy diagnostics: the exact exponent |b(i) - j| per edge, the
// log-log slope of each transition probability over an eps grid, the payoff
// crossing indices chi1/chi2, and z*.
struct EnergyReport {
    la::Matrix edge_energy;   // |b(i) - j|
    la::Matrix fitted_energy; // least-squares slope of ln P_ij vs ln eps
    long chi1 = 0;            // min z with pi_a > pi_b (N+1 when none)
    long chi2 = 0;            // max z with pi_a < pi_b (-1 when none)
    double z_star = 0.0;
    std::vector<double> eps_grid;
};

EnergyReport mutation_energy(const ChainConfig& cfg, const PayoffMatrix& pm);

} // namespace sgl::egt
