#pragma once

#include <string>
#include <vector>

#include "sgl/egt/chain.hpp"
#include "sgl/egt/payoff.hpp"

namespace sgl::egt {

struct SweepRow {
    double eps = 0.0;
    double occ0 = 0.0;
    double occN = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    Thresholds thr;
    std::string condition_note; // which standing condition was verified
};

struct SweepOptions {
    long horizon = 0;  // per-eps floor of ceil(10/eps) applies; 0 = floor only
    int replicas = 8;
    long z0 = -1;                 // -1: start at N/2
    bool exact_occupancy = false; // exact stationary solve instead of Monte Carlo
    double beta = 0.5;            // slack parameter of the full-batch conditions
};

// Verifies the standing conditions of the relevant stability theorem for the
// rule in `base` (ConditionViolated names the failure), then reports the
// long-run occupancy of the boundary states for each mutation rate.
SweepResult sss_sweep(const ChainConfig& base, const PayoffMatrix& pm,
                      const std::vector<double>& eps_grid, const SweepOptions& opt);

// Condition checks exposed for reuse; return an empty string when satisfied.
std::string check_gd_conditions(const PayoffMatrix& pm, long n, double beta);
std::string check_sgd_conditions(const PayoffMatrix& pm, long n, long batch);

} // namespace sgl::egt
