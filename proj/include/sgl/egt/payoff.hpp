#pragma once

#include <cstdint>

#include "sgl/rng/rng.hpp"

namespace sgl::egt {

// Two-strategy game between core-driven (A) and shortcut-driven (B) samples,
// parameterized by the coupling gamma and the accumulated training
// intensities (w1, w2). Structure: b = -gamma*a, c = gamma*d.
struct PayoffMatrix {
    double gamma = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

PayoffMatrix payoff_matrix(double gamma, double w1, double w2);

struct StrategyPayoffs {
    double pi_a = 0.0;
    double pi_b = 0.0;
};

// Full-population (full-batch) payoffs at state z of N.
StrategyPayoffs pi_gd(long z, const PayoffMatrix& pm, long n);

enum class SgdPayoffMode { Exact, Sample };

// Mini-batch payoffs under a uniformly random partition of the N samples
// into N/B groups. Exact mode integrates over the multivariate
// hypergeometric partition law by enumerating count multisets with
// multiplicity weights; Sample draws one partition from `eng`.
// At an absorbing boundary the absent strategy gets the other strategy's
// value minus 1, so selection never moves the boundary.
StrategyPayoffs pi_sgd(long z, const PayoffMatrix& pm, long n, long batch, SgdPayoffMode mode,
                       rng::Engine* eng = nullptr);

// Payoffs for one explicit partition realization (group counts of strategy-A
// members). Used by the concentrated-partition and basin-bound checks.
StrategyPayoffs pi_sgd_realization(const std::vector<long>& counts, const PayoffMatrix& pm,
                                   long n, long batch);

// Exact law of the selection move under a fresh random partition: the
// partition resamples every epoch, so the chain's selection step has sign
// distribution P(pi_a <> pi_b) rather than the sign of the expectations.
struct SgdSelectionLaw {
    double pi_a_mean = 0.0;
    double pi_b_mean = 0.0;
    double p_down = 0.0; // P(pi_a < pi_b)
    double p_zero = 0.0;
    double p_up = 0.0; // P(pi_a > pi_b)
};
SgdSelectionLaw pi_sgd_law(long z, const PayoffMatrix& pm, long n, long batch);

struct Thresholds {
    double z_star = 0.0;   // payoff crossing N*(d+gamma*a)/((a-gamma*d)+(d+gamma*a))
    double tau = 0.0;      // (a-b)/(a-d)
    long ceil_tau_b = 0;   // ceil(tau*B), 0 when batch unset
    double n_tilde = 0.0;  // population size above which states N-L..N-1 all favor A
};

// Throws DegenerateGame when a == d (tau undefined). batch <= 0 computes
// z_star only.
Thresholds thresholds(const PayoffMatrix& pm, long n, long batch);
double n_tilde(const PayoffMatrix& pm, long batch, long l);

} // namespace sgl::egt
