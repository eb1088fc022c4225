#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace sgl::sde {

using Vec2 = std::array<double, 2>;

// Coupled system: deterministic training intensities (w1, w2) with
// exponentially decaying signal e^{-tau t}, and the core-strategy proportion
// alpha in [0,1] driven by the payoff gap plus optimization noise sigma,
// kept in range by reflection (projection with accumulated compensators).
struct SdeParams {
    double gamma = 0.5;
    double tau = 0.3;    // data-noise decay rate (> 0)
    double sigma = 0.0;  // optimization-noise scale (>= 0)
    double dt = 1e-3;
    double t_end = 10.0;
    bool alpha_fixed = false;
    double alpha0 = 0.5;
    Vec2 w0{0.0, 0.0};
    bool freeze_w = false; // hold w at w0 (stationary-density experiments)
    std::uint64_t seed = 0;
    long sample_every = 1;
};

struct SdeState {
    double w1 = 0.0;
    double w2 = 0.0;
    double alpha = 0.0;
    double t = 0.0;
    double k0 = 0.0; // accumulated reflection at alpha = 0
    double k1 = 0.0; // accumulated reflection at alpha = 1
};

struct DriftValue {
    double dw1 = 0.0;    // already multiplied by e^{-tau t}
    double dw2 = 0.0;
    double dalpha = 0.0; // drift part only
};

void validate_params(const SdeParams& p);

DriftValue drift(const SdeState& s, const SdeParams& p);

// b(alpha) = m(w) * alpha + c(w)
double alpha_drift_slope(double gamma, double w1, double w2);     // m(w)
double alpha_drift_intercept(double gamma, double w1, double w2); // c(w)

// G(1) < G(0): the stationary density of alpha is skewed toward 0 and the
// gap is non-increasing in sigma.
bool sigma_condition(double gamma, double w1, double w2);

struct Trajectory {
    std::vector<SdeState> samples; // thinned by sample_every; includes final
    SdeState final;
    bool sigma_condition_held = true; // G(1) < G(0) at every step
    bool w_left_range = false;        // any w outside [0, 1.5]
};

Trajectory integrate(const SdeParams& p);

// Long-run occupancy histogram of alpha over [0,1] (frozen w, streaming
// accumulation; the leading burn-in fraction is discarded). Normalized as a
// probability mass per bin.
std::vector<double> alpha_histogram(const SdeParams& p, int bins, double burn_frac = 0.1);

// Fixed-alpha deterministic path in closed form. Requires alpha in (0,1).
struct ClosedForm {
    double gamma = 0.0, alpha = 0.0, tau = 0.0;
    Vec2 w_eq{};
    double lambda1 = 0.0, lambda2 = 0.0;
    Vec2 u1{}, u2{};
    Vec2 b{}; // Q^T (w0 - w_eq)
    Vec2 w0{};

    Vec2 at(double t) const;
    Vec2 at_infinity() const;
    double gap_infinity(double tau_override) const; // w2(inf) - w1(inf) as a function of tau
};

ClosedForm ode_closed_form(const SdeParams& p);

// Critical decay rate above which the limiting gap is non-decreasing in tau;
// empty when the single-mode ratio degenerates.
std::optional<double> tau_c(const SdeParams& p);

// Stationary reflected-diffusion density on a uniform grid over [0,1],
// trapezoid-normalized. Requires sigma > 0.
std::vector<double> fp_density(const Vec2& w_fixed, const SdeParams& p, int grid_size);

struct GapCell {
    double tau = 0.0;
    double sigma = 0.0;
    double gap_mean = 0.0;
    double gap_stderr = 0.0;
    bool cond_tau = false;   // w2(0) >= (1-gamma)/(1+gamma^2)
    bool cond_sigma = false; // G(1) < G(0) held throughout every replica
};

// Ensemble limiting-gap estimates over a (tau, sigma) grid with common
// random numbers across cells (replica r reuses substream r everywhere).
std::vector<GapCell> gap_sweep(const SdeParams& base, const std::vector<double>& tau_grid,
                               const std::vector<double>& sigma_grid, int replicas);

} // namespace sgl::sde
