#include "sgl/sde/sde.hpp"

#include <cmath>

#include "sgl/error.hpp"
#include "sgl/parallel.hpp"
#include "sgl/rng/rng.hpp"

namespace sgl::sde {

namespace {

double payoff_a(double gamma, double w1, double w2) { return 1.0 + gamma * w2 - w1; }
double payoff_d(double gamma, double w1, double w2) { return 1.0 - w2 - gamma * w1; }

} // namespace

void validate_params(const SdeParams& p) {
    require(p.gamma > 0.0 && p.gamma < 1.0, "ParamError", "gamma must lie in (0,1)");
    require(p.tau > 0.0, "ParamError", "tau must be positive");
    require(p.sigma >= 0.0, "ParamError", "sigma must be nonnegative");
    require(p.dt > 0.0 && p.t_end > 0.0, "ParamError", "dt and t_end must be positive");
    require(p.alpha0 >= 0.0 && p.alpha0 <= 1.0, "ParamError", "alpha0 must lie in [0,1]");
    require(p.sample_every >= 1, "ParamError", "sample_every must be >= 1");
    const double cap = 1e-2 * std::min(1.0, 1.0 / p.tau);
    if (p.dt > cap * (1.0 + 1e-12))
        fail_pre("StepSizeError", "dt exceeds 1e-2 * min(1, 1/tau)");
}

DriftValue drift(const SdeState& s, const SdeParams& p) {
    const double g = p.gamma;
    const double a = payoff_a(g, s.w1, s.w2);
    const double d = payoff_d(g, s.w1, s.w2);
    const double decay = std::exp(-p.tau * s.t);
    DriftValue out;
    out.dw1 = ((1.0 - s.alpha) * g * d + s.alpha * a) * decay;
    out.dw2 = ((1.0 - s.alpha) * d - s.alpha * g * a) * decay;
    out.dalpha = ((1.0 + g) * s.alpha - g) * a - (1.0 - (1.0 - g) * s.alpha) * d;
    return out;
}

double alpha_drift_slope(double gamma, double w1, double w2) {
    return (1.0 + gamma) * payoff_a(gamma, w1, w2) + (1.0 - gamma) * payoff_d(gamma, w1, w2);
}

double alpha_drift_intercept(double gamma, double w1, double w2) {
    return -gamma * payoff_a(gamma, w1, w2) - payoff_d(gamma, w1, w2);
}

bool sigma_condition(double gamma, double w1, double w2) {
    // G(1) = m/2 + c < 0 = G(0)
    return 0.5 * alpha_drift_slope(gamma, w1, w2) + alpha_drift_intercept(gamma, w1, w2) < 0.0;
}

Trajectory integrate(const SdeParams& p) {
    validate_params(p);
    rng::Engine eng(p.seed, 0x5de0);
    const long steps = static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9));
    const double sqdt = std::sqrt(p.dt);

    Trajectory traj;
    SdeState s;
    s.w1 = p.w0[0];
    s.w2 = p.w0[1];
    s.alpha = p.alpha0;
    traj.samples.push_back(s);

    for (long k = 0; k < steps; ++k) {
        const DriftValue d = drift(s, p);
        if (!p.freeze_w) {
            s.w1 += d.dw1 * p.dt;
            s.w2 += d.dw2 * p.dt;
        }
        if (!p.alpha_fixed) {
            double a = s.alpha + d.dalpha * p.dt;
            if (p.sigma > 0.0) a += p.sigma * sqdt * eng.gaussian();
            if (a < 0.0) {
                s.k0 += -a;
                a = 0.0;
            } else if (a > 1.0) {
                s.k1 += a - 1.0;
                a = 1.0;
            }
            s.alpha = a;
        }
        s.t = static_cast<double>(k + 1) * p.dt;
        if (!sigma_condition(p.gamma, s.w1, s.w2)) traj.sigma_condition_held = false;
        if (s.w1 < 0.0 || s.w1 > 1.5 || s.w2 < 0.0 || s.w2 > 1.5) traj.w_left_range = true;
        if ((k + 1) % p.sample_every == 0 || k + 1 == steps) traj.samples.push_back(s);
    }
    traj.final = s;
    return traj;
}

std::vector<double> alpha_histogram(const SdeParams& p, int bins, double burn_frac) {
    SdeParams q = p;
    q.freeze_w = true;
    validate_params(q);
    require(bins >= 2, "ParamError", "need at least 2 bins");
    require(burn_frac >= 0.0 && burn_frac < 1.0, "ParamError", "burn fraction in [0,1)");
    require(!q.alpha_fixed, "ParamError", "histogram needs dynamic alpha");

    rng::Engine eng(q.seed, 0x5de0);
    const long steps = static_cast<long>(std::ceil(q.t_end / q.dt - 1e-9));
    const long burn = static_cast<long>(burn_frac * static_cast<double>(steps));
    const double sqdt = std::sqrt(q.dt);
    const double m = alpha_drift_slope(q.gamma, q.w0[0], q.w0[1]);
    const double c = alpha_drift_intercept(q.gamma, q.w0[0], q.w0[1]);

    std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
    double alpha = q.alpha0;
    long kept = 0;
    for (long k = 0; k < steps; ++k) {
        double a = alpha + (m * alpha + c) * q.dt + q.sigma * sqdt * eng.gaussian();
        if (a < 0.0) a = 0.0;
        if (a > 1.0) a = 1.0;
        alpha = a;
        if (k >= burn) {
            int b = static_cast<int>(alpha * bins);
            if (b >= bins) b = bins - 1;
            hist[static_cast<std::size_t>(b)] += 1.0;
            ++kept;
        }
    }
    for (double& v : hist) v /= static_cast<double>(kept);
    return hist;
}

ClosedForm ode_closed_form(const SdeParams& p) {
    validate_params(p);
    require(p.alpha_fixed, "ParamError", "closed form needs a fixed alpha");
    require(p.alpha0 > 0.0 && p.alpha0 < 1.0, "ParamError",
            "closed form degenerates at alpha in {0,1}");
    ClosedForm cf;
    cf.gamma = p.gamma;
    cf.alpha = p.alpha0;
    cf.tau = p.tau;
    cf.w0 = p.w0;
    const double g = p.gamma;
    const double s2 = 1.0 + g * g;
    const double nrm = std::sqrt(s2);
    cf.w_eq = {(1.0 + g) / s2, (1.0 - g) / s2};
    cf.lambda1 = -(1.0 - cf.alpha) * s2;
    cf.lambda2 = -cf.alpha * s2;
    cf.u1 = {g / nrm, 1.0 / nrm};
    cf.u2 = {1.0 / nrm, -g / nrm};
    const Vec2 r{p.w0[0] - cf.w_eq[0], p.w0[1] - cf.w_eq[1]};
    cf.b = {cf.u1[0] * r[0] + cf.u1[1] * r[1], cf.u2[0] * r[0] + cf.u2[1] * r[1]};
    return cf;
}

Vec2 ClosedForm::at(double t) const {
    const double s = (1.0 - std::exp(-tau * t)) / tau;
    const double e1 = std::exp(lambda1 * s) * b[0];
    const double e2 = std::exp(lambda2 * s) * b[1];
    return {w_eq[0] + u1[0] * e1 + u2[0] * e2, w_eq[1] + u1[1] * e1 + u2[1] * e2};
}

Vec2 ClosedForm::at_infinity() const {
    const double s = 1.0 / tau;
    const double e1 = std::exp(lambda1 * s) * b[0];
    const double e2 = std::exp(lambda2 * s) * b[1];
    return {w_eq[0] + u1[0] * e1 + u2[0] * e2, w_eq[1] + u1[1] * e1 + u2[1] * e2};
}

double ClosedForm::gap_infinity(double tau_override) const {
    // c^T w_eq + a1 b1 e^{lambda1/tau} + a2 b2 e^{lambda2/tau}, c = (-1, 1)
    const double nrm = std::sqrt(1.0 + gamma * gamma);
    const double a1 = (1.0 - gamma) / nrm;
    const double a2 = -(1.0 + gamma) / nrm;
    const double head = -2.0 * gamma / (1.0 + gamma * gamma);
    return head + a1 * b[0] * std::exp(lambda1 / tau_override) +
           a2 * b[1] * std::exp(lambda2 / tau_override);
}

std::optional<double> tau_c(const SdeParams& p) {
    const ClosedForm cf = ode_closed_form(p);
    const double nrm = std::sqrt(1.0 + p.gamma * p.gamma);
    const double a1 = (1.0 - p.gamma) / nrm;
    const double a2 = -(1.0 + p.gamma) / nrm;
    const double den = a1 * cf.b[0] * cf.lambda1;
    const double num = -a2 * cf.b[1] * cf.lambda2;
    if (den == 0.0) return std::nullopt; // single decaying mode
    const double ratio = num / den;
    if (!(ratio > 0.0)) return std::nullopt;
    const double lg = std::log(ratio);
    if (lg == 0.0) return std::nullopt;
    return (2.0 * cf.alpha - 1.0) * (1.0 + p.gamma * p.gamma) / lg;
}

std::vector<double> fp_density(const Vec2& w_fixed, const SdeParams& p, int grid_size) {
    require(p.sigma > 0.0, "ParamError", "stationary density needs sigma > 0");
    require(grid_size >= 2, "ParamError", "grid too small");
    const double m = alpha_drift_slope(p.gamma, w_fixed[0], w_fixed[1]);
    const double c = alpha_drift_intercept(p.gamma, w_fixed[0], w_fixed[1]);
    const double scale = 2.0 / (p.sigma * p.sigma);

    std::vector<double> dens(static_cast<std::size_t>(grid_size));
    const double h = 1.0 / static_cast<double>(grid_size - 1);
    double gmax = -1e300;
    std::vector<double> gv(dens.size());
    for (int i = 0; i < grid_size; ++i) {
        const double a = static_cast<double>(i) * h;
        gv[static_cast<std::size_t>(i)] = scale * (0.5 * m * a * a + c * a);
        gmax = std::max(gmax, gv[static_cast<std::size_t>(i)]);
    }
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::exp(gv[i] - gmax);
    double z = 0.0;
    for (std::size_t i = 0; i + 1 < dens.size(); ++i) z += 0.5 * (dens[i] + dens[i + 1]) * h;
    check_invariant(z > 0.0, "density normalization vanished");
    for (double& v : dens) v /= z;
    return dens;
}

std::vector<GapCell> gap_sweep(const SdeParams& base, const std::vector<double>& tau_grid,
                               const std::vector<double>& sigma_grid, int replicas) {
    require(!tau_grid.empty() && !sigma_grid.empty(), "ParamError", "empty sweep grid");
    require(replicas >= 2, "ParamError", "need at least 2 replicas");
    const double w2_floor = (1.0 - base.gamma) / (1.0 + base.gamma * base.gamma);

    std::vector<GapCell> cells(tau_grid.size() * sigma_grid.size());
    std::vector<std::vector<double>> gaps(cells.size(),
                                          std::vector<double>(static_cast<std::size_t>(replicas)));
    std::vector<std::vector<char>> held(cells.size(),
                                        std::vector<char>(static_cast<std::size_t>(replicas), 1));

    parallel_for(cells.size() * static_cast<std::size_t>(replicas), [&](std::size_t job) {
        const std::size_t ci = job / static_cast<std::size_t>(replicas);
        const std::size_t rep = job % static_cast<std::size_t>(replicas);
        const double tau = tau_grid[ci / sigma_grid.size()];
        const double sigma = sigma_grid[ci % sigma_grid.size()];
        SdeParams p = base;
        p.tau = tau;
        p.sigma = sigma;
        // decayed-signal horizon: e^{-tau t_end} <= 1e-6
        p.t_end = std::max(base.t_end, std::log(1e6) / tau);
        p.dt = std::min(base.dt, 1e-2 * std::min(1.0, 1.0 / tau));
        p.sample_every = 1L << 30; // endpoint only
        // common random numbers: replica index = substream, shared across cells
        p.seed = base.seed;
        rng::Engine eng(p.seed, 0xc4a0'0000ULL + rep);
        // inline integration with the shared engine (integrate() would reseed)
        validate_params(p);
        SdeState s;
        s.w1 = p.w0[0];
        s.w2 = p.w0[1];
        s.alpha = p.alpha0;
        const long steps = static_cast<long>(std::ceil(p.t_end / p.dt - 1e-9));
        const double sqdt = std::sqrt(p.dt);
        bool ok = sigma_condition(p.gamma, s.w1, s.w2);
        for (long k = 0; k < steps; ++k) {
            const DriftValue d = drift(s, p);
            s.w1 += d.dw1 * p.dt;
            s.w2 += d.dw2 * p.dt;
            if (!p.alpha_fixed) {
                double a = s.alpha + d.dalpha * p.dt + p.sigma * sqdt * eng.gaussian();
                if (a < 0.0) a = 0.0;
                if (a > 1.0) a = 1.0;
                s.alpha = a;
            } else {
                eng.gaussian(); // keep the noise stream aligned across cells
            }
            s.t = static_cast<double>(k + 1) * p.dt;
            if (!sigma_condition(p.gamma, s.w1, s.w2)) ok = false;
        }
        gaps[ci][rep] = s.w2 - s.w1;
        held[ci][rep] = ok ? 1 : 0;
    });

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        GapCell& cell = cells[ci];
        cell.tau = tau_grid[ci / sigma_grid.size()];
        cell.sigma = sigma_grid[ci % sigma_grid.size()];
        double mean = 0.0;
        for (double v : gaps[ci]) mean += v;
        mean /= static_cast<double>(replicas);
        double var = 0.0;
        for (double v : gaps[ci]) var += (v - mean) * (v - mean);
        var /= static_cast<double>(replicas - 1);
        cell.gap_mean = mean;
        cell.gap_stderr = std::sqrt(var / static_cast<double>(replicas));
        cell.cond_tau = base.w0[1] >= w2_floor;
        bool all_held = true;
        for (char h : held[ci])
            if (!h) all_held = false;
        cell.cond_sigma = all_held;
    }
    return cells;
}

} // namespace sgl::sde
