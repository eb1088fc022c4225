#include <doctest.h>

#include <cmath>
#include <vector>

#include "sgl/error.hpp"
#include "sgl/rng/rng.hpp"
#include "sgl/sde/sde.hpp"

using namespace sgl;
using namespace sgl::sde;

namespace {

SdeParams base_params() {
    SdeParams p;
    p.gamma = 0.5;
    p.tau = 0.3;
    p.sigma = 0.0;
    p.dt = 1e-3;
    p.t_end = 5.0;
    p.alpha_fixed = true;
    p.alpha0 = 0.5;
    p.w0 = {0.02, 0.4};
    p.seed = 11;
    return p;
}

// test-side transcription of the linear system dw/ds = M w + b
void oracle_matrix(double gamma, double alpha, double m[2][2], double b[2]) {
    m[0][0] = -gamma * gamma * (1.0 - alpha) - alpha;
    m[0][1] = -gamma * (1.0 - alpha) + alpha * gamma;
    m[1][0] = m[0][1];
    m[1][1] = -(1.0 - alpha) - alpha * gamma * gamma;
    b[0] = (1.0 - alpha) * gamma + alpha;
    b[1] = (1.0 - alpha) - alpha * gamma;
}

} // namespace

TEST_CASE("drift components at hand-checked points") {
    SdeState s;
    s.w1 = 0.0;
    s.w2 = 0.0;
    s.alpha = 1.0;
    s.t = 0.0;
    SdeParams p = base_params();
    p.tau = 0.3;
    const auto d = drift(s, p);
    CHECK(d.dw1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.dw2 == doctest::Approx(-0.5).epsilon(1e-15));
    // b(1) = a - c = (1+g w2-w1) - g(1-w2-g w1) = 0.5 here
    CHECK(d.dalpha == doctest::Approx(0.5).epsilon(1e-15));

    // signal decay kills the w-drift
    s.t = 100.0;
    const auto late = drift(s, p);
    CHECK(std::fabs(late.dw1) <= 1e-12);
    CHECK(std::fabs(late.dw2) <= 1e-12);
    CHECK(late.dalpha == d.dalpha); // alpha drift carries no decay factor
}

TEST_CASE("alpha drift is linear: b(alpha) = m(w) alpha + c(w)") {
    rng::Engine eng(3);
    for (int i = 0; i < 40; ++i) {
        const double g = eng.uniform(0.1, 0.9);
        const double w1 = eng.uniform(0.0, 0.8), w2 = eng.uniform(0.0, 0.8);
        const double alpha = eng.uniform(0.0, 1.0);
        SdeState s;
        s.w1 = w1;
        s.w2 = w2;
        s.alpha = alpha;
        SdeParams p = base_params();
        p.gamma = g;
        const double expect = alpha_drift_slope(g, w1, w2) * alpha + alpha_drift_intercept(g, w1, w2);
        CHECK(drift(s, p).dalpha == doctest::Approx(expect).epsilon(1e-12));
        // m = (1+g) a + (1-g) d, c = -g a - d against the payoff entries
        const double a = 1.0 + g * w2 - w1, d = 1.0 - w2 - g * w1;
        CHECK(alpha_drift_slope(g, w1, w2) ==
              doctest::Approx((1.0 + g) * a + (1.0 - g) * d).epsilon(1e-14));
        CHECK(alpha_drift_intercept(g, w1, w2) == doctest::Approx(-g * a - d).epsilon(1e-14));
    }
}

TEST_CASE("closed form: equilibrium, eigenpairs, ODE consistency") {
    SdeParams p = base_params();
    p.alpha0 = 0.6;
    const auto cf = ode_closed_form(p);
    CHECK(cf.w_eq[0] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(cf.w_eq[1] == doctest::Approx(0.4).epsilon(1e-15));

    // analytic eigenpairs satisfy M u = lambda u
    double m[2][2], b[2];
    oracle_matrix(p.gamma, p.alpha0, m, b);
    for (int pair = 0; pair < 2; ++pair) {
        const Vec2 u = pair == 0 ? cf.u1 : cf.u2;
        const double lam = pair == 0 ? cf.lambda1 : cf.lambda2;
        for (int r = 0; r < 2; ++r) {
            const double mu = m[r][0] * u[0] + m[r][1] * u[1];
            CHECK(mu == doctest::Approx(lam * u[r]).epsilon(1e-12));
        }
    }
    // w_eq solves M w + b = 0
    for (int r = 0; r < 2; ++r)
        CHECK(m[r][0] * cf.w_eq[0] + m[r][1] * cf.w_eq[1] + b[r] ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // the closed-form path satisfies dw/dt = f(w) e^{-tau t} (finite difference)
    const double t0 = 1.3, h = 1e-6;
    const auto wm = cf.at(t0 - h), wp = cf.at(t0 + h), wc = cf.at(t0);
    SdeState s;
    s.w1 = wc[0];
    s.w2 = wc[1];
    s.alpha = p.alpha0;
    s.t = t0;
    const auto d = drift(s, p);
    CHECK((wp[0] - wm[0]) / (2.0 * h) == doctest::Approx(d.dw1).epsilon(1e-6));
    CHECK((wp[1] - wm[1]) / (2.0 * h) == doctest::Approx(d.dw2).epsilon(1e-6));

    // starting at equilibrium stays there
    SdeParams pe = p;
    pe.w0 = cf.w_eq;
    const auto cfe = ode_closed_form(pe);
    const auto w5 = cfe.at(5.0);
    CHECK(w5[0] == doctest::Approx(cf.w_eq[0]).epsilon(1e-14));
    CHECK(w5[1] == doctest::Approx(cf.w_eq[1]).epsilon(1e-14));

    CHECK_THROWS_AS((void)[&] {
        SdeParams bad = p;
        bad.alpha0 = 1.0;
        return ode_closed_form(bad);
    }(), PreconditionError);
}

TEST_CASE("euler endpoint matches the closed form at dt = 1e-4") {
    SdeParams p = base_params();
    p.alpha0 = 0.6;
    p.dt = 1e-4;
    p.t_end = 10.0;
    p.sample_every = 1 << 30;
    const auto tr = integrate(p);
    const auto cf = ode_closed_form(p);
    const auto w = cf.at(p.t_end);
    CHECK(std::fabs(tr.final.w1 - w[0]) <= 1e-4);
    CHECK(std::fabs(tr.final.w2 - w[1]) <= 1e-4);
    // and the infinite-time limit equals the decayed-signal closed form
    const auto winf = cf.at_infinity();
    const auto w100 = cf.at(100.0);
    CHECK(winf[0] == doctest::Approx(w100[0]).epsilon(1e-12));
    CHECK(winf[1] == doctest::Approx(w100[1]).epsilon(1e-12));
}

TEST_CASE("euler error scales at first order in dt") {
    SdeParams p = base_params();
    p.alpha0 = 0.35;
    p.t_end = 4.0;
    p.sample_every = 1 << 30;
    const auto cf = ode_closed_form(p);
    const auto ref = cf.at(p.t_end);
    std::vector<double> errs;
    for (double dt : {8e-3, 4e-3, 2e-3, 1e-3}) {
        p.dt = dt;
        const auto tr = integrate(p);
        errs.push_back(std::max(std::fabs(tr.final.w1 - ref[0]), std::fabs(tr.final.w2 - ref[1])));
    }
    // fitted order log2(err ratio) near 1
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        CHECK(order >= 0.7);
        CHECK(order <= 1.3);
    }
}

TEST_CASE("step size guard") {
    SdeParams p = base_params();
    p.tau = 4.0;
    p.dt = 5e-3; // cap is 1e-2 / 4
    CHECK_THROWS_WITH_AS((void)integrate(p), doctest::Contains("StepSizeError"),
                         PreconditionError);
}

TEST_CASE("reflection keeps alpha in range and compensators grow") {
    SdeParams p = base_params();
    p.alpha_fixed = false;
    p.sigma = 0.8;
    p.dt = 1e-3;
    p.t_end = 20.0;
    p.sample_every = 50;
    const auto tr = integrate(p);
    double k0 = 0.0, k1 = 0.0;
    for (const auto& s : tr.samples) {
        CHECK(s.alpha >= 0.0);
        CHECK(s.alpha <= 1.0);
        CHECK(s.k0 >= k0 - 1e-15);
        CHECK(s.k1 >= k1 - 1e-15);
        k0 = s.k0;
        k1 = s.k1;
    }
    CHECK(tr.final.k0 + tr.final.k1 > 0.0); // noise this strong must hit the walls
}

TEST_CASE("critical decay rate") {
    SdeParams p = base_params();
    // w0 - w_eq orthogonal to u1 -> single decaying mode -> no tau_c
    {
        SdeParams q = p;
        const auto cf = ode_closed_form(q);
        const double nrm = std::sqrt(1.0 + q.gamma * q.gamma);
        q.w0 = {cf.w_eq[0] + 0.3 / nrm, cf.w_eq[1] - 0.3 * q.gamma / nrm}; // along u2
        CHECK_FALSE(tau_c(q).has_value());
    }
    // alpha = 1/2 makes the numerator vanish: tau_c = 0 when the ratio is valid
    {
        SdeParams q = p;
        q.alpha0 = 0.5;
        const auto tc = tau_c(q);
        REQUIRE(tc.has_value());
        CHECK(*tc == doctest::Approx(0.0));
    }
    // generic case: gap nondecreasing on [tau_c, tau_c + 5]
    {
        SdeParams q = p;
        q.alpha0 = 0.7;
        const auto tc = tau_c(q);
        REQUIRE(tc.has_value());
        const auto cf = ode_closed_form(q);
        double prev = -1e300;
        for (int i = 0; i < 50; ++i) {
            const double tau = std::max(*tc, 1e-3) + 5.0 * i / 49.0;
            const double gap = cf.gap_infinity(tau);
            CHECK(gap >= prev - 1e-12);
            prev = gap;
        }
    }
    // c^T w_eq identity
    for (double g : {0.2, 0.5, 0.8}) {
        SdeParams q = p;
        q.gamma = g;
        const auto cf = ode_closed_form(q);
        CHECK(cf.w_eq[1] - cf.w_eq[0] == doctest::Approx(-2.0 * g / (1.0 + g * g)).epsilon(1e-14));
    }
}

TEST_CASE("stationary density: uniform at w_eq, skewed when G(1) < G(0)") {
    SdeParams p = base_params();
    p.sigma = 0.3;
    // at w_eq both payoffs vanish, so the drift is zero and the density flat
    const Vec2 weq{1.2, 0.4};
    const auto flat = fp_density(weq, p, 101);
    for (double v : flat) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(sigma_condition(0.5, 0.0, 0.0));
    const auto dens = fp_density({0.0, 0.0}, p, 513);
    CHECK(dens.front() > dens.back());

    // integrates to one, log-density is a quadratic (constant second difference)
    double z = 0.0;
    const double h = 1.0 / 512.0;
    for (std::size_t i = 0; i + 1 < dens.size(); ++i) z += 0.5 * (dens[i] + dens[i + 1]) * h;
    CHECK(z == doctest::Approx(1.0).epsilon(1e-8));
    const double d2_ref = std::log(dens[2]) - 2.0 * std::log(dens[1]) + std::log(dens[0]);
    for (std::size_t i = 1; i + 1 < dens.size(); ++i) {
        const double d2 = std::log(dens[i + 1]) - 2.0 * std::log(dens[i]) + std::log(dens[i - 1]);
        CHECK(d2 == doctest::Approx(d2_ref).epsilon(1e-6).scale(1.0));
    }

    CHECK_THROWS_AS((void)fp_density({0.0, 0.0}, base_params(), 65), PreconditionError); // sigma 0
}

TEST_CASE("long-run alpha histogram matches the stationary density") {
    SdeParams p = base_params();
    p.alpha_fixed = false;
    p.sigma = 0.3;
    p.dt = 2e-4;
    p.t_end = 4000.0;
    p.w0 = {0.3, 0.35};
    p.seed = 7;
    const int bins = 64;
    const auto hist = alpha_histogram(p, bins, 0.1);
    const auto dens = fp_density(p.w0, p, 513);
    std::vector<double> cell(bins, 0.0);
    const double h = 1.0 / 512.0;
    for (int i = 0; i < 512; ++i) {
        int b = static_cast<int>((i + 0.5) / 512.0 * bins);
        if (b >= bins) b = bins - 1;
        cell[static_cast<std::size_t>(b)] += 0.5 * (dens[static_cast<std::size_t>(i)] +
                                                    dens[static_cast<std::size_t>(i) + 1]) *
                                             h;
    }
    double tv = 0.0;
    for (int b = 0; b < bins; ++b)
        tv += std::fabs(hist[static_cast<std::size_t>(b)] - cell[static_cast<std::size_t>(b)]);
    CHECK(0.5 * tv <= 0.06);
}

TEST_CASE("noise regimes: core overtakes at low tau, shortcut persists at high tau") {
    int w1_low = 0, w2_high = 0, paired = 0;
    const int seeds = 30;
    for (int seed = 0; seed < seeds; ++seed) {
        double gap[2];
        int gi = 0;
        for (double tau : {0.3, 2.0}) {
            SdeParams p;
            p.gamma = 0.5;
            p.tau = tau;
            p.sigma = 0.4;
            p.dt = 0.005;
            p.t_end = std::log(1e6) / tau;
            p.alpha_fixed = false;
            p.alpha0 = 0.5;
            p.w0 = {0.02, 0.4};
            p.seed = 2000 + static_cast<std::uint64_t>(seed);
            p.sample_every = 1 << 30;
            const auto tr = integrate(p);
            gap[gi++] = tr.final.w2 - tr.final.w1;
        }
        if (gap[0] < 0.0) ++w1_low;
        if (gap[1] > 0.0) ++w2_high;
        if (gap[1] > gap[0]) ++paired;
    }
    CHECK(w1_low * 3 >= seeds * 2);  // core dominance in at least 2/3 of seeds
    CHECK(w2_high * 2 > seeds);      // shortcut majority at high noise
    CHECK(paired * 3 >= seeds * 2);  // per-seed gap grows with tau
}

TEST_CASE("gap sweep: sigma zero column is deterministic, flags are honest") {
    SdeParams base = base_params();
    base.alpha_fixed = false;
    base.alpha0 = 0.5;
    base.w0 = {0.02, 0.2};
    base.tau = 2.5;
    base.dt = 0.003;
    base.seed = 99;
    const auto cells = gap_sweep(base, {2.5}, {0.0, 0.2}, 8);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].gap_stderr == doctest::Approx(0.0).epsilon(1e-12));
    // zero-noise column equals a plain deterministic integration
    SdeParams det = base;
    det.sigma = 0.0;
    det.tau = 2.5;
    det.t_end = std::max(base.t_end, std::log(1e6) / 2.5);
    det.sample_every = 1 << 30;
    const auto tr = integrate(det);
    CHECK(cells[0].gap_mean == doctest::Approx(tr.final.w2 - tr.final.w1).epsilon(1e-12));
    CHECK(cells[0].cond_tau == (base.w0[1] >= (1.0 - base.gamma) / (1.0 + base.gamma * base.gamma)));
}

TEST_CASE("gap sweep: nonincreasing in sigma under the stated condition") {
    SdeParams base = base_params();
    base.alpha_fixed = false;
    base.alpha0 = 0.5;
    base.w0 = {0.02, 0.2};
    base.tau = 2.5;
    base.dt = 0.003;
    base.seed = 99;
    const auto cells = gap_sweep(base, {2.5}, {0.1, 0.2, 0.4}, 64);
    for (const auto& c : cells) CHECK(c.cond_sigma);
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const double se = std::max(cells[i].gap_stderr, cells[i - 1].gap_stderr);
        CHECK(cells[i].gap_mean <= cells[i - 1].gap_mean + 2.0 * se);
    }
}
