#include <cmath>
#include <cstdio>

#include "commands.hpp"
#include "sgl/egt/chain.hpp"
#include "sgl/egt/stationary.hpp"
#include "sgl/nn/dataset.hpp"
#include "sgl/rng/rng.hpp"
#include "sgl/sde/sde.hpp"

namespace cli {

namespace {

int g_failures = 0;

void report(const char* name, bool ok, double value, double expect) {
    std::printf("[%s] %s (got %.12g, want %.12g)\n", ok ? "pass" : "FAIL", name, value, expect);
    if (!ok) ++g_failures;
}

} // namespace

// Closed-form self-checks: cheap, deterministic, no files.
int cmd_verify(const std::vector<std::string>& argv) {
    const Args args(with_common({}), argv);
    apply_common(args);
    g_failures = 0;

    // three-state chain against its closed-form stationary distribution
    for (double eps : {0.1, 0.01}) {
        const auto mu =
            sgl::egt::stationary(sgl::egt::example_three_state(eps),
                                 sgl::egt::StationaryMethod::ExactSolve);
        const double mu1 = (2.0 - 3.0 * eps - 4.0 * eps * eps) / (2.0 * (1.0 + eps));
        report("three-state stationary mu1", std::fabs(mu.probs[0] - mu1) <= 1e-10, mu.probs[0],
               mu1);
        report("three-state stationary mu2", std::fabs(mu.probs[1] - 2.0 * eps) <= 1e-10,
               mu.probs[1], 2.0 * eps);
    }

    // equilibrium intensities at gamma = 1/2
    {
        sgl::sde::SdeParams p;
        p.gamma = 0.5;
        p.alpha_fixed = true;
        p.alpha0 = 0.6;
        const auto cf = sgl::sde::ode_closed_form(p);
        report("w_eq first component", std::fabs(cf.w_eq[0] - 1.2) <= 1e-12, cf.w_eq[0], 1.2);
        report("w_eq second component", std::fabs(cf.w_eq[1] - 0.4) <= 1e-12, cf.w_eq[1], 0.4);
        report("gap head term", std::fabs((cf.w_eq[1] - cf.w_eq[0]) + 0.8) <= 1e-12,
               cf.w_eq[1] - cf.w_eq[0], -0.8);
    }

    // variance shares sum to one on the default generator
    {
        sgl::nn::SyntheticDatasetConfig cfg;
        cfg.seed = 20260808;
        const auto shares = sgl::nn::variance_decomposition(sgl::nn::gen_dataset(cfg));
        const double total = shares.color_share + shares.digit_share + shares.interaction_share +
                             shares.residual_share;
        report("variance shares sum", std::fabs(total - 1.0) <= 1e-10, total, 1.0);
        report("color leads digit", shares.color_share > shares.digit_share, shares.color_share,
               shares.digit_share);
    }

    // tree theorem vs linear solve on a random positive chain
    {
        sgl::rng::Engine eng(2026);
        sgl::la::Matrix p(6, 6);
        for (std::size_t i = 0; i < 6; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < 6; ++j) {
                p(i, j) = eng.uniform(0.05, 1.0);
                s += p(i, j);
            }
            for (std::size_t j = 0; j < 6; ++j) p(i, j) /= s;
        }
        const auto exact = sgl::egt::stationary(p, sgl::egt::StationaryMethod::ExactSolve);
        const auto tree = sgl::egt::stationary(p, sgl::egt::StationaryMethod::TreeTheorem);
        double worst = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            worst = std::max(worst, std::fabs(exact.probs[i] - tree.probs[i]));
        report("tree theorem agrees with solve", worst <= 1e-9, worst, 0.0);
    }

    std::printf(g_failures == 0 ? "verify: all checks passed\n"
                                : "verify: %d check(s) FAILED\n",
                g_failures);
    return g_failures == 0 ? 0 : 2;
}

} // namespace cli
