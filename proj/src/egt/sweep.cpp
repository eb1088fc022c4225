#include "sgl/egt/sweep.hpp"

#include <cmath>

#include "sgl/egt/stationary.hpp"
#include "sgl/error.hpp"
#include "sgl/parallel.hpp"

namespace sgl::egt {

std::string check_gd_conditions(const PayoffMatrix& pm, long n, double beta) {
    if (n % 2 != 0) return "N must be even";
    if (beta <= 0.0 || beta >= 1.0) return "beta must lie in (0,1)";
    if (pm.w1 < 0.0 || pm.w2 < 0.0) return "w1, w2 must be nonnegative";
    if (pm.w1 + pm.w2 > 1.0 - beta) return "w1 + w2 exceeds 1 - beta";
    const double slack = 2.0 * pm.gamma * beta / (1.0 - pm.gamma * pm.gamma);
    if (pm.w1 - pm.w2 > slack) return "w1 - w2 exceeds 2*gamma*beta/(1-gamma^2)";
    return {};
}

std::string check_sgd_conditions(const PayoffMatrix& pm, long n, long batch) {
    if (batch < 1 || n % batch != 0) return "batch size must divide N";
    if (pm.w1 < 0.0 || pm.w2 < 0.0) return "w1, w2 must be nonnegative";
    if (pm.w1 + pm.w2 > 1.0) return "w1 + w2 exceeds 1";
    if ((1.0 + pm.gamma) * pm.w2 <= (1.0 - pm.gamma) * pm.w1)
        return "(1+gamma)*w2 must exceed (1-gamma)*w1";
    const Thresholds t = thresholds(pm, n, batch);
    if (static_cast<double>(n) < t.n_tilde) return "N below n_tilde(ceil(tau*B))";
    return {};
}

SweepResult sss_sweep(const ChainConfig& base, const PayoffMatrix& pm,
                      const std::vector<double>& eps_grid, const SweepOptions& opt) {
    require(!eps_grid.empty(), "ParamError", "empty eps grid");
    ChainConfig cfg = base;
    cfg.eps = eps_grid.front();
    validate_chain_config(cfg);

    SweepResult out;
    const std::string note = cfg.rule == PayoffRule::Gd
                                 ? check_gd_conditions(pm, cfg.n, opt.beta)
                                 : check_sgd_conditions(pm, cfg.n, cfg.batch);
    if (!note.empty()) fail_pre("ConditionViolated", note);
    out.condition_note = cfg.rule == PayoffRule::Gd ? "full-batch stability conditions hold"
                                                     : "mini-batch stability conditions hold";
    out.thr = thresholds(pm, cfg.n, cfg.rule == PayoffRule::Gd ? 0 : cfg.batch);

    const long z0 = opt.z0 >= 0 ? opt.z0 : cfg.n / 2;
    require(z0 >= 0 && z0 <= cfg.n, "ParamError", "start state outside [0, N]");

    // Exact rules reuse one selection law across eps values.
    MoveLaw law;
    if (cfg.rule != PayoffRule::SgdSample) law = selection_law(cfg, pm);

    out.rows.resize(eps_grid.size());
    if (opt.exact_occupancy) {
        require(cfg.rule != PayoffRule::SgdSample, "ParamError",
                "exact occupancy needs an exact payoff rule");
        parallel_for(eps_grid.size(), [&](std::size_t gi) {
            const double eps = eps_grid[gi];
            const auto p = transition_from_law(law, cfg.n, eps, TransitionForm::ExactConvolution);
            const auto mu = stationary(p, StationaryMethod::ExactSolve);
            out.rows[gi] = {eps, mu.probs.front(), mu.probs.back()};
        });
        return out;
    }

    const std::size_t cells = eps_grid.size() * static_cast<std::size_t>(opt.replicas);
    std::vector<double> occ0(cells, 0.0), occn(cells, 0.0);
    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t gi = cell / static_cast<std::size_t>(opt.replicas);
        const double eps = eps_grid[gi];
        const long horizon =
            std::max(opt.horizon, static_cast<long>(std::ceil(10.0 / eps)));
        const long burn = horizon / 5;
        rng::Engine eng(cfg.seed, 0xe5c0'0000ULL + cell);
        long z = z0;
        double c0 = 0.0, cn = 0.0;
        for (long t = 0; t < horizon + burn; ++t) {
            if (cfg.rule == PayoffRule::SgdSample) {
                const auto pay = pi_sgd(z, pm, cfg.n, cfg.batch, SgdPayoffMode::Sample, &eng);
                z = darwinian_step(z, pay.pi_a, pay.pi_b, eps, cfg.n, eng);
            } else {
                z = step_from_law(z, law, eps, cfg.n, eng);
            }
            if (t >= burn) {
                if (z == 0) c0 += 1.0;
                if (z == cfg.n) cn += 1.0;
            }
        }
        occ0[cell] = c0 / static_cast<double>(horizon);
        occn[cell] = cn / static_cast<double>(horizon);
    });

    for (std::size_t gi = 0; gi < eps_grid.size(); ++gi) {
        double s0 = 0.0, sn = 0.0;
        for (int r = 0; r < opt.replicas; ++r) {
            s0 += occ0[gi * static_cast<std::size_t>(opt.replicas) + static_cast<std::size_t>(r)];
            sn += occn[gi * static_cast<std::size_t>(opt.replicas) + static_cast<std::size_t>(r)];
        }
        out.rows[gi] = {eps_grid[gi], s0 / opt.replicas, sn / opt.replicas};
    }
    return out;
}

} // namespace sgl::egt
