#include "sgl/egt/energy.hpp"

#include <cmath>

#include "sgl/error.hpp"

namespace sgl::egt {

EnergyReport mutation_energy(const ChainConfig& cfg, const PayoffMatrix& pm) {
    require(cfg.n <= 60, "SizeError", "slope fitting capped at N = 60");
    const auto table = payoff_table(cfg, pm);
    const auto law = selection_law(cfg, pm);

    EnergyReport rep;
    const std::size_t m = law.size();
    rep.edge_energy = la::Matrix(m, m);
    rep.fitted_energy = la::Matrix(m, m);
    // |b(i) - j| with b random: the cheapest attainable move dominates
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double best = 1e300;
            for (int s = 0; s < 3; ++s) {
                if (law[i][static_cast<std::size_t>(s)] == 0.0) continue;
                long b = static_cast<long>(i) + (s - 1);
                if (b < 0) b = 0;
                if (b > cfg.n) b = cfg.n;
                best = std::min(best,
                                std::fabs(static_cast<double>(b) - static_cast<double>(j)));
            }
            rep.edge_energy(i, j) = best;
        }
    }

    rep.eps_grid = {1e-2, 3.162277660168379e-3, 1e-3, 3.162277660168379e-4,
                    1e-4, 3.162277660168379e-5, 1e-5};
    std::vector<la::Matrix> mats;
    mats.reserve(rep.eps_grid.size());
    for (double e : rep.eps_grid)
        mats.push_back(transition_from_law(law, cfg.n, e, TransitionForm::ExactConvolution));

    // least-squares slope of ln P against ln eps
    const std::size_t g = rep.eps_grid.size();
    std::vector<double> lx(g);
    double mx = 0.0;
    for (std::size_t t = 0; t < g; ++t) {
        lx[t] = std::log(rep.eps_grid[t]);
        mx += lx[t];
    }
    mx /= static_cast<double>(g);
    double sxx = 0.0;
    for (std::size_t t = 0; t < g; ++t) sxx += (lx[t] - mx) * (lx[t] - mx);

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double my = 0.0;
            bool monotone = true;
            double prev = 0.0;
            for (std::size_t t = 0; t < g; ++t) {
                const double pij = mats[t](i, j);
                check_invariant(pij > 0.0, "exact transition entry must be positive");
                const double ly = std::log(pij);
                if (t > 0 && rep.edge_energy(i, j) >= 1.0 && ly > prev + 1e-12) monotone = false;
                prev = ly;
                my += ly;
            }
            if (!monotone)
                fail_pre("FitError", "transition probability not monotone over the eps grid");
            my /= static_cast<double>(g);
            double sxy = 0.0;
            for (std::size_t t = 0; t < g; ++t)
                sxy += (lx[t] - mx) * (std::log(mats[t](i, j)) - my);
            rep.fitted_energy(i, j) = sxy / sxx;
        }
    }

    rep.chi1 = cfg.n + 1;
    rep.chi2 = -1;
    for (long z = 0; z <= cfg.n; ++z) {
        const auto& pay = table[static_cast<std::size_t>(z)];
        if (pay.pi_a > pay.pi_b && rep.chi1 == cfg.n + 1) rep.chi1 = z;
        if (pay.pi_a < pay.pi_b) rep.chi2 = z;
    }
    const double denom = (pm.a - pm.gamma * pm.d) + (pm.d + pm.gamma * pm.a);
    rep.z_star = std::fabs(denom) > 1e-12
                     ? static_cast<double>(cfg.n) * (pm.d + pm.gamma * pm.a) / denom
                     : std::nan("");
    return rep;
}

} // namespace sgl::egt
