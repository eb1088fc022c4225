#include "sgl/egt/chain.hpp"

#include <cmath>

#include "sgl/error.hpp"

namespace sgl::egt {

namespace {

// pmf of Binomial(n, p) as long doubles (exact recurrence)
std::vector<long double> binom_pmf(long n, double p) {
    std::vector<long double> f(static_cast<std::size_t>(n) + 1, 0.0L);
    const long double lp = static_cast<long double>(p);
    if (n == 0 || p == 0.0) {
        f[0] = 1.0L;
        return f;
    }
    f[0] = std::exp(static_cast<long double>(n) * std::log1p(-lp));
    const long double ratio = lp / (1.0L - lp);
    for (long k = 1; k <= n; ++k)
        f[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k - 1)] * ratio *
                                         static_cast<long double>(n - k + 1) /
                                         static_cast<long double>(k);
    return f;
}

double choose_d(long n, long k) {
    double c = 1.0;
    for (long i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

// leading-order mutation row: the selected target takes the complement
std::vector<double> energy_order_row(long b, long n, double eps) {
    std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
    double off = 0.0;
    for (long j = 0; j <= n; ++j) {
        if (j == b) continue;
        const long up = j > b ? j - b : 0;
        const long dn = j < b ? b - j : 0;
        const double w =
            choose_d(n - b, up) * choose_d(b, dn) * std::pow(eps, static_cast<double>(up + dn));
        row[static_cast<std::size_t>(j)] = w;
        off += w;
    }
    require(off < 1.0, "ParamError", "eps too large for the leading-order form");
    row[static_cast<std::size_t>(b)] = 1.0 - off;
    return row;
}

long clamp_state(long z, long n) { return z < 0 ? 0 : (z > n ? n : z); }

} // namespace

void validate_chain_config(const ChainConfig& cfg) {
    require(cfg.n >= 1, "ParamError", "population size must be positive");
    require(cfg.eps > 0.0 && cfg.eps < 0.5, "ParamError", "mutation rate must lie in (0, 0.5)");
    if (cfg.rule != PayoffRule::Gd)
        require(cfg.batch >= 1 && cfg.n % cfg.batch == 0, "ParamError",
                "SGD rules need a batch size dividing N");
}

long selection_target(long z, double pi_a, double pi_b, long n) {
    require(z >= 0 && z <= n, "ParamError", "state z outside [0, N]");
    long step = 0;
    if (pi_a > pi_b) step = 1;
    else if (pi_a < pi_b) step = -1;
    return clamp_state(z + step, n);
}

long darwinian_step(long z, double pi_a, double pi_b, double eps, long n, rng::Engine& eng) {
    const long b = selection_target(z, pi_a, pi_b, n);
    const long up = eng.binomial(n - b, eps);
    const long down = eng.binomial(b, eps);
    return clamp_state(b + up - down, n);
}

std::vector<StrategyPayoffs> payoff_table(const ChainConfig& cfg, const PayoffMatrix& pm) {
    validate_chain_config(cfg);
    require(cfg.rule != PayoffRule::SgdSample, "ParamError",
            "payoff table needs an exact rule (gd or sgd-exact)");
    std::vector<StrategyPayoffs> table(static_cast<std::size_t>(cfg.n) + 1);
    for (long z = 0; z <= cfg.n; ++z) {
        table[static_cast<std::size_t>(z)] =
            cfg.rule == PayoffRule::Gd ? pi_gd(z, pm, cfg.n)
                                       : pi_sgd(z, pm, cfg.n, cfg.batch, SgdPayoffMode::Exact);
    }
    return table;
}

MoveLaw selection_law(const ChainConfig& cfg, const PayoffMatrix& pm) {
    validate_chain_config(cfg);
    require(cfg.rule != PayoffRule::SgdSample, "ParamError",
            "the selection law needs an exact rule (gd or sgd-exact)");
    MoveLaw law(static_cast<std::size_t>(cfg.n) + 1);
    for (long z = 0; z <= cfg.n; ++z) {
        auto& row = law[static_cast<std::size_t>(z)];
        row = {0.0, 0.0, 0.0};
        if (cfg.rule == PayoffRule::Gd) {
            const auto pay = pi_gd(z, pm, cfg.n);
            if (pay.pi_a > pay.pi_b) row[2] = 1.0;
            else if (pay.pi_a < pay.pi_b) row[0] = 1.0;
            else row[1] = 1.0;
        } else {
            const auto l = pi_sgd_law(z, pm, cfg.n, cfg.batch);
            row[0] = l.p_down;
            row[1] = l.p_zero;
            row[2] = l.p_up;
        }
    }
    return law;
}

std::vector<long> selection_map(const ChainConfig& cfg, const PayoffMatrix& pm) {
    require(cfg.rule == PayoffRule::Gd, "ParamError",
            "a deterministic selection map exists only for the full-batch rule");
    const auto table = payoff_table(cfg, pm);
    std::vector<long> bmap(table.size());
    for (long z = 0; z < static_cast<long>(table.size()); ++z) {
        const auto& pay = table[static_cast<std::size_t>(z)];
        bmap[static_cast<std::size_t>(z)] = selection_target(z, pay.pi_a, pay.pi_b, cfg.n);
    }
    return bmap;
}

std::vector<double> transition_row(long b_of_z, long n, double eps) {
    const auto up = binom_pmf(n - b_of_z, eps);  // p ~ Bin(N-b, eps)
    const auto down = binom_pmf(b_of_z, eps);    // q ~ Bin(b, eps)
    std::vector<long double> row(static_cast<std::size_t>(n) + 1, 0.0L);
    for (long q = 0; q <= b_of_z; ++q) {
        const long double wq = down[static_cast<std::size_t>(q)];
        for (long p = 0; p <= n - b_of_z; ++p) {
            row[static_cast<std::size_t>(b_of_z + p - q)] += wq * up[static_cast<std::size_t>(p)];
        }
    }
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = static_cast<double>(row[j]);
    return out;
}

la::Matrix transition_from_selection(const std::vector<long>& bmap, long n, double eps,
                                     TransitionForm form) {
    require(n <= 2000, "SizeError", "transition matrix capped at N = 2000");
    require(static_cast<long>(bmap.size()) == n + 1, "ParamError", "selection map size mismatch");
    la::Matrix p(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
    for (long z = 0; z <= n; ++z) {
        const long b = bmap[static_cast<std::size_t>(z)];
        require(b >= 0 && b <= n, "ParamError", "selection map leaves [0, N]");
        const auto row = form == TransitionForm::ExactConvolution ? transition_row(b, n, eps)
                                                                  : energy_order_row(b, n, eps);
        for (long j = 0; j <= n; ++j)
            p(static_cast<std::size_t>(z), static_cast<std::size_t>(j)) =
                row[static_cast<std::size_t>(j)];
    }
    return p;
}

la::Matrix transition_from_law(const MoveLaw& law, long n, double eps, TransitionForm form) {
    require(n <= 2000, "SizeError", "transition matrix capped at N = 2000");
    require(static_cast<long>(law.size()) == n + 1, "ParamError", "move law size mismatch");
    la::Matrix p(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(n) + 1);
    for (long z = 0; z <= n; ++z) {
        const auto& moves = law[static_cast<std::size_t>(z)];
        for (int s = 0; s < 3; ++s) {
            const double weight = moves[static_cast<std::size_t>(s)];
            if (weight == 0.0) continue;
            const long b = clamp_state(z + (s - 1), n);
            const auto row = form == TransitionForm::ExactConvolution
                                 ? transition_row(b, n, eps)
                                 : energy_order_row(b, n, eps);
            for (long j = 0; j <= n; ++j)
                p(static_cast<std::size_t>(z), static_cast<std::size_t>(j)) +=
                    weight * row[static_cast<std::size_t>(j)];
        }
    }
    return p;
}

la::Matrix transition_matrix(const ChainConfig& cfg, const PayoffMatrix& pm, TransitionForm form) {
    if (cfg.rule == PayoffRule::Gd)
        return transition_from_selection(selection_map(cfg, pm), cfg.n, cfg.eps, form);
    return transition_from_law(selection_law(cfg, pm), cfg.n, cfg.eps, form);
}

la::Matrix example_three_state(double eps) {
    return transition_from_selection({0, 0, 2}, 2, eps, TransitionForm::EnergyOrder);
}

long step_from_law(long z, const MoveLaw& law, double eps, long n, rng::Engine& eng) {
    const auto& moves = law[static_cast<std::size_t>(z)];
    const double u = eng.uniform();
    long step = 0;
    if (u < moves[0]) step = -1;
    else if (u >= moves[0] + moves[1]) step = 1;
    const long b = clamp_state(z + step, n);
    const long up = eng.binomial(n - b, eps);
    const long down = eng.binomial(b, eps);
    return clamp_state(b + up - down, n);
}

} // namespace sgl::egt
