#include "sgl/egt/payoff.hpp"

#include <cmath>
#include <vector>

#include "sgl/error.hpp"

namespace sgl::egt {

namespace {

long double log_choose(long n, long k) {
    return std::lgamma(static_cast<long double>(n + 1)) -
           std::lgamma(static_cast<long double>(k + 1)) -
           std::lgamma(static_cast<long double>(n - k + 1));
}

struct PartitionAccumulator {
    const PayoffMatrix& pm;
    long n, batch, groups, z;
    long double log_total; // log C(N, z)
    double e_pi_a = 0.0, e_pi_b = 0.0, prob_mass = 0.0;
    double p_down = 0.0, p_zero = 0.0, p_up = 0.0;
    std::size_t multisets = 0;

    // parts: non-increasing group counts (zeros implicit)
    void visit(const std::vector<long>& parts) {
        if (++multisets > 10'000'000)
            fail_pre("EnumerationTooLarge", "exact partition enumeration exceeds 1e7 outcomes");
        long m_nonzero = 0, m_full = 0;
        long double log_w = 0.0L;
        // multiplicity: groups! / prod(count of each value)!, zeros included
        long run = 1;
        long double log_perm = std::lgamma(static_cast<long double>(groups + 1));
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] > 0) ++m_nonzero;
            if (parts[i] == batch) ++m_full;
            log_w += log_choose(batch, parts[i]);
            if (i > 0 && parts[i] == parts[i - 1]) {
                ++run;
            } else {
                log_perm -= std::lgamma(static_cast<long double>(run + 1));
                run = 1;
            }
        }
        log_perm -= std::lgamma(static_cast<long double>(run + 1));
        const long zeros = groups - static_cast<long>(parts.size());
        log_perm -= std::lgamma(static_cast<long double>(zeros + 1));

        const double prob = static_cast<double>(std::exp(log_perm + log_w - log_total));
        const auto pay = payoffs_for(m_nonzero, m_full);
        e_pi_a += prob * pay.pi_a;
        e_pi_b += prob * pay.pi_b;
        if (pay.pi_a > pay.pi_b) p_up += prob;
        else if (pay.pi_a < pay.pi_b) p_down += prob;
        else p_zero += prob;
        prob_mass += prob;
    }

    StrategyPayoffs payoffs_for(long m_nonzero, long m_full) const {
        StrategyPayoffs out;
        const double bd = static_cast<double>(batch);
        const bool has_a = m_nonzero > 0;
        const bool has_b = m_full < groups;
        if (has_a) {
            const double m = static_cast<double>(m_nonzero);
            out.pi_a = pm.a * ((1.0 + pm.gamma) * static_cast<double>(z) / (m * bd) - pm.gamma);
        }
        if (has_b) {
            const double mp = static_cast<double>(groups - m_full);
            out.pi_b = pm.d *
                       (pm.gamma * static_cast<double>(z - m_full * batch) / bd +
                        static_cast<double>(n - z) / bd) /
                       mp;
        }
        if (!has_a) out.pi_a = out.pi_b - 1.0; // sentinel: keeps b(0) = 0
        if (!has_b) out.pi_b = out.pi_a - 1.0; // sentinel: keeps b(N) = N
        return out;
    }
};

void enumerate_parts(std::vector<long>& parts, long remaining, long max_part, long slots,
                     PartitionAccumulator& acc) {
    if (remaining == 0) {
        acc.visit(parts);
        return;
    }
    if (slots == 0) return;
    const long hi = std::min(max_part, remaining);
    for (long v = hi; v >= 1; --v) {
        if (v * slots < remaining) break; // cannot place the rest
        parts.push_back(v);
        enumerate_parts(parts, remaining - v, v, slots - 1, acc);
        parts.pop_back();
    }
}

// saturating count of partitions of z into at most `slots` parts each at
// most `max_part`; lets the blowup guard fire before enumerating
double count_partitions(long remaining, long max_part, long slots, double cap) {
    if (remaining == 0) return 1.0;
    if (slots == 0 || max_part == 0) return 0.0;
    static thread_local std::vector<double> memo;
    static thread_local long dim_r = 0, dim_m = 0, dim_s = 0;
    if (remaining + 1 > dim_r || max_part + 1 > dim_m || slots + 1 > dim_s) {
        dim_r = remaining + 1;
        dim_m = max_part + 1;
        dim_s = slots + 1;
        memo.assign(static_cast<std::size_t>(dim_r) * dim_m * dim_s, -1.0);
    }
    const std::size_t key = (static_cast<std::size_t>(remaining) * dim_m + max_part) * dim_s + slots;
    if (memo[key] >= 0.0) return memo[key];
    double total = 0.0;
    const long hi = std::min(max_part, remaining);
    for (long v = hi; v >= 1 && total <= cap; --v) {
        if (v * slots < remaining) break;
        total += count_partitions(remaining - v, v, slots - 1, cap);
    }
    memo[key] = std::min(total, cap + 1.0);
    return memo[key];
}

} // namespace

PayoffMatrix payoff_matrix(double gamma, double w1, double w2) {
    require(gamma > 0.0 && gamma < 1.0, "ParamError", "gamma must lie in (0,1)");
    require(w1 >= 0.0 && w2 >= 0.0, "ParamError", "training intensities must be nonnegative");
    PayoffMatrix p;
    p.gamma = gamma;
    p.w1 = w1;
    p.w2 = w2;
    p.a = 1.0 + gamma * w2 - w1;
    p.d = 1.0 - w2 - gamma * w1;
    p.b = -gamma * p.a;
    p.c = gamma * p.d;
    return p;
}

StrategyPayoffs pi_gd(long z, const PayoffMatrix& pm, long n) {
    require(z >= 0 && z <= n, "ParamError", "state z outside [0, N]");
    const double fz = static_cast<double>(z) / static_cast<double>(n);
    return {fz * pm.a + (1.0 - fz) * pm.b, fz * pm.c + (1.0 - fz) * pm.d};
}

StrategyPayoffs pi_sgd(long z, const PayoffMatrix& pm, long n, long batch, SgdPayoffMode mode,
                       rng::Engine* eng) {
    require(z >= 0 && z <= n, "ParamError", "state z outside [0, N]");
    require(batch >= 1 && n % batch == 0, "ParamError", "batch size must divide N");
    const long groups = n / batch;

    if (mode == SgdPayoffMode::Sample) {
        check_invariant(eng != nullptr, "pi_sgd Sample mode needs an engine");
        std::vector<long> counts(groups);
        long rem_total = n, rem_core = z;
        for (long g = 0; g < groups; ++g) {
            counts[g] = eng->hypergeometric(rem_total, rem_core, batch);
            rem_total -= batch;
            rem_core -= counts[g];
        }
        return pi_sgd_realization(counts, pm, n, batch);
    }

    if (z > 0 && count_partitions(z, std::min(batch, z), groups, 1e7) > 1e7)
        fail_pre("EnumerationTooLarge", "exact partition enumeration exceeds 1e7 outcomes");
    PartitionAccumulator acc{pm, n, batch, groups, z, log_choose(n, z)};
    std::vector<long> parts;
    parts.reserve(static_cast<std::size_t>(groups));
    if (z == 0) {
        acc.visit(parts); // single outcome: all groups empty of A
    } else {
        enumerate_parts(parts, z, std::min(batch, z), groups, acc);
    }
    check_invariant(std::fabs(acc.prob_mass - 1.0) < 1e-9, "partition law does not sum to 1");
    return {acc.e_pi_a, acc.e_pi_b};
}

SgdSelectionLaw pi_sgd_law(long z, const PayoffMatrix& pm, long n, long batch) {
    require(z >= 0 && z <= n, "ParamError", "state z outside [0, N]");
    require(batch >= 1 && n % batch == 0, "ParamError", "batch size must divide N");
    const long groups = n / batch;
    if (z > 0 && count_partitions(z, std::min(batch, z), groups, 1e7) > 1e7)
        fail_pre("EnumerationTooLarge", "exact partition enumeration exceeds 1e7 outcomes");
    PartitionAccumulator acc{pm, n, batch, groups, z, log_choose(n, z)};
    std::vector<long> parts;
    parts.reserve(static_cast<std::size_t>(groups));
    if (z == 0) {
        acc.visit(parts);
    } else {
        enumerate_parts(parts, z, std::min(batch, z), groups, acc);
    }
    check_invariant(std::fabs(acc.prob_mass - 1.0) < 1e-9, "partition law does not sum to 1");
    // renormalize away enumeration roundoff so chain rows sum to 1 tightly
    SgdSelectionLaw law;
    law.pi_a_mean = acc.e_pi_a;
    law.pi_b_mean = acc.e_pi_b;
    law.p_down = acc.p_down / acc.prob_mass;
    law.p_zero = acc.p_zero / acc.prob_mass;
    law.p_up = acc.p_up / acc.prob_mass;
    return law;
}

StrategyPayoffs pi_sgd_realization(const std::vector<long>& counts, const PayoffMatrix& pm,
                                   long n, long batch) {
    long z = 0, m_nonzero = 0, m_full = 0;
    for (long k : counts) {
        require(k >= 0 && k <= batch, "ParamError", "group count outside [0, B]");
        z += k;
        if (k > 0) ++m_nonzero;
        if (k == batch) ++m_full;
    }
    const long groups = static_cast<long>(counts.size());
    require(groups * batch == n, "ParamError", "counts do not cover all N samples");
    PartitionAccumulator acc{pm, n, batch, groups, z, 0.0L};
    return acc.payoffs_for(m_nonzero, m_full);
}

Thresholds thresholds(const PayoffMatrix& pm, long n, long batch) {
    Thresholds t;
    const double denom_z = (pm.a - pm.gamma * pm.d) + (pm.d + pm.gamma * pm.a);
    require(std::fabs(denom_z) > 1e-12, "DegenerateGame", "z* denominator vanishes");
    t.z_star = static_cast<double>(n) * (pm.d + pm.gamma * pm.a) / denom_z;
    if (batch >= 1) {
        require(std::fabs(pm.a - pm.d) > 1e-12 * (std::fabs(pm.a) + std::fabs(pm.d) + 1.0),
                "DegenerateGame", "tau undefined when a = d");
        t.tau = (pm.a - pm.b) / (pm.a - pm.d);
        t.ceil_tau_b = static_cast<long>(std::ceil(t.tau * static_cast<double>(batch) - 1e-12));
        t.n_tilde = n_tilde(pm, batch, t.ceil_tau_b);
    }
    return t;
}

double n_tilde(const PayoffMatrix& pm, long batch, long l) {
    require(std::fabs(pm.a - pm.d) > 1e-12 * (std::fabs(pm.a) + std::fabs(pm.d) + 1.0),
            "DegenerateGame", "n_tilde undefined when a = d");
    const double ld = static_cast<double>(l);
    return (ld * (pm.a - pm.b) - static_cast<double>(batch * (l / batch)) * pm.d) / (pm.a - pm.d);
}

} // namespace sgl::egt
