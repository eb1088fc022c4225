#include "sgl/rng/rng.hpp"

#include <cmath>

#include "sgl/error.hpp"

namespace sgl::rng {

std::uint64_t Engine::uniform_int(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = ~0ULL - ~0ULL % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

double Engine::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

long Engine::binomial(long n, double p) {
    require(n >= 0 && p >= 0.0 && p <= 1.0, "ParamError", "binomial(n>=0, p in [0,1])");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);

    // CDF inversion. f(0) = (1-p)^n stays representable in long double for
    // every n used here (n <= ~10^4, p <= 1/2).
    const long double lp = static_cast<long double>(p);
    const long double ratio = lp / (1.0L - lp);
    long double f = std::exp(static_cast<long double>(n) * std::log1p(-lp));
    long double u = static_cast<long double>(uniform());
    long k = 0;
    while (u > f && k < n) {
        u -= f;
        ++k;
        f *= ratio * static_cast<long double>(n - k + 1) / static_cast<long double>(k);
    }
    return k;
}

long Engine::hypergeometric(long total, long success, long draws) {
    require(total >= 0 && success >= 0 && success <= total && draws >= 0 && draws <= total,
            "ParamError", "hypergeometric bounds");
    const long lo = std::max(0L, draws - (total - success));
    const long hi = std::min(draws, success);
    if (lo == hi) return lo;

    // pmf(lo) via log-gamma, then the ratio recurrence.
    auto lgamma_l = [](long v) { return std::lgamma(static_cast<long double>(v + 1)); };
    auto log_choose = [&](long a, long b) { return lgamma_l(a) - lgamma_l(b) - lgamma_l(a - b); };
    long double lf = log_choose(success, lo) + log_choose(total - success, draws - lo) -
                     log_choose(total, draws);
    long double f = std::exp(lf);
    long double u = static_cast<long double>(uniform());
    long k = lo;
    while (u > f && k < hi) {
        u -= f;
        f *= static_cast<long double>(success - k) * static_cast<long double>(draws - k) /
             (static_cast<long double>(k + 1) *
              static_cast<long double>(total - success - draws + k + 1));
        ++k;
    }
    return k;
}

std::vector<std::size_t> Engine::permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_int(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace sgl::rng
