#pragma once

#include <cstdint>
#include <vector>

namespace sgl::rng {

// Substream mixer documented in every run manifest: both the seed and the
// stream index pass through splitmix64, so (seed, stream) -> state is a fixed
// integer hash independent of platform.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. All distributions below are
// implemented in-repo so that (seed, stream) -> output is bit-stable across
// standard libraries.
class Engine {
public:
    using result_type = std::uint64_t;

    explicit Engine(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed;
        (void)splitmix64_next(x);
        x ^= 0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL;
        for (auto& w : s_) w = splitmix64_next(x);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // [0, bound) without modulo bias
    std::uint64_t uniform_int(std::uint64_t bound);

    // N(0,1), Box-Muller with a cached spare
    double gaussian();

    // Exact binomial draw by CDF inversion (long double recurrence).
    long binomial(long n, double p);

    // Exact hypergeometric draw: #successes in `draws` from a population of
    // `total` containing `success` marked items.
    long hypergeometric(long total, long success, long draws);

    // Fisher-Yates shuffle of indices 0..n-1
    std::vector<std::size_t> permutation(std::size_t n);

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sgl::rng
