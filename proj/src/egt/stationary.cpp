#include "sgl/egt/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "sgl/error.hpp"
#include "sgl/la/solve.hpp"
#include "sgl/rng/rng.hpp"

namespace sgl::egt {

namespace {

void validate_positive_stochastic(const la::Matrix& p) {
    check_invariant(p.rows == p.cols && p.rows >= 1, "stochastic matrix must be square");
    for (std::size_t i = 0; i < p.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.cols; ++j) {
            if (!(p(i, j) > 0.0))
                fail_pre("NotPositive", "transition matrix has a nonpositive entry");
            s += p(i, j);
        }
        require(std::fabs(s - 1.0) <= 1e-9, "ParamError", "rows must sum to 1");
    }
}

double stationarity_residual(const la::Matrix& p, const std::vector<double>& mu) {
    double worst = 0.0;
    for (std::size_t j = 0; j < p.cols; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) v += mu[i] * p(i, j);
        worst = std::max(worst, std::fabs(v - mu[j]));
    }
    return worst;
}

void clean_and_normalize(std::vector<double>& mu) {
    // entries spanning hundreds of eps-orders solve with absolute noise near
    // machine precision; clamp that noise, reject anything larger
    double s = 0.0;
    for (double& v : mu) {
        check_invariant(v > -1e-7, "stationary solve produced a negative probability");
        if (v < 0.0) v = 0.0;
        s += v;
    }
    check_invariant(s > 0.0, "stationary solve produced an all-zero vector");
    for (double& v : mu) v /= s;
}

} // namespace

StationaryDistribution stationary(const la::Matrix& p, StationaryMethod method,
                                  std::uint64_t seed, long mc_steps) {
    validate_positive_stochastic(p);
    const std::size_t n = p.rows;
    StationaryDistribution out;
    out.method = method;

    switch (method) {
        case StationaryMethod::ExactSolve: {
            // mu P = mu by state reduction (GTH): Gaussian elimination on the
            // balance equations reorganized without subtractions, so entries
            // spanning hundreds of eps-orders keep full relative accuracy.
            la::Matrix a = p;
            for (std::size_t k = n - 1; k >= 1; --k) {
                double s = 0.0;
                for (std::size_t j = 0; j < k; ++j) s += a(k, j);
                check_invariant(s > 0.0, "state-reduction pivot vanished");
                for (std::size_t i = 0; i < k; ++i) a(i, k) /= s;
                for (std::size_t i = 0; i < k; ++i) {
                    const double f = a(i, k);
                    if (f == 0.0) continue;
                    for (std::size_t j = 0; j < k; ++j) a(i, j) += f * a(k, j);
                }
            }
            out.probs.assign(n, 0.0);
            out.probs[0] = 1.0;
            for (std::size_t k = 1; k < n; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < k; ++i) s += out.probs[i] * a(i, k);
                out.probs[k] = s;
            }
            break;
        }
        case StationaryMethod::TreeTheorem: {
            // q_z = det of (I - P) with row z and column z removed
            out.probs.assign(n, 0.0);
            for (std::size_t z = 0; z < n; ++z) {
                la::Matrix minor(n - 1, n - 1);
                std::size_t r = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == z) continue;
                    std::size_t c = 0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (j == z) continue;
                        minor(r, c) = (i == j ? 1.0 : 0.0) - p(i, j);
                        ++c;
                    }
                    ++r;
                }
                out.probs[z] = la::det(std::move(minor));
            }
            break;
        }
        case StationaryMethod::MonteCarlo: {
            require(mc_steps >= 100, "ParamError", "Monte Carlo needs at least 100 steps");
            rng::Engine eng(seed, 0x57a7);
            std::vector<double> counts(n, 0.0);
            std::size_t state = 0;
            const long burn = mc_steps / 10;
            for (long t = 0; t < mc_steps + burn; ++t) {
                double u = eng.uniform();
                std::size_t next = n - 1;
                for (std::size_t j = 0; j < n; ++j) {
                    u -= p(state, j);
                    if (u <= 0.0) {
                        next = j;
                        break;
                    }
                }
                state = next;
                if (t >= burn) counts[state] += 1.0;
            }
            out.probs = std::move(counts);
            break;
        }
    }

    clean_and_normalize(out.probs);
    out.residual = stationarity_residual(p, out.probs);
    if (method != StationaryMethod::MonteCarlo)
        check_invariant(out.residual <= 1e-10, "exact stationary residual above 1e-10");
    return out;
}

double dobrushin(const la::Matrix& p) {
    check_invariant(p.rows == p.cols && p.rows >= 1, "stochastic matrix must be square");
    double min_overlap = 1.0;
    for (std::size_t i = 0; i < p.rows; ++i) {
        for (std::size_t j = i + 1; j < p.rows; ++j) {
            double overlap = 0.0;
            for (std::size_t s = 0; s < p.cols; ++s) overlap += std::min(p(i, s), p(j, s));
            min_overlap = std::min(min_overlap, overlap);
        }
    }
    return 1.0 - min_overlap;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    check_invariant(a.size() == b.size(), "total_variation length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return 0.5 * s;
}

} // namespace sgl::egt
