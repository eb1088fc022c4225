#include "sgl/kernel/kernel.hpp"

#include <cmath>
#include <string>

#include "sgl/error.hpp"
#include "sgl/la/eig.hpp"
#include "sgl/parallel.hpp"
#include "sgl/rng/rng.hpp"
#include "sgl/simd/kernels.hpp"

namespace sgl::kernel {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double kappa0(double u) { return (kPi - std::acos(u)) / kPi; }

double kappa1(double u) {
    return (u * (kPi - std::acos(u)) + std::sqrt(std::max(0.0, 1.0 - u * u))) / kPi;
}

double ntk_zonal(double u, int depth) {
    require(depth >= 1, "ParamError", "depth must be >= 1");
    if (std::fabs(u) > 1.0 + 1e-12)
        fail_pre("DomainError", "zonal argument outside [-1, 1]");
    u = std::min(1.0, std::max(-1.0, u));
    double ktilde = u;
    double sigma = u;
    for (int level = 1; level <= depth; ++level) {
        const double next_sigma = kappa1(sigma);
        ktilde = ktilde * kappa0(sigma) + next_sigma;
        sigma = next_sigma;
    }
    return ktilde / static_cast<double>(depth + 1);
}

double quad_h(double u) { return 3.0 / (4.0 * kPi) * u * u + 0.5 * u + 1.0 / (2.0 * kPi); }

la::Matrix data_gram(const la::Matrix& x) {
    const std::size_t n = x.rows;
    la::Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = simd::dot(x.row(i), x.row(j), x.cols);
            k(i, j) = v;
            k(j, i) = v;
        }
    return k;
}

la::Matrix quad_gram(const la::Matrix& x) {
    std::string bad;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double nrm = std::sqrt(simd::dot(x.row(i), x.row(i), x.cols));
        if (std::fabs(nrm - 1.0) > 1e-8) bad += (bad.empty() ? "" : ", ") + std::to_string(i);
    }
    if (!bad.empty()) fail_pre("NormError", "rows not unit norm: " + bad);
    la::Matrix k = data_gram(x);
    for (double& v : k.data) v = quad_h(v);
    return k;
}

SpectralReport spectral_report(const la::Matrix& gram, int r) {
    check_invariant(gram.rows == gram.cols, "Gram matrix must be square");
    require(r >= 1 && static_cast<std::size_t>(r) < gram.rows, "ParamError",
            "rank must lie in [1, n-1]");
    const auto eig = la::eig_sym_jacobi(gram);
    SpectralReport rep;
    rep.eigenvalues = eig.values;
    rep.top_subspace = la::Matrix(gram.rows, static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (int k = 0; k < r; ++k) rep.top_subspace(i, static_cast<std::size_t>(k)) = eig.vectors(i, static_cast<std::size_t>(k));
    rep.gap = eig.values[static_cast<std::size_t>(r - 1)] - eig.values[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = 0; j < gram.cols; ++j)
            if (i != j) rep.rho = std::max(rep.rho, std::fabs(gram(i, j)));
    return rep;
}

double sin_theta(const la::Matrix& a, const la::Matrix& b, int r) {
    require(a.rows == b.rows && a.cols == b.cols, "ParamError", "matrix sizes differ");
    const SpectralReport ra = spectral_report(a, r);
    if (ra.gap <= 1e-10) fail_pre("DegenerateGap", "spectral gap at rank r is <= 1e-10");
    const SpectralReport rb = spectral_report(b, r);

    // ||U^T V_perp||_2^2 = lambda_max(U^T (I - V V^T) U) = 1 - min sv(U^T V)^2
    la::Matrix w(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            double s = 0.0;
            for (std::size_t row = 0; row < a.rows; ++row)
                s += ra.top_subspace(row, static_cast<std::size_t>(i)) *
                     rb.top_subspace(row, static_cast<std::size_t>(j));
            w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
        }
    la::Matrix wtw(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            double s = 0.0;
            for (int k = 0; k < r; ++k)
                s += w(static_cast<std::size_t>(k), static_cast<std::size_t>(i)) *
                     w(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
            wtw(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
        }
    const auto ew = la::eig_sym_jacobi(wtw);
    const double smin_sq = std::max(0.0, ew.values.back());
    return std::sqrt(std::min(1.0, std::max(0.0, 1.0 - smin_sq)));
}

DkReport dk_bound_check(const la::Matrix& x, int r) {
    // proof-side precondition: column means vanish
    for (std::size_t j = 0; j < x.cols; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) m += x(i, j);
        require(std::fabs(m / static_cast<double>(x.rows)) <= 1e-8, "ParamError",
                "data must be centered (column means within 1e-8 of zero)");
    }
    const la::Matrix kx = data_gram(x);
    const la::Matrix kt = quad_gram(x);
    const SpectralReport rep = spectral_report(kx, r);
    if (rep.gap <= 1e-10) fail_pre("DegenerateGap", "spectral gap at rank r is <= 1e-10");

    DkReport out;
    out.rho = rep.rho;
    out.gap = rep.gap;
    out.angle = sin_theta(kx, kt, r);
    out.bound = 3.0 / (2.0 * kPi) *
                (1.0 + (static_cast<double>(x.rows) - 1.0) * rep.rho * rep.rho) / rep.gap;
    out.holds = out.angle <= out.bound;
    return out;
}

SpikedResult spiked_experiment(const SpikedModelConfig& cfg) {
    require(cfg.n >= 500, "ConfigError", "n must be >= 500 for meaningful asymptotics");
    require(cfg.trials >= 5, "ConfigError", "need at least 5 trials");
    require(cfg.r >= 1 && cfg.betas.size() == static_cast<std::size_t>(cfg.r), "ConfigError",
            "need r positive spike amplitudes");
    require(cfg.sigma > 0.0, "ConfigError", "sigma must be positive");
    for (std::size_t k = 0; k < cfg.betas.size(); ++k) {
        require(cfg.betas[k] > 0.0, "ConfigError", "spike amplitudes must be positive");
        if (k > 0)
            require(cfg.betas[k] <= cfg.betas[k - 1], "ConfigError",
                    "spike amplitudes must be sorted descending");
    }

    const std::size_t n = static_cast<std::size_t>(cfg.n);
    SpikedResult res;
    res.trial_eigs.assign(static_cast<std::size_t>(cfg.trials), {});
    res.trial_overlaps.assign(static_cast<std::size_t>(cfg.trials), {});

    parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t trial) {
        rng::Engine eng(cfg.seed, 0x5b1c'0000ULL + trial);

        // random orthonormal spikes from Gram-Schmidt on Gaussian vectors
        la::Matrix v(static_cast<std::size_t>(cfg.r), n);
        for (int k = 0; k < cfg.r; ++k) {
            double* vk = v.row(static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < n; ++i) vk[i] = eng.gaussian();
            for (int prev = 0; prev < k; ++prev) {
                const double* vp = v.row(static_cast<std::size_t>(prev));
                simd::axpy(-simd::dot(vk, vp, n), vp, vk, n);
            }
            simd::scal(1.0 / std::sqrt(simd::dot(vk, vk, n)), vk, n);
        }

        la::Matrix k(n, n);
        const double noise_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(cfg.n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double g1 = cfg.sigma * eng.gaussian();
                const double g2 = (i == j) ? g1 : cfg.sigma * eng.gaussian();
                double val = (g1 + g2) * noise_scale;
                for (int s = 0; s < cfg.r; ++s)
                    val += cfg.betas[static_cast<std::size_t>(s)] *
                           v(static_cast<std::size_t>(s), i) * v(static_cast<std::size_t>(s), j);
                k(i, j) = val;
                k(j, i) = val;
            }
        }

        const auto top = la::eig_sym_topk(k, cfg.r, cfg.seed ^ (0x9e37ULL + trial), 0, 1e-8);
        for (int kk = 0; kk < cfg.r; ++kk)
            check_invariant(top.residuals[static_cast<std::size_t>(kk)] <=
                                1e-8 * std::max(1.0, std::fabs(top.values[0])),
                            "spiked eigenpair residual above contract");
        auto& eigs = res.trial_eigs[trial];
        auto& overs = res.trial_overlaps[trial];
        eigs.resize(static_cast<std::size_t>(cfg.r));
        overs.resize(static_cast<std::size_t>(cfg.r));
        for (int kk = 0; kk < cfg.r; ++kk) {
            eigs[static_cast<std::size_t>(kk)] = top.values[static_cast<std::size_t>(kk)];
            double ip = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                ip += v(static_cast<std::size_t>(kk), i) * top.vectors(i, static_cast<std::size_t>(kk));
            overs[static_cast<std::size_t>(kk)] = ip * ip; // sign-free
        }
    });

    const double edge_tol =
        2.0 * cfg.sigma * (1.0 + 4.0 * std::pow(static_cast<double>(cfg.n), -2.0 / 3.0));
    res.spikes.resize(static_cast<std::size_t>(cfg.r));
    for (int kk = 0; kk < cfg.r; ++kk) {
        SpikeStats& st = res.spikes[static_cast<std::size_t>(kk)];
        st.beta = cfg.betas[static_cast<std::size_t>(kk)];
        st.above_threshold = st.beta > cfg.sigma;
        st.predicted_eig = st.above_threshold ? st.beta + cfg.sigma * cfg.sigma / st.beta
                                              : 2.0 * cfg.sigma;
        st.predicted_overlap_sq =
            st.above_threshold ? 1.0 - cfg.sigma * cfg.sigma / (st.beta * st.beta) : 0.0;
        double se = 0.0, so = 0.0, contained = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double lam = res.trial_eigs[static_cast<std::size_t>(t)][static_cast<std::size_t>(kk)];
            se += lam;
            so += res.trial_overlaps[static_cast<std::size_t>(t)][static_cast<std::size_t>(kk)];
            if (std::fabs(lam) <= edge_tol) contained += 1.0;
        }
        st.mean_top_eig = se / cfg.trials;
        st.mean_overlap_sq = so / cfg.trials;
        st.bulk_contained_fraction = contained / cfg.trials;
    }
    return res;
}

std::vector<double> wigner_spectrum(int n, double sigma, std::uint64_t seed) {
    require(n >= 2, "ParamError", "n must be >= 2");
    rng::Engine eng(seed, 0x316e);
    la::Matrix k(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    const double noise_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < k.rows; ++i)
        for (std::size_t j = i; j < k.cols; ++j) {
            const double g1 = sigma * eng.gaussian();
            const double g2 = (i == j) ? g1 : sigma * eng.gaussian();
            k(i, j) = (g1 + g2) * noise_scale;
            k(j, i) = k(i, j);
        }
    return la::eig_sym_values(std::move(k));
}

} // namespace sgl::kernel
