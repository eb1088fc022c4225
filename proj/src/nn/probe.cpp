#include "sgl/nn/probe.hpp"

#include <cmath>

#include "sgl/error.hpp"
#include "sgl/la/eig.hpp"
#include "sgl/simd/kernels.hpp"

namespace sgl::nn {

ProbeReport l1_probe(const MlpModel& model, const SyntheticDataset& ds, ProbeTarget target,
                     double l1_weight, int iterations) {
    require(l1_weight >= 0.0, "ConfigError", "l1 weight must be nonnegative");
    const std::size_t n = ds.x.rows;
    std::vector<double> scratch;
    last_hidden(model, ds.x.row(0), scratch);
    const std::size_t h = scratch.size();

    la::Matrix feats(n, h);
    for (std::size_t i = 0; i < n; ++i) {
        last_hidden(model, ds.x.row(i), scratch);
        for (std::size_t j = 0; j < h; ++j) feats(i, j) = scratch[j];
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int v = target == ProbeTarget::CoreTask ? ds.v_core[i] : ds.v_shortcut[i];
        y[i] = 2.0 * v - 1.0;
    }

    // Lipschitz constant of (1/n) H^T H via deterministic power iteration
    std::vector<double> pv(h, 1.0 / std::sqrt(static_cast<double>(h))), tmp_n(n), tmp_h(h);
    double lip = 1.0;
    for (int it = 0; it < 40; ++it) {
        simd::matvec(feats.data.data(), n, h, pv.data(), tmp_n.data());
        std::fill(tmp_h.begin(), tmp_h.end(), 0.0);
        simd::matvec_t_acc(feats.data.data(), n, h, tmp_n.data(), tmp_h.data());
        const double nrm = std::sqrt(simd::dot(tmp_h.data(), tmp_h.data(), h));
        if (nrm <= 0.0) break;
        lip = nrm;
        for (std::size_t j = 0; j < h; ++j) pv[j] = tmp_h[j] / nrm;
    }
    lip /= static_cast<double>(n);
    const double step = 1.0 / std::max(lip, 1e-12);

    // ISTA on (1/2n)||y - Hw - b||^2 + l1 ||w||_1
    std::vector<double> w(h, 0.0), resid(n), grad(h);
    double intercept = 0.0;
    for (int it = 0; it < iterations; ++it) {
        simd::matvec(feats.data.data(), n, h, w.data(), resid.data());
        double mean_gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean_gap += y[i] - resid[i];
        intercept = mean_gap / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) resid[i] = resid[i] + intercept - y[i];
        std::fill(grad.begin(), grad.end(), 0.0);
        simd::matvec_t_acc(feats.data.data(), n, h, resid.data(), grad.data());
        const double thr = step * l1_weight;
        for (std::size_t j = 0; j < h; ++j) {
            const double cand = w[j] - step * grad[j] / static_cast<double>(n);
            w[j] = cand > thr ? cand - thr : (cand < -thr ? cand + thr : 0.0);
        }
    }

    ProbeReport rep;
    rep.target = target;
    rep.l1_weight = l1_weight;
    rep.weights = w;
    rep.intercept = intercept;
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::fabs(v));
    if (wmax > 0.0)
        for (std::size_t j = 0; j < h; ++j)
            if (std::fabs(w[j]) > 1e-3 * wmax) rep.active_neurons.push_back(static_cast<int>(j));
    return rep;
}

la::Matrix tangent_pca(const MlpModel& model, const SyntheticDataset& ds, int k) {
    require(k >= 1, "ConfigError", "k must be positive");
    const std::size_t n = ds.x.rows;
    require(static_cast<std::size_t>(k) < n, "ConfigError", "k must be below the sample count");
    const std::size_t p = param_count(model);

    la::Matrix g(n, p);
    std::vector<double> feat;
    for (std::size_t i = 0; i < n; ++i) {
        tangent_feature(model, ds.x.row(i), feat);
        for (std::size_t j = 0; j < p; ++j) g(i, j) = feat[j];
    }
    // center columns
    for (std::size_t j = 0; j < p; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += g(i, j);
        m /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) g(i, j) -= m;
    }
    // Gram matrix of the centered rows
    la::Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = simd::dot(g.row(i), g.row(j), p);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    const auto top = la::eig_sym_topk(gram, k, 0x9ca1, 0, 1e-8);

    la::Matrix coords(n, static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        const double lam = std::max(0.0, top.values[static_cast<std::size_t>(c)]);
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            coords(i, static_cast<std::size_t>(c)) = s * top.vectors(i, static_cast<std::size_t>(c));
    }
    return coords;
}

double silhouette(const la::Matrix& coords, const std::vector<int>& labels) {
    const std::size_t n = coords.rows;
    check_invariant(labels.size() == n && n >= 2, "silhouette shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double same = 0.0, other = 0.0, same_n = 0.0, other_n = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d2 = 0.0;
            for (std::size_t c = 0; c < coords.cols; ++c) {
                const double dv = coords(i, c) - coords(j, c);
                d2 += dv * dv;
            }
            const double d = std::sqrt(d2);
            if (labels[j] == labels[i]) {
                same += d;
                same_n += 1.0;
            } else {
                other += d;
                other_n += 1.0;
            }
        }
        if (same_n == 0.0 || other_n == 0.0) continue;
        const double a = same / same_n;
        const double b = other / other_n;
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

} // namespace sgl::nn
