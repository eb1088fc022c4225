#include "sgl/nn/mlp.hpp"

#include <cmath>

#include "sgl/error.hpp"
#include "sgl/rng/rng.hpp"
#include "sgl/simd/kernels.hpp"

namespace sgl::nn {

MlpModel init_mlp(const MlpConfig& cfg) {
    require(cfg.widths.size() >= 2, "ConfigError", "need at least input and output widths");
    require(cfg.widths.back() == 1, "ConfigError", "output width must be 1");
    for (int w : cfg.widths) require(w >= 1, "ConfigError", "widths must be positive");

    MlpModel m;
    m.widths = cfg.widths;
    rng::Engine eng(cfg.seed, 0x313a);
    for (std::size_t l = 0; l + 1 < cfg.widths.size(); ++l) {
        la::Matrix w(static_cast<std::size_t>(cfg.widths[l + 1]),
                     static_cast<std::size_t>(cfg.widths[l]));
        for (double& v : w.data) v = eng.gaussian();
        m.w.push_back(std::move(w));
        m.bias.emplace_back(static_cast<std::size_t>(cfg.widths[l + 1]), 0.0);
    }
    return m;
}

std::size_t param_count(const MlpModel& m) {
    std::size_t p = 0;
    for (int l = 0; l < m.layers(); ++l) p += m.w[static_cast<std::size_t>(l)].data.size() + m.bias[static_cast<std::size_t>(l)].size();
    return p;
}

double forward(const MlpModel& m, const double* x, ForwardCache* cache) {
    const int layers = m.layers();
    std::vector<double> cur(x, x + m.widths[0]);
    if (cache != nullptr) {
        cache->pre.assign(static_cast<std::size_t>(layers), {});
        cache->act.assign(static_cast<std::size_t>(layers) + 1, {});
        cache->act[0] = cur;
    }
    for (int l = 0; l < layers; ++l) {
        const auto& w = m.w[static_cast<std::size_t>(l)];
        std::vector<double> h(w.rows);
        simd::matvec(w.data.data(), w.rows, w.cols, cur.data(), h.data());
        const auto& b = m.bias[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += b[i];
        if (cache != nullptr) cache->pre[static_cast<std::size_t>(l)] = h;
        if (l + 1 < layers) {
            const double scale = std::sqrt(2.0 / static_cast<double>(m.widths[static_cast<std::size_t>(l)]));
            for (double& v : h) v = v > 0.0 ? scale * v : 0.0;
        }
        cur = std::move(h);
        if (cache != nullptr) cache->act[static_cast<std::size_t>(l) + 1] = cur;
    }
    check_invariant(cur.size() == 1, "output layer must be scalar");
    check_invariant(std::isfinite(cur[0]), "forward pass produced a non-finite output");
    return cur[0];
}

Gradients make_gradients(const MlpModel& m) {
    Gradients g;
    for (int l = 0; l < m.layers(); ++l) {
        g.w.emplace_back(m.w[static_cast<std::size_t>(l)].rows, m.w[static_cast<std::size_t>(l)].cols);
        g.bias.emplace_back(m.bias[static_cast<std::size_t>(l)].size(), 0.0);
    }
    return g;
}

void Gradients::zero() {
    for (auto& m : w) std::fill(m.data.begin(), m.data.end(), 0.0);
    for (auto& b : bias) std::fill(b.begin(), b.end(), 0.0);
}

void backward(const MlpModel& m, const ForwardCache& cache, double dscale, Gradients& g) {
    const int layers = m.layers();
    std::vector<double> delta{dscale}; // d(out)/d(h_last) * dscale
    for (int l = layers - 1; l >= 0; --l) {
        const auto& w = m.w[static_cast<std::size_t>(l)];
        const auto& a_in = cache.act[static_cast<std::size_t>(l)];
        // accumulate into parameter gradients
        simd::ger(g.w[static_cast<std::size_t>(l)].data.data(), w.rows, w.cols, delta.data(),
                  a_in.data(), 1.0);
        auto& gb = g.bias[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += delta[i];
        if (l == 0) break;
        // pull back through W_l and the scaled relu of layer l-1
        std::vector<double> prev(w.cols, 0.0);
        simd::matvec_t_acc(w.data.data(), w.rows, w.cols, delta.data(), prev.data());
        const auto& pre = cache.pre[static_cast<std::size_t>(l - 1)];
        const double scale = std::sqrt(2.0 / static_cast<double>(m.widths[static_cast<std::size_t>(l - 1)]));
        for (std::size_t i = 0; i < prev.size(); ++i)
            prev[i] = pre[i] > 0.0 ? scale * prev[i] : 0.0;
        delta = std::move(prev);
    }
}

void tangent_feature(const MlpModel& m, const double* x, std::vector<double>& out) {
    ForwardCache cache;
    forward(m, x, &cache);
    Gradients g = make_gradients(m);
    backward(m, cache, 1.0, g);
    out.clear();
    out.reserve(param_count(m));
    for (int l = 0; l < m.layers(); ++l) {
        const auto& gw = g.w[static_cast<std::size_t>(l)];
        out.insert(out.end(), gw.data.begin(), gw.data.end());
        const auto& gb = g.bias[static_cast<std::size_t>(l)];
        out.insert(out.end(), gb.begin(), gb.end());
    }
}

void apply_gradients(MlpModel& m, const Gradients& g, double lr) {
    for (int l = 0; l < m.layers(); ++l) {
        auto& w = m.w[static_cast<std::size_t>(l)];
        simd::axpy(-lr, g.w[static_cast<std::size_t>(l)].data.data(), w.data.data(),
                   w.data.size());
        auto& b = m.bias[static_cast<std::size_t>(l)];
        const auto& gb = g.bias[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * gb[i];
    }
}

void last_hidden(const MlpModel& m, const double* x, std::vector<double>& out) {
    ForwardCache cache;
    forward(m, x, &cache);
    out = cache.act[cache.act.size() - 2];
}

} // namespace sgl::nn
