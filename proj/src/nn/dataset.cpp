#include "sgl/nn/dataset.hpp"

#include <cmath>

#include "sgl/error.hpp"
#include "sgl/rng/rng.hpp"

namespace sgl::nn {

namespace {

void validate_config(const SyntheticDatasetConfig& cfg) {
    require(cfg.n_samples >= 4, "ConfigError", "need at least 4 samples");
    require(cfg.d_core >= 1 && cfg.d_shortcut >= 1 && cfg.d_noise >= 0, "ConfigError",
            "block dimensions must be positive (noise block may be empty)");
    require(cfg.rho_sc > 0.5 && cfg.rho_sc <= 1.0, "ConfigError", "rho_sc must lie in (0.5, 1]");
    require(cfg.noise_std >= 0.0, "ConfigError", "noise_std must be nonnegative");
    require(cfg.sep_core > 0.0 && cfg.sep_shortcut > 0.0, "ConfigError",
            "separations must be positive");
}

// block directions are a function of the seed only, so train and probe sets
// from one config share them
void block_directions(const SyntheticDatasetConfig& cfg, std::vector<double>& u_core,
                      std::vector<double>& u_shortcut) {
    rng::Engine eng(cfg.seed, 0xd1f5);
    auto unit = [&](int d) {
        std::vector<double> u(static_cast<std::size_t>(d));
        double nrm = 0.0;
        while (nrm < 1e-12) {
            nrm = 0.0;
            for (auto& v : u) {
                v = eng.gaussian();
                nrm += v * v;
            }
            nrm = std::sqrt(nrm);
        }
        for (auto& v : u) v /= nrm;
        return u;
    };
    u_core = unit(cfg.d_core);
    u_shortcut = unit(cfg.d_shortcut);
}

SyntheticDataset materialize(const SyntheticDatasetConfig& cfg, const std::vector<int>& v_core,
                             const std::vector<int>& v_shortcut, std::uint64_t noise_stream) {
    std::vector<double> u_core, u_shortcut;
    block_directions(cfg, u_core, u_shortcut);
    const long n = static_cast<long>(v_core.size());
    const int d = cfg.d_core + cfg.d_shortcut + cfg.d_noise;

    SyntheticDataset ds;
    ds.cfg = cfg;
    ds.x = la::Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    ds.labels.resize(static_cast<std::size_t>(n));
    ds.v_core = v_core;
    ds.v_shortcut = v_shortcut;
    ds.v_noise.resize(static_cast<std::size_t>(n));
    ds.conflict.resize(static_cast<std::size_t>(n));

    rng::Engine noise(cfg.seed, noise_stream);
    for (long i = 0; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        ds.labels[si] = 2 * v_core[si] - 1;
        ds.v_noise[si] = noise.uniform() < 0.5 ? 0 : 1;
        ds.conflict[si] = v_shortcut[si] != v_core[si] ? 1 : 0;
        double* row = ds.x.row(si);
        const double sc = (2.0 * v_core[si] - 1.0) * cfg.sep_core;
        const double ss = (2.0 * v_shortcut[si] - 1.0) * cfg.sep_shortcut;
        for (int j = 0; j < cfg.d_core; ++j) row[j] = sc * u_core[static_cast<std::size_t>(j)];
        for (int j = 0; j < cfg.d_shortcut; ++j)
            row[cfg.d_core + j] = ss * u_shortcut[static_cast<std::size_t>(j)];
        for (int j = cfg.d_core + cfg.d_shortcut; j < d; ++j) row[j] = 0.0;
        if (cfg.noise_std > 0.0)
            for (int j = 0; j < d; ++j) row[j] += cfg.noise_std * noise.gaussian();
    }
    return ds;
}

} // namespace

SyntheticDataset gen_dataset(const SyntheticDatasetConfig& cfg) {
    validate_config(cfg);
    const long n = cfg.n_samples;
    // balanced within one sample, then shuffled
    std::vector<int> v_core(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v_core[static_cast<std::size_t>(i)] = i < (n + 1) / 2 ? 1 : 0;
    rng::Engine eng(cfg.seed, 0x5a3b);
    const auto perm = eng.permutation(static_cast<std::size_t>(n));
    std::vector<int> shuffled(v_core.size());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = v_core[perm[i]];
    v_core = std::move(shuffled);

    std::vector<int> v_shortcut(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const bool match = eng.uniform() < cfg.rho_sc;
        v_shortcut[si] = match ? v_core[si] : 1 - v_core[si];
    }
    return materialize(cfg, v_core, v_shortcut, 0xfeed);
}

SyntheticDataset gen_balanced_probe(const SyntheticDatasetConfig& cfg, long per_combo,
                                    std::uint64_t stream) {
    validate_config(cfg);
    require(per_combo >= 1, "ConfigError", "per_combo must be positive");
    std::vector<int> v_core, v_shortcut;
    v_core.reserve(static_cast<std::size_t>(4 * per_combo));
    for (int c = 0; c < 2; ++c)
        for (int s = 0; s < 2; ++s)
            for (long k = 0; k < per_combo; ++k) {
                v_core.push_back(c);
                v_shortcut.push_back(s);
            }
    return materialize(cfg, v_core, v_shortcut, stream);
}

VarianceShares variance_decomposition(const SyntheticDataset& ds) {
    const std::size_t n = ds.x.rows;
    const std::size_t d = ds.x.cols;
    bool has_c[2] = {false, false}, has_d[2] = {false, false};
    for (std::size_t i = 0; i < n; ++i) {
        has_c[ds.v_shortcut[i]] = true;
        has_d[ds.v_core[i]] = true;
    }
    if (!(has_c[0] && has_c[1] && has_d[0] && has_d[1]))
        fail_pre("DegenerateGroups", "both factors need both levels present");

    std::vector<double> mu(d, 0.0), mu_c[2], mu_d[2], mu_cd[4];
    double n_c[2] = {0, 0}, n_d[2] = {0, 0}, n_cd[4] = {0, 0, 0, 0};
    for (auto& v : mu_c) v.assign(d, 0.0);
    for (auto& v : mu_d) v.assign(d, 0.0);
    for (auto& v : mu_cd) v.assign(d, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const int c = ds.v_shortcut[i], dd = ds.v_core[i];
        n_c[c] += 1.0;
        n_d[dd] += 1.0;
        n_cd[2 * c + dd] += 1.0;
        const double* row = ds.x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            mu[j] += row[j];
            mu_c[c][j] += row[j];
            mu_d[dd][j] += row[j];
            mu_cd[2 * c + dd][j] += row[j];
        }
    }
    for (std::size_t j = 0; j < d; ++j) mu[j] /= static_cast<double>(n);
    for (int c = 0; c < 2; ++c)
        if (n_c[c] > 0)
            for (std::size_t j = 0; j < d; ++j) mu_c[c][j] /= n_c[c];
    for (int dd = 0; dd < 2; ++dd)
        if (n_d[dd] > 0)
            for (std::size_t j = 0; j < d; ++j) mu_d[dd][j] /= n_d[dd];
    for (int cell = 0; cell < 4; ++cell)
        if (n_cd[cell] > 0)
            for (std::size_t j = 0; j < d; ++j) mu_cd[cell][j] /= n_cd[cell];

    double total = 0.0, color = 0.0, digit = 0.0, within = 0.0, between = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int cell = 2 * ds.v_shortcut[i] + ds.v_core[i];
        const double* row = ds.x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = row[j] - mu[j];
            total += dv * dv;
            const double dw = row[j] - mu_cd[cell][j];
            within += dw * dw;
        }
    }
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = mu_c[c][j] - mu[j];
            color += n_c[c] * dv * dv;
        }
    for (int dd = 0; dd < 2; ++dd)
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = mu_d[dd][j] - mu[j];
            digit += n_d[dd] * dv * dv;
        }
    for (int cell = 0; cell < 4; ++cell) {
        if (n_cd[cell] == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = mu_cd[cell][j] - mu[j];
            between += n_cd[cell] * dv * dv;
        }
    }
    if (total <= 0.0) fail_pre("DegenerateGroups", "total sum of squares is zero");

    VarianceShares out;
    out.total_ss = total;
    out.color_share = color / total;
    out.digit_share = digit / total;
    out.residual_share = within / total;
    out.interaction_share = (between - color - digit) / total;
    return out;
}

} // namespace sgl::nn
