#include "sgl/nn/train.hpp"

#include <cmath>

#include "sgl/error.hpp"
#include "sgl/rng/rng.hpp"

namespace sgl::nn {

namespace {
int sign_pred(double f) { return f >= 0.0 ? 1 : -1; } // ties map to +1
}

EvalResult evaluate(const MlpModel& model, const SyntheticDataset& ds) {
    EvalResult r;
    const std::size_t n = ds.x.rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = forward(model, ds.x.row(i));
        const double e = static_cast<double>(ds.labels[i]) - f;
        r.loss += e * e;
        if (sign_pred(f) == ds.labels[i]) r.acc += 1.0;
    }
    r.loss /= 2.0 * static_cast<double>(n);
    r.acc /= static_cast<double>(n);
    return r;
}

EpochLog probe_metrics(const MlpModel& model, const SyntheticDataset& probe) {
    EpochLog log;
    const std::size_t n = probe.x.rows;
    double core = 0.0, shortcut = 0.0, noisef = 0.0, conflict_agree = 0.0, conflict_n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int p = sign_pred(forward(model, probe.x.row(i)));
        if (p == 2 * probe.v_core[i] - 1) core += 1.0;
        if (p == 2 * probe.v_shortcut[i] - 1) shortcut += 1.0;
        if (p == 2 * probe.v_noise[i] - 1) noisef += 1.0;
        if (probe.conflict[i]) {
            conflict_n += 1.0;
            if (p == 2 * probe.v_shortcut[i] - 1) conflict_agree += 1.0;
        }
    }
    log.score_core = core / static_cast<double>(n);
    log.score_shortcut = shortcut / static_cast<double>(n);
    log.score_noise = noisef / static_cast<double>(n);
    log.conflict_bias = conflict_n > 0.0 ? conflict_agree / conflict_n : 0.0;
    return log;
}

TrainingLog train(MlpModel& model, const SyntheticDataset& train_set,
                  const SyntheticDataset& probe, const TrainConfig& cfg) {
    require(cfg.lr >= 0.0, "ConfigError", "learning rate must be nonnegative");
    require(cfg.epochs >= 1, "ConfigError", "need at least one epoch");
    const long n = static_cast<long>(train_set.x.rows);
    long batch = n;
    if (!cfg.full_batch) {
        require(cfg.batch >= 1, "ConfigError", "batch size must be positive");
        batch = std::min(cfg.batch, n);
    }

    TrainingLog out;
    out.dropped_tail_batch = !cfg.full_batch && (n % batch != 0);

    Gradients grads = make_gradients(model);
    ForwardCache cache;
    const double initial_loss = evaluate(model, train_set).loss;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.full_batch) {
            grads.zero();
            for (long i = 0; i < n; ++i) {
                const double f = forward(model, train_set.x.row(static_cast<std::size_t>(i)), &cache);
                const double d = (f - static_cast<double>(train_set.labels[static_cast<std::size_t>(i)])) /
                                 static_cast<double>(n);
                backward(model, cache, d, grads);
            }
            apply_gradients(model, grads, cfg.lr);
        } else {
            rng::Engine eng(cfg.seed, 0xe70c'0000ULL + static_cast<std::uint64_t>(epoch));
            const auto perm = eng.permutation(static_cast<std::size_t>(n));
            const long full_batches = n / batch;
            for (long bi = 0; bi < full_batches; ++bi) {
                grads.zero();
                for (long k = 0; k < batch; ++k) {
                    const std::size_t idx = perm[static_cast<std::size_t>(bi * batch + k)];
                    const double f = forward(model, train_set.x.row(idx), &cache);
                    const double d = (f - static_cast<double>(train_set.labels[idx])) /
                                     static_cast<double>(batch);
                    backward(model, cache, d, grads);
                }
                apply_gradients(model, grads, cfg.lr);
            }
        }

        const EvalResult ev = evaluate(model, train_set);
        if (ev.loss > 10.0 * std::max(initial_loss, 1e-12))
            fail_pre("DivergenceError", "training loss exceeded 10x its initial value");
        EpochLog log = probe_metrics(model, probe);
        log.epoch = epoch;
        log.loss = ev.loss;
        log.acc = ev.acc;
        out.epochs.push_back(log);
    }
    return out;
}

} // namespace sgl::nn
