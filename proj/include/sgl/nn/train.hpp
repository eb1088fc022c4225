#pragma once

#include <cstdint>
#include <vector>

#include "sgl/nn/dataset.hpp"
#include "sgl/nn/mlp.hpp"

namespace sgl::nn {

struct TrainConfig {
    bool full_batch = true;
    long batch = 128; // minibatch size when full_batch is false
    double lr = 0.05;
    int epochs = 30;
    std::uint64_t seed = 1;
};

// Per-epoch diagnostics. Feature scores are sign-agreement rates on the
// balanced probe; conflict_bias is the agreement with the shortcut-induced
// label on the probe's conflict samples.
struct EpochLog {
    int epoch = 0;
    double loss = 0.0;
    double acc = 0.0;
    double conflict_bias = 0.0;
    double score_core = 0.0;
    double score_shortcut = 0.0;
    double score_noise = 0.0;
};

struct TrainingLog {
    std::vector<EpochLog> epochs;
    bool dropped_tail_batch = false;
};

// MSE backprop training, full-batch or mini-batch. Throws DivergenceError
// when the loss exceeds 10x its initial value.
TrainingLog train(MlpModel& model, const SyntheticDataset& train_set,
                  const SyntheticDataset& probe, const TrainConfig& cfg);

// mean squared error (1/2N) sum (y - f)^2 and sign accuracy
struct EvalResult {
    double loss = 0.0;
    double acc = 0.0;
};
EvalResult evaluate(const MlpModel& model, const SyntheticDataset& ds);

EpochLog probe_metrics(const MlpModel& model, const SyntheticDataset& probe);

} // namespace sgl::nn
