#pragma once

#include <vector>

#include "sgl/la/matrix.hpp"
#include "sgl/nn/dataset.hpp"
#include "sgl/nn/mlp.hpp"

namespace sgl::nn {

enum class ProbeTarget { CoreTask, ShortcutTask };

// L1-penalized linear readout retrained on frozen last-hidden activations
// (deterministic ISTA, zero init, unpenalized intercept).
struct ProbeReport {
    ProbeTarget target = ProbeTarget::CoreTask;
    double l1_weight = 0.0;
    std::vector<int> active_neurons; // |w_i| > 1e-3 * max |w|
    std::vector<double> weights;
    double intercept = 0.0;
};

ProbeReport l1_probe(const MlpModel& model, const SyntheticDataset& ds, ProbeTarget target,
                     double l1_weight, int iterations = 1200);

// Centered per-sample tangent features projected onto their top-k principal
// directions (Gram-trick PCA). Returns n x k coordinates.
la::Matrix tangent_pca(const MlpModel& model, const SyntheticDataset& ds, int k = 2);

// Mean silhouette of a binary labeling of 2-D points; used to compare how
// well a projection separates the two values of a feature.
double silhouette(const la::Matrix& coords, const std::vector<int>& labels);

} // namespace sgl::nn
