#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sgl::feature {

// Binary feature assignment over a sample set; values live in {0,1} and a
// task-relevant assignment takes both values at least once.
struct FeatureAssignment {
    std::string name;
    std::vector<int> values;
};

// Ground-truth labels and binarized model outputs, both in {-1,+1}.
struct LabeledPrediction {
    std::vector<int> labels;
    std::vector<int> preds;
};

struct BiasReport {
    double s_alpha = 0.0;
    double s_beta = 0.0;
    double shortcut_bias = 0.0;
    // agreement with the ground-truth label restricted to samples where the
    // two feature values disagree
    double conflict_accuracy = 0.0;
    std::size_t conflict_count = 0;
};

enum class FeatureClass { Core, Noise, Other };

const char* feature_class_name(FeatureClass c);

// Throws ParamError unless values are in {0,1} and (when require_two_values)
// both values occur.
void validate_assignment(const FeatureAssignment& f, bool require_two_values = true);
void validate_labels(const LabeledPrediction& lp);

// Mean of (pred-agreement - label-agreement) over ordered pairs that differ
// on feat_k and agree on `other`. Exact at any sample count: all pair sums
// reduce to the 16-cell contingency table of (feat, other, pred, label).
// Throws EmptyConflictSet when no such pair exists.
double s_score(const FeatureAssignment& feat_k, const FeatureAssignment& other,
               const LabeledPrediction& lp);

BiasReport shortcut_bias(const FeatureAssignment& alpha, const FeatureAssignment& beta,
                         const LabeledPrediction& lp);

// |conflict-set shortcut agreement - (s_beta - s_alpha)/2| under the balance
// and agreement-set hypotheses; <= 1e-9 when they hold exactly. The shortcut
// agreement equals 1 - conflict_accuracy for binary outputs.
double bias_equivalence_check(const FeatureAssignment& alpha, const FeatureAssignment& beta,
                              const LabeledPrediction& lp, double balance_tol = 0.02);

FeatureClass classify_feature(const FeatureAssignment& feat, const std::vector<int>& labels);

// Pairwise covariance Cov(delta_V, 2*delta_Y - 1) over ordered pairs i != j.
double pair_covariance(const FeatureAssignment& feat, const std::vector<int>& labels);

} // namespace sgl::feature
