#pragma once

#include <cstdint>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::nn {

// Block-structured Gaussian surrogate for a color/digit task: the core value
// fixes the label and the core-block mean, the shortcut value tracks the core
// value with probability rho_sc and fixes the shortcut-block mean, the noise
// value is a fair coin with no systematic effect.
struct SyntheticDatasetConfig {
    long n_samples = 2048;
    int d_core = 16;
    int d_shortcut = 16;
    int d_noise = 16;
    double sep_core = 1.0;
    double sep_shortcut = 2.0; // shortcut dominates raw variance by default
    double rho_sc = 0.9;       // spurious-correlation strength, (0.5, 1]
    double noise_std = 0.1;
    std::uint64_t seed = 1;
};

struct SyntheticDataset {
    la::Matrix x; // n x (d_core + d_shortcut + d_noise)
    std::vector<int> labels;  // +-1
    std::vector<int> v_core;  // {0,1}
    std::vector<int> v_shortcut;
    std::vector<int> v_noise;
    std::vector<char> conflict; // v_shortcut != v_core
    SyntheticDatasetConfig cfg;

    long conflict_count() const {
        long c = 0;
        for (char f : conflict) c += f ? 1 : 0;
        return c;
    }
};

SyntheticDataset gen_dataset(const SyntheticDatasetConfig& cfg);

// Held-out probe with equal counts of all four (v_core, v_shortcut) combos,
// sharing the generator's block directions. `stream` decouples its noise
// from the training draw.
SyntheticDataset gen_balanced_probe(const SyntheticDatasetConfig& cfg, long per_combo,
                                    std::uint64_t stream = 0xbeef);

// Two-factor variance split over groups c = shortcut value, d = core value.
// color/digit/residual are the literal group terms; interaction is the
// between-cell remainder so the four shares always sum to 1.
struct VarianceShares {
    double color_share = 0.0;
    double digit_share = 0.0;
    double interaction_share = 0.0;
    double residual_share = 0.0;
    double total_ss = 0.0;
};

VarianceShares variance_decomposition(const SyntheticDataset& ds);

} // namespace sgl::nn
