#pragma once

#include <cstdint>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::kernel {

// Arc-cosine kernel pieces and the depth-L zonal tangent-kernel recursion.
double kappa0(double u);
double kappa1(double u);
// k^(L)(u) = ktilde^(L)(u) / (L+1); clamps |u| within 1e-12 of +-1, throws
// DomainError beyond that.
double ntk_zonal(double u, int depth);

// Quadratic kernel surrogate h_hat(u) = (3/(4pi)) u^2 + u/2 + 1/(2pi).
double quad_h(double u);

// (K_theta)_ij = h_hat(<x_i, x_j>) for unit-norm rows (NormError lists
// offending rows).
la::Matrix quad_gram(const la::Matrix& x);

// Plain Gram matrix X X^T.
la::Matrix data_gram(const la::Matrix& x);

struct SpectralReport {
    std::vector<double> eigenvalues; // descending
    la::Matrix top_subspace;         // n x r orthonormal columns
    double gap = 0.0;                // lambda_r - lambda_{r+1}
    double rho = 0.0;                // max off-diagonal |K_ij|
};

SpectralReport spectral_report(const la::Matrix& gram, int r);

// Operator-angle distance ||U^T V_perp||_2 between the top-r subspaces of two
// symmetric matrices; DegenerateGap when A's gap at rank r is <= 1e-10.
double sin_theta(const la::Matrix& a, const la::Matrix& b, int r);

struct DkReport {
    double angle = 0.0;
    double bound = 0.0;
    double rho = 0.0;
    double gap = 0.0;
    bool holds = false;
};

// Checks sin_theta(K_X, K_theta, r) against (3/(2pi)) (1 + (N-1) rho^2) / gap
// for centered unit-row data.
DkReport dk_bound_check(const la::Matrix& x, int r);

struct SpikedModelConfig {
    int n = 2000;
    int r = 1;
    std::vector<double> betas; // descending, positive
    double sigma = 1.0;
    int trials = 10;
    std::uint64_t seed = 0;
};

struct SpikeStats {
    double beta = 0.0;
    double mean_top_eig = 0.0;
    double mean_overlap_sq = 0.0;
    double predicted_eig = 0.0;        // beta + sigma^2/beta above threshold, else bulk edge
    double predicted_overlap_sq = 0.0; // 1 - sigma^2/beta^2 above threshold, else 0
    bool above_threshold = false;
    double bulk_contained_fraction = 0.0; // trials with lambda_k <= 2 sigma (1 + 4 n^{-2/3})
};

struct SpikedResult {
    std::vector<SpikeStats> spikes;
    std::vector<std::vector<double>> trial_eigs;     // [trial][k]
    std::vector<std::vector<double>> trial_overlaps; // [trial][k], squared
};

// Low-rank signal plus symmetric Gaussian noise (G + G^T)/sqrt(2N); per-spike
// empirical top eigenvalues and signal overlaps vs the limiting predictions.
// Trials run in parallel on per-trial substreams.
SpikedResult spiked_experiment(const SpikedModelConfig& cfg);

// One noise-only spectrum sample for histogramming.
std::vector<double> wigner_spectrum(int n, double sigma, std::uint64_t seed);

} // namespace sgl::kernel
