#pragma once

#include <cstdint>
#include <vector>

#include "sgl/la/matrix.hpp"

namespace sgl::nn {

// Fully connected ReLU network with standard-normal weight init and the
// sqrt(2/fan_in) forward scaling applied to each hidden activation; scalar
// linear output, zero bias init.
struct MlpConfig {
    std::vector<int> widths{48, 64, 32, 1}; // input, hidden..., output(=1)
    std::uint64_t seed = 1;
};

struct MlpModel {
    std::vector<int> widths;
    std::vector<la::Matrix> w;             // w[l]: widths[l+1] x widths[l]
    std::vector<std::vector<double>> bias; // bias[l]: widths[l+1]
    int layers() const { return static_cast<int>(w.size()); }
};

MlpModel init_mlp(const MlpConfig& cfg);

std::size_t param_count(const MlpModel& m);

// Per-sample forward pass; cache holds pre-activations and activations for
// backward passes.
struct ForwardCache {
    std::vector<std::vector<double>> pre; // pre[l] = W_l a_l + b_l (hidden layers)
    std::vector<std::vector<double>> act; // act[0] = x, act[l+1] = scaled relu
};

double forward(const MlpModel& m, const double* x, ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<la::Matrix> w;
    std::vector<std::vector<double>> bias;
    void zero();
};

Gradients make_gradients(const MlpModel& m);

// Accumulates dscale * df/dparams into g for the cached sample.
void backward(const MlpModel& m, const ForwardCache& cache, double dscale, Gradients& g);

// df/dtheta flattened in (w[0], bias[0], w[1], bias[1], ...) order.
void tangent_feature(const MlpModel& m, const double* x, std::vector<double>& out);

void apply_gradients(MlpModel& m, const Gradients& g, double lr);

// Activations of the last hidden layer (probe features).
void last_hidden(const MlpModel& m, const double* x, std::vector<double>& out);

} // namespace sgl::nn
