#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sgl/egt/payoff.hpp"
#include "sgl/la/matrix.hpp"
#include "sgl/rng/rng.hpp"

namespace sgl::egt {

enum class PayoffRule { Gd, SgdExact, SgdSample };

struct ChainConfig {
    long n = 0;
    long batch = 0; // SGD rules only; must divide n
    double eps = 0.0;
    PayoffRule rule = PayoffRule::Gd;
    std::uint64_t seed = 0;
};

void validate_chain_config(const ChainConfig& cfg);

// Selection target b(z) = clamp(z + sign(pi_a - pi_b), 0, N); sign(0) = 0.
long selection_target(long z, double pi_a, double pi_b, long n);

// One Darwinian update: selection then binomial mutations at rate eps.
long darwinian_step(long z, double pi_a, double pi_b, double eps, long n, rng::Engine& eng);

// Per-state distribution of the selection move in {-1, 0, +1}. Full-batch
// payoffs give a deterministic move; under mini-batch resampling the move
// carries the exact partition-law sign probabilities.
using MoveLaw = std::vector<std::array<double, 3>>; // index 0:-1, 1:0, 2:+1

MoveLaw selection_law(const ChainConfig& cfg, const PayoffMatrix& pm);

// Expected payoffs per state (Gd or SgdExact; reporting and thresholds).
std::vector<StrategyPayoffs> payoff_table(const ChainConfig& cfg, const PayoffMatrix& pm);

// Deterministic selection map; full-batch rule only.
std::vector<long> selection_map(const ChainConfig& cfg, const PayoffMatrix& pm);

// ExactConvolution: full binomial mutation convolution (rows sum to 1 within
// 1e-12, strictly positive for eps in (0,1)). EnergyOrder: leading-order
// mutation terms C(N-b,du)C(b,dd)eps^(du+dd) with the selected move taking
// the complement; this is the form whose small-eps structure the
// mutation-energy analysis reads off directly.
enum class TransitionForm { ExactConvolution, EnergyOrder };

la::Matrix transition_from_selection(const std::vector<long>& bmap, long n, double eps,
                                     TransitionForm form);
la::Matrix transition_from_law(const MoveLaw& law, long n, double eps, TransitionForm form);
la::Matrix transition_matrix(const ChainConfig& cfg, const PayoffMatrix& pm,
                             TransitionForm form = TransitionForm::ExactConvolution);

// The canonical 3-state chain (N = 2, selection pushes {0,1} down and {2}
// stays), in leading-order form.
la::Matrix example_three_state(double eps);

// Exact one-step transition row from selection target b (binomial
// convolution); the reference law for darwinian_step.
std::vector<double> transition_row(long b_of_z, long n, double eps);

// One chain step where the selection move is drawn from `law[z]`.
long step_from_law(long z, const MoveLaw& law, double eps, long n, rng::Engine& eng);

} // namespace sgl::egt
