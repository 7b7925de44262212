#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "egucb/policies.hpp"
#include "egucb/random.hpp"

namespace egucb {

// Exponentiated Gradient over a finite grid of exploration rates.
//
// Weights are stored up to a common scale factor (rescaled whenever they
// drift toward overflow or underflow); the sampling
// distribution mixes them with the uniform distribution,
//   p_k = (1 - kappa) * w_k / sum_j w_j + kappa / J,
// so every p_k >= kappa / J.
class EgState {
 public:
  EgState(std::vector<double> candidates, double tau, double beta, double kappa);

  // Rebuilds a state captured by a snapshot. Validates all invariants.
  static EgState restore(std::vector<double> candidates, std::vector<double> weights, std::vector<double> probs,
                         double tau, double beta, double kappa);

  std::size_t size() const noexcept { return candidates_.size(); }
  const std::vector<double>& candidates() const noexcept { return candidates_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  double tau() const noexcept { return tau_; }
  double beta() const noexcept { return beta_; }
  double kappa() const noexcept { return kappa_; }

  /// Importance-weighted multiplicative update for the candidate that was
  /// used this round:
  ///   w_k <- w_k * exp(tau * (reward * [k == chosen] + beta) / p_k)   for all k
  /// followed by renormalization of w and recomputation of p. The p_k in the
  /// exponent are the probabilities the sample was drawn from.
  void update(std::size_t chosen, double reward);

 private:
  EgState() = default;
  void recompute_probabilities();

  std::vector<double> candidates_;
  std::vector<double> weights_;
  std::vector<double> probs_;
  double tau_ = 0.0;
  double beta_ = 0.0;
  double kappa_ = 0.0;
};

struct EgSample {
  std::size_t index = 0;
  double epsilon = 0.0;
};

inline EgState eg_init(std::vector<double> candidates, double tau, double beta, double kappa) {
  return EgState(std::move(candidates), tau, beta, kappa);
}

// Categorical draw from p. A single-candidate grid returns without a draw.
EgSample eg_sample(const EgState& state, Rng& rng);

inline void eg_update(EgState& state, std::size_t chosen, double reward) { state.update(chosen, reward); }

struct EgStep {
  Decision decision;
  std::size_t sampled_index = 0;
};

// One round of Gradient-LinUCB: sample epsilon from the EG distribution, draw
// q ~ U[0,1), exploit with LinUCB if q > epsilon, otherwise pick uniformly.
// epsilon = 0 always exploits and epsilon = 1 always explores; neither draws q.
EgStep gradient_linucb_step(LinUcbState& lin, const EgState& eg, std::span<const Candidate> candidates, Rng& rng);

// Same control flow with the empirical-CTR argmax as the exploit branch.
EgStep eg_greedy_step(LinUcbState& lin, const EgState& eg, std::span<const Candidate> candidates, Rng& rng);

class GradientLinUcbPolicy final : public Policy {
 public:
  GradientLinUcbPolicy(LinUcbState lin, EgState eg) : lin_(std::move(lin)), eg_(std::move(eg)) {}

  std::string_view name() const override { return "gradient_linucb"; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  // Routes the reward to both the LinUCB arm model and the EG candidate that
  // produced the last decision.
  void update(const ArmId& arm, const Context& x, double reward) override;
  const LinUcbState* linucb_state() const override { return &lin_; }
  const EgState* eg_state() const override { return &eg_; }

 private:
  LinUcbState lin_;
  EgState eg_;
  std::optional<std::size_t> pending_;
};

class EgGreedyPolicy final : public Policy {
 public:
  EgGreedyPolicy(std::size_t d, EgState eg) : lin_(d, 0.0), eg_(std::move(eg)) {}

  std::string_view name() const override { return "eg_greedy"; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  void update(const ArmId& arm, const Context& x, double reward) override;
  const LinUcbState* linucb_state() const override { return &lin_; }
  const EgState* eg_state() const override { return &eg_; }

 private:
  LinUcbState lin_;
  EgState eg_;
  std::optional<std::size_t> pending_;
};

}  // namespace egucb
