#include "egucb/eg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "egucb/error.hpp"

namespace egucb {

namespace {

constexpr double kMaxExponent = 1e300;
constexpr double kLogRescale = 300.0;

void validate_params(const std::vector<double>& candidates, double tau, double beta, double kappa) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "EG candidate grid is empty");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double c = candidates[i];
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter, "candidate " + std::to_string(c) + " outside [0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (candidates[j] == c) throw Error(ErrorCode::kInvalidParameter, "duplicate candidate " + std::to_string(c));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::kInvalidParameter, "tau must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::kInvalidParameter, "beta must be >= 0");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw Error(ErrorCode::kInvalidParameter, "kappa must be in [0, 1]");
}

bool explore_branch(double epsilon, Rng& rng) {
  if (epsilon <= 0.0) return false;
  if (epsilon >= 1.0) return true;
  return !(uniform01(rng) > epsilon);
}

template <typename Exploit>
EgStep eg_step(LinUcbState& lin, const EgState& eg, std::span<const Candidate> candidates, Rng& rng,
               Exploit&& exploit) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "no candidate arms offered");
  const EgSample s = eg_sample(eg, rng);
  Decision d;
  if (explore_branch(s.epsilon, rng)) {
    for (const auto& c : candidates) lin.ensure_arm(c.id);
    d = uniform_random_select(candidates, rng);
  } else {
    d = exploit(lin, candidates, rng);
  }
  d.epsilon_used = s.epsilon;
  return EgStep{std::move(d), s.index};
}

}  // namespace

EgState::EgState(std::vector<double> candidates, double tau, double beta, double kappa)
    : candidates_(std::move(candidates)), tau_(tau), beta_(beta), kappa_(kappa) {
  validate_params(candidates_, tau_, beta_, kappa_);
  const std::size_t j = candidates_.size();
  weights_.assign(j, 1.0);
  probs_.assign(j, 1.0 / static_cast<double>(j));
}

EgState EgState::restore(std::vector<double> candidates, std::vector<double> weights, std::vector<double> probs,
                         double tau, double beta, double kappa) {
  validate_params(candidates, tau, beta, kappa);
  const std::size_t j = candidates.size();
  if (weights.size() != j || probs.size() != j) {
    throw Error(ErrorCode::kInvalidData, "EG weights/probabilities do not match the candidate count");
  }
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::kInvalidData, "EG weights must be positive");
  const double psum = std::accumulate(probs.begin(), probs.end(), 0.0);
  const double floor = kappa / static_cast<double>(j);
  if (std::abs(psum - 1.0) > 1e-9 ||
      std::any_of(probs.begin(), probs.end(), [&](double p) { return !(p >= floor - 1e-12); })) {
    throw Error(ErrorCode::kInvalidData, "EG probabilities violate the simplex invariants");
  }
  EgState s;
  s.candidates_ = std::move(candidates);
  s.weights_ = std::move(weights);
  s.probs_ = std::move(probs);
  s.tau_ = tau;
  s.beta_ = beta;
  s.kappa_ = kappa;
  return s;
}

void EgState::update(std::size_t chosen, double reward) {
  const std::size_t j = size();
  if (chosen >= j) {
    throw Error(ErrorCode::kInvalidIndex, "EG index " + std::to_string(chosen) + " out of range for " +
                                              std::to_string(j) + " candidates");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw Error(ErrorCode::kInvalidReward, "reward " + std::to_string(reward) + " outside [0, 1]");
  }

  // Work in the log domain. w is only defined up to scale, so when the
  // largest log-weight leaves [-kLogRescale, kLogRescale] shift it back to 0.
  std::vector<double> log_w(j);
  for (std::size_t k = 0; k < j; ++k) {
    const double gain = (k == chosen ? reward : 0.0) + beta_;
    const double exponent = std::min(kMaxExponent, tau_ * gain / probs_[k]);
    log_w[k] = std::log(weights_[k]) + exponent;
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  const double shift = std::abs(top) > kLogRescale ? top : 0.0;
  constexpr double kMinWeight = std::numeric_limits<double>::min();
  for (std::size_t k = 0; k < j; ++k) weights_[k] = std::max(kMinWeight, std::exp(log_w[k] - shift));
  recompute_probabilities();
}

void EgState::recompute_probabilities() {
  const std::size_t j = size();
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  const double uniform = kappa_ / static_cast<double>(j);
  for (std::size_t k = 0; k < j; ++k) probs_[k] = (1.0 - kappa_) * (weights_[k] / total) + uniform;
}

EgSample eg_sample(const EgState& state, Rng& rng) {
  const auto& p = state.probabilities();
  if (p.size() == 1) return {0, state.candidates()[0]};
  const double u = uniform01(rng);
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    last_positive = k;
    cum += p[k];
    if (u < cum) return {k, state.candidates()[k]};
  }
  return {last_positive, state.candidates()[last_positive]};
}

EgStep gradient_linucb_step(LinUcbState& lin, const EgState& eg, std::span<const Candidate> candidates, Rng& rng) {
  return eg_step(lin, eg, candidates, rng, [](LinUcbState& s, std::span<const Candidate> c, Rng& r) {
    return linucb_select(s, c, r);
  });
}

EgStep eg_greedy_step(LinUcbState& lin, const EgState& eg, std::span<const Candidate> candidates, Rng& rng) {
  return eg_step(lin, eg, candidates, rng, [](LinUcbState& s, std::span<const Candidate> c, Rng& r) {
    return greedy_select(s, c, r);
  });
}

Decision GradientLinUcbPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  EgStep step = gradient_linucb_step(lin_, eg_, candidates, rng);
  pending_ = step.sampled_index;
  return std::move(step.decision);
}

void GradientLinUcbPolicy::update(const ArmId& arm, const Context& x, double reward) {
  lin_.update(arm, x, reward);
  if (pending_) {
    eg_.update(*pending_, reward);
    pending_.reset();
  }
}

Decision EgGreedyPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  EgStep step = eg_greedy_step(lin_, eg_, candidates, rng);
  pending_ = step.sampled_index;
  return std::move(step.decision);
}

void EgGreedyPolicy::update(const ArmId& arm, const Context& x, double reward) {
  lin_.update(arm, x, reward);
  if (pending_) {
    eg_.update(*pending_, reward);
    pending_.reset();
  }
}

}  // namespace egucb
