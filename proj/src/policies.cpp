#include "egucb/policies.hpp"

#include <cmath>

#include "egucb/error.hpp"

namespace egucb {

namespace {

void require_candidates(std::span<const Candidate> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "no candidate arms offered");
}

void require_dim(const Context& x, std::size_t d) {
  if (x.features.size() != d) {
    throw Error(ErrorCode::kInvalidInput, "context has dimension " + std::to_string(x.features.size()) +
                                              ", expected " + std::to_string(d));
  }
  if (!x.features.all_finite()) throw Error(ErrorCode::kInvalidInput, "context has non-finite features");
}

// Picks uniformly among exact maximizers; consumes the rng only on a tie.
Decision argmax_decision(std::span<const Candidate> candidates, std::vector<ArmScore> scores, Rng& rng) {
  double best = -INFINITY;
  for (const auto& s : scores) best = std::max(best, s.score);
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i].score == best) ties.push_back(i);
  const std::size_t pick = ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
  return Decision{candidates[pick].id, std::move(scores), false, std::nullopt};
}

}  // namespace

ArmModel ArmModel::fresh(std::size_t d) {
  return ArmModel{Mat::identity(d), Mat::identity(d), Vec(d), 0, 0.0};
}

LinUcbState::LinUcbState(std::size_t d, double alpha) : d_(d), alpha_(alpha) {
  if (d == 0) throw Error(ErrorCode::kInvalidParameter, "dimension must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kInvalidParameter, "alpha must be >= 0");
}

void LinUcbState::init_arm(const ArmId& arm) {
  if (arms_.contains(arm)) throw Error(ErrorCode::kDuplicateArm, "arm '" + arm.value + "' already registered");
  arms_.emplace(arm, ArmModel::fresh(d_));
}

const ArmModel& LinUcbState::arm(const ArmId& arm) const {
  const auto it = arms_.find(arm);
  if (it == arms_.end()) throw Error(ErrorCode::kUnknownArm, "arm '" + arm.value + "' not registered");
  return it->second;
}

ArmModel& LinUcbState::ensure_arm(const ArmId& arm) {
  auto it = arms_.find(arm);
  if (it == arms_.end()) it = arms_.emplace(arm, ArmModel::fresh(d_)).first;
  return it->second;
}

void LinUcbState::update(const ArmId& arm, const Context& x, double reward) {
  require_dim(x, d_);
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw Error(ErrorCode::kInvalidReward, "reward " + std::to_string(reward) + " outside [0, 1]");
  }
  auto it = arms_.find(arm);
  if (it == arms_.end()) throw Error(ErrorCode::kUnknownArm, "arm '" + arm.value + "' not registered");
  ArmModel& m = it->second;

  add_outer(m.a, x.features);
  m.a_inv = sherman_morrison_update(m.a_inv, x.features);
  for (std::size_t i = 0; i < d_; ++i) m.b[i] += reward * x.features[i];
  m.pulls += 1;
  m.click_sum += reward;
  if (m.pulls % kRefreshInterval == 0) m.a_inv = spd_inverse(m.a);
}

void LinUcbState::restore_arm(const ArmId& arm, ArmModel model) {
  if (model.a.dim() != d_ || model.a_inv.dim() != d_ || model.b.size() != d_) {
    throw Error(ErrorCode::kInvalidData, "arm '" + arm.value + "' has wrong dimension");
  }
  arms_[arm] = std::move(model);
}

Vec ridge_estimate(const ArmModel& model) { return matvec(model.a_inv, model.b); }

double ucb_score(const ArmModel& model, const Context& x, double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "alpha must be >= 0");
  const double mean = dot(ridge_estimate(model), x.features);
  if (alpha == 0.0) return mean;
  const double q = std::max(0.0, quadratic_form(model.a_inv, x.features));
  return mean + std::sqrt(alpha * q);
}

double empirical_mean(const ArmModel& model) {
  return model.pulls == 0 ? 0.0 : model.click_sum / static_cast<double>(model.pulls);
}

Decision linucb_select(LinUcbState& state, std::span<const Candidate> candidates, Rng& rng) {
  require_candidates(candidates);
  std::vector<ArmScore> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    require_dim(c.context, state.dim());
    const ArmModel& m = state.ensure_arm(c.id);
    scores.push_back({c.id, ucb_score(m, c.context, state.alpha())});
  }
  return argmax_decision(candidates, std::move(scores), rng);
}

void linucb_update(LinUcbState& state, const ArmId& arm, const Context& x, double reward) {
  state.update(arm, x, reward);
}

Decision uniform_random_select(std::span<const Candidate> candidates, Rng& rng) {
  require_candidates(candidates);
  std::vector<ArmScore> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back({c.id, 0.0});
  const std::size_t pick = uniform_index(rng, candidates.size());
  return Decision{candidates[pick].id, std::move(scores), true, std::nullopt};
}

Decision greedy_select(LinUcbState& state, std::span<const Candidate> candidates, Rng& rng) {
  require_candidates(candidates);
  std::vector<ArmScore> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    require_dim(c.context, state.dim());
    scores.push_back({c.id, empirical_mean(state.ensure_arm(c.id))});
  }
  return argmax_decision(candidates, std::move(scores), rng);
}

Decision epsilon_greedy_select(LinUcbState& state, std::span<const Candidate> candidates, double epsilon,
                               Rng& rng) {
  require_candidates(candidates);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::kInvalidParameter, "epsilon must be in [0, 1]");
  // Degenerate rates decide the branch without a draw.
  const bool explore = epsilon >= 1.0 || (epsilon > 0.0 && uniform01(rng) < epsilon);
  Decision d;
  if (explore) {
    for (const auto& c : candidates) state.ensure_arm(c.id);
    d = uniform_random_select(candidates, rng);
  } else {
    d = greedy_select(state, candidates, rng);
  }
  d.epsilon_used = epsilon;
  return d;
}

double epsilon_decreasing_value(double epsilon0, std::uint64_t t) {
  if (t == 0) throw Error(ErrorCode::kInvalidRound, "round index must be >= 1");
  if (!(epsilon0 >= 0.0)) throw Error(ErrorCode::kInvalidParameter, "epsilon0 must be >= 0");
  return std::min(1.0, epsilon0 / static_cast<double>(t));
}

Decision RandomPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  return uniform_random_select(candidates, rng);
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(std::size_t d, double epsilon, std::string name)
    : state_(d, 0.0), epsilon_(epsilon), name_(std::move(name)) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::kInvalidParameter, "epsilon must be in [0, 1]");
}

Decision EpsilonGreedyPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  return epsilon_greedy_select(state_, candidates, epsilon_, rng);
}

void EpsilonGreedyPolicy::update(const ArmId& arm, const Context& x, double reward) {
  state_.update(arm, x, reward);
}

EpsilonDecreasingPolicy::EpsilonDecreasingPolicy(std::size_t d, double epsilon0) : state_(d, 0.0), epsilon0_(epsilon0) {
  if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
    throw Error(ErrorCode::kInvalidParameter, "epsilon0 must be >= 0");
  }
}

Decision EpsilonDecreasingPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  return epsilon_greedy_select(state_, candidates, epsilon_decreasing_value(epsilon0_, ++round_), rng);
}

void EpsilonDecreasingPolicy::update(const ArmId& arm, const Context& x, double reward) {
  state_.update(arm, x, reward);
}

Decision LinUcbPolicy::select(std::span<const Candidate> candidates, Rng& rng) {
  return linucb_select(state_, candidates, rng);
}

void LinUcbPolicy::update(const ArmId& arm, const Context& x, double reward) { state_.update(arm, x, reward); }

}  // namespace egucb
