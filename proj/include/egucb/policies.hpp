#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egucb/linalg.hpp"
#include "egucb/random.hpp"

namespace egucb {

class EgState;

struct ArmId {
  std::string value;

  friend auto operator<=>(const ArmId&, const ArmId&) = default;
  friend bool operator==(const ArmId&, const ArmId&) = default;
};

struct Context {
  Vec features;
};

// One selectable arm in a round together with the features it is offered with.
struct Candidate {
  ArmId id;
  Context context;
};

// Disjoint LinUCB per-arm state. `a` is kept alongside its inverse so the
// inverse can be periodically recomputed from scratch.
struct ArmModel {
  Mat a;
  Mat a_inv;
  Vec b;
  std::uint64_t pulls = 0;
  double click_sum = 0.0;

  static ArmModel fresh(std::size_t d);
};

struct ArmScore {
  ArmId arm;
  double score = 0.0;
};

// Scores are listed in candidate order. Uniform-random decisions report 0 for
// every candidate.
struct Decision {
  ArmId chosen;
  std::vector<ArmScore> scores;
  bool was_random = false;
  std::optional<double> epsilon_used;
};

class LinUcbState {
 public:
  // Inverse is rebuilt from the accumulated design matrix every this many pulls.
  static constexpr std::uint64_t kRefreshInterval = 1000;

  LinUcbState(std::size_t d, double alpha);

  std::size_t dim() const noexcept { return d_; }
  double alpha() const noexcept { return alpha_; }

  void init_arm(const ArmId& arm);
  bool has_arm(const ArmId& arm) const { return arms_.contains(arm); }
  const ArmModel& arm(const ArmId& arm) const;
  ArmModel& ensure_arm(const ArmId& arm);
  void update(const ArmId& arm, const Context& x, double reward);

  const std::map<ArmId, ArmModel>& arms() const noexcept { return arms_; }

  // Restores a previously captured arm verbatim (used by snapshot loading).
  void restore_arm(const ArmId& arm, ArmModel model);

 private:
  std::size_t d_;
  double alpha_;
  std::map<ArmId, ArmModel> arms_;
};

Vec ridge_estimate(const ArmModel& model);

// theta^T x + sqrt(alpha * x^T A^-1 x)
double ucb_score(const ArmModel& model, const Context& x, double alpha);

// Mean observed reward, 0 for an arm that has never been pulled.
double empirical_mean(const ArmModel& model);

Decision linucb_select(LinUcbState& state, std::span<const Candidate> candidates, Rng& rng);
void linucb_update(LinUcbState& state, const ArmId& arm, const Context& x, double reward);

Decision uniform_random_select(std::span<const Candidate> candidates, Rng& rng);
Decision greedy_select(LinUcbState& state, std::span<const Candidate> candidates, Rng& rng);
Decision epsilon_greedy_select(LinUcbState& state, std::span<const Candidate> candidates, double epsilon, Rng& rng);

// min(1, epsilon0 / t) for t >= 1.
double epsilon_decreasing_value(double epsilon0, std::uint64_t t);

// Common surface used by the simulation and replay drivers.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;
  virtual Decision select(std::span<const Candidate> candidates, Rng& rng) = 0;
  virtual void update(const ArmId& arm, const Context& x, double reward) = 0;

  virtual const LinUcbState* linucb_state() const { return nullptr; }
  virtual const EgState* eg_state() const { return nullptr; }
};

class RandomPolicy final : public Policy {
 public:
  std::string_view name() const override { return "random"; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  void update(const ArmId&, const Context&, double) override {}
};

// Fixed-epsilon greedy on empirical CTR. epsilon = 0 is the pure exploitation baseline.
class EpsilonGreedyPolicy final : public Policy {
 public:
  EpsilonGreedyPolicy(std::size_t d, double epsilon, std::string name = "epsilon_greedy");

  std::string_view name() const override { return name_; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  void update(const ArmId& arm, const Context& x, double reward) override;
  const LinUcbState* linucb_state() const override { return &state_; }

 private:
  LinUcbState state_;
  double epsilon_;
  std::string name_;
};

class EpsilonDecreasingPolicy final : public Policy {
 public:
  EpsilonDecreasingPolicy(std::size_t d, double epsilon0);

  std::string_view name() const override { return "epsilon_decreasing"; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  void update(const ArmId& arm, const Context& x, double reward) override;
  const LinUcbState* linucb_state() const override { return &state_; }

 private:
  LinUcbState state_;
  double epsilon0_;
  std::uint64_t round_ = 0;
};

class LinUcbPolicy final : public Policy {
 public:
  LinUcbPolicy(std::size_t d, double alpha) : state_(d, alpha) {}
  explicit LinUcbPolicy(LinUcbState state) : state_(std::move(state)) {}

  std::string_view name() const override { return "linucb"; }
  Decision select(std::span<const Candidate> candidates, Rng& rng) override;
  void update(const ArmId& arm, const Context& x, double reward) override;
  const LinUcbState* linucb_state() const override { return &state_; }

 private:
  LinUcbState state_;
};

}  // namespace egucb
