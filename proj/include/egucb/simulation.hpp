#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egucb/linalg.hpp"
#include "egucb/policies.hpp"
#include "egucb/random.hpp"

namespace egucb {

enum class Link { kLogistic, kClippedLinear };

std::string_view to_string(Link link);
Link parse_link(std::string_view text);

// logistic: 1 / (1 + e^-z); clipped-linear: clamp((z + 1) / 2, 0, 1).
double apply_link(Link link, double z);

struct OfferedArm {
  ArmId id;
  Context context;
  double click_prob = 0.0;
};

// Synthetic contextual CTR environment with hidden unit-norm arm parameters.
// Immutable after creation; round draws take the caller's rng.
class SyntheticEnv {
 public:
  static SyntheticEnv create(std::size_t d, std::size_t num_arms, std::size_t arms_per_round, Link link,
                             std::uint64_t seed);

  std::size_t dim() const noexcept { return d_; }
  std::size_t num_arms() const noexcept { return ids_.size(); }
  std::size_t arms_per_round() const noexcept { return arms_per_round_; }
  Link link() const noexcept { return link_; }
  std::uint64_t seed() const noexcept { return seed_; }

  const std::vector<ArmId>& arm_ids() const noexcept { return ids_; }
  const Vec& theta_star(std::size_t arm_index) const { return theta_.at(arm_index); }
  std::map<ArmId, Vec> theta_star_map() const;

  // Samples arms_per_round distinct arms and one shared unit-norm user
  // direction u; every offered arm sees x = u.
  std::vector<OfferedArm> draw_round(std::uint64_t t, Rng& rng) const;

  double click_probability(std::size_t arm_index, const Vec& x) const;

 private:
  std::size_t d_ = 0;
  std::size_t arms_per_round_ = 0;
  Link link_ = Link::kLogistic;
  std::uint64_t seed_ = 0;
  std::vector<ArmId> ids_;
  std::vector<Vec> theta_;
};

inline SyntheticEnv env_create(std::size_t d, std::size_t num_arms, std::size_t arms_per_round, Link link,
                               std::uint64_t seed) {
  return SyntheticEnv::create(d, num_arms, arms_per_round, link, seed);
}

// Uniformly distributed direction on the unit sphere in R^d.
Vec random_unit_vector(std::size_t d, Rng& rng);

// Bernoulli(prob) click; always consumes exactly one draw.
int env_reward(double prob, Rng& rng);

std::vector<Candidate> to_candidates(std::span<const OfferedArm> offered);

struct RoundRecord {
  std::uint64_t t = 0;
  std::vector<Candidate> offered;
  ArmId chosen;
  int reward = 0;
  std::optional<double> epsilon_used;
  bool was_random = false;
};

struct ReplayDataset {
  std::size_t d = 0;
  std::vector<RoundRecord> events;
  std::string logging_policy = "uniform";
};

struct CtrWindow {
  std::size_t window_index = 0;
  std::uint64_t displays = 0;
  std::uint64_t clicks = 0;
  double ctr = 0.0;
};

struct WindowedCtrReport {
  std::size_t window_size = 0;
  std::vector<CtrWindow> windows;
  std::uint64_t total_displays = 0;
  std::uint64_t total_clicks = 0;
  double cumulative_ctr = 0.0;
  // Set by replay evaluation: number of logged events whose arm matched.
  std::optional<std::uint64_t> matched_events;
};

// Consecutive windows of window_size rounds; a trailing partial window is
// reported with its actual display count.
WindowedCtrReport windowed_ctr(std::span<const RoundRecord> records, std::size_t window_size);
WindowedCtrReport windowed_ctr_from_rewards(std::span<const int> rewards, std::size_t window_size);

// Rejection-matching replay: the policy sees each logged round's arms; only
// rounds where its choice equals the logged choice are scored and fed back.
WindowedCtrReport replay_evaluate(Policy& policy, const ReplayDataset& dataset, std::size_t window_size, Rng& rng);

// Events logged by a uniform-random policy acting in env.
ReplayDataset generate_uniform_log(const SyntheticEnv& env, std::size_t events, Rng& env_rng, Rng& log_rng);

}  // namespace egucb
