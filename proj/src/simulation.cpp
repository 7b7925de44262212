#include "egucb/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egucb/error.hpp"

namespace egucb {

std::string_view to_string(Link link) {
  switch (link) {
    case Link::kLogistic: return "logistic";
    case Link::kClippedLinear: return "clipped_linear";
  }
  return "logistic";
}

Link parse_link(std::string_view text) {
  if (text == "logistic") return Link::kLogistic;
  if (text == "clipped_linear" || text == "clipped-linear") return Link::kClippedLinear;
  throw Error(ErrorCode::kInvalidValue, "unknown link '" + std::string(text) + "'");
}

double apply_link(Link link, double z) {
  switch (link) {
    case Link::kLogistic: return 1.0 / (1.0 + std::exp(-z));
    case Link::kClippedLinear: return std::clamp((z + 1.0) / 2.0, 0.0, 1.0);
  }
  return 0.0;
}

Vec random_unit_vector(std::size_t d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(d);
  double n = 0.0;
  while (!(n > 0.0)) {
    for (std::size_t i = 0; i < d; ++i) v[i] = gauss(rng);
    n = norm(v);
  }
  for (std::size_t i = 0; i < d; ++i) v[i] /= n;
  return v;
}

SyntheticEnv SyntheticEnv::create(std::size_t d, std::size_t num_arms, std::size_t arms_per_round, Link link,
                                  std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidConfig, "d must be >= 1");
  if (arms_per_round < 1) throw Error(ErrorCode::kInvalidConfig, "arms_per_round must be >= 1");
  if (arms_per_round > num_arms) {
    throw Error(ErrorCode::kInvalidConfig, "arms_per_round (" + std::to_string(arms_per_round) +
                                               ") exceeds num_arms (" + std::to_string(num_arms) + ")");
  }
  SyntheticEnv env;
  env.d_ = d;
  env.arms_per_round_ = arms_per_round;
  env.link_ = link;
  env.seed_ = seed;
  Rng rng = make_rng(seed, "env-theta");
  env.ids_.reserve(num_arms);
  env.theta_.reserve(num_arms);
  for (std::size_t a = 0; a < num_arms; ++a) {
    env.ids_.push_back(ArmId{"a" + std::to_string(a)});
    env.theta_.push_back(random_unit_vector(d, rng));
  }
  return env;
}

std::map<ArmId, Vec> SyntheticEnv::theta_star_map() const {
  std::map<ArmId, Vec> out;
  for (std::size_t a = 0; a < ids_.size(); ++a) out.emplace(ids_[a], theta_[a]);
  return out;
}

double SyntheticEnv::click_probability(std::size_t arm_index, const Vec& x) const {
  return apply_link(link_, dot(theta_.at(arm_index), x));
}

std::vector<OfferedArm> SyntheticEnv::draw_round(std::uint64_t /*t*/, Rng& rng) const {
  std::vector<std::size_t> pool(ids_.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < arms_per_round_; ++i) {
    const std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  const Vec u = random_unit_vector(d_, rng);
  std::vector<OfferedArm> out;
  out.reserve(arms_per_round_);
  for (std::size_t i = 0; i < arms_per_round_; ++i) {
    const std::size_t a = pool[i];
    out.push_back(OfferedArm{ids_[a], Context{u}, click_probability(a, u)});
  }
  return out;
}

int env_reward(double prob, Rng& rng) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, "click probability " + std::to_string(prob) + " outside [0, 1]");
  }
  return uniform01(rng) < prob ? 1 : 0;
}

std::vector<Candidate> to_candidates(std::span<const OfferedArm> offered) {
  std::vector<Candidate> out;
  out.reserve(offered.size());
  for (const auto& o : offered) out.push_back(Candidate{o.id, o.context});
  return out;
}

WindowedCtrReport windowed_ctr_from_rewards(std::span<const int> rewards, std::size_t window_size) {
  if (window_size == 0) throw Error(ErrorCode::kInvalidConfig, "window size must be >= 1");
  WindowedCtrReport report;
  report.window_size = window_size;
  for (std::size_t start = 0; start < rewards.size(); start += window_size) {
    const std::size_t end = std::min(rewards.size(), start + window_size);
    CtrWindow w;
    w.window_index = start / window_size;
    w.displays = end - start;
    for (std::size_t i = start; i < end; ++i) w.clicks += rewards[i] != 0 ? 1 : 0;
    w.ctr = static_cast<double>(w.clicks) / static_cast<double>(w.displays);
    report.total_displays += w.displays;
    report.total_clicks += w.clicks;
    report.windows.push_back(w);
  }
  report.cumulative_ctr = report.total_displays == 0
                              ? 0.0
                              : static_cast<double>(report.total_clicks) / static_cast<double>(report.total_displays);
  return report;
}

WindowedCtrReport windowed_ctr(std::span<const RoundRecord> records, std::size_t window_size) {
  std::vector<int> rewards;
  rewards.reserve(records.size());
  for (const auto& r : records) rewards.push_back(r.reward);
  return windowed_ctr_from_rewards(rewards, window_size);
}

WindowedCtrReport replay_evaluate(Policy& policy, const ReplayDataset& dataset, std::size_t window_size, Rng& rng) {
  if (dataset.events.empty()) throw Error(ErrorCode::kEmptyDataset, "replay dataset has no events");
  if (window_size == 0) throw Error(ErrorCode::kInvalidConfig, "window size must be >= 1");
  for (const auto& e : dataset.events) {
    if (e.offered.empty()) throw Error(ErrorCode::kInvalidData, "event " + std::to_string(e.t) + " offers no arms");
    bool logged_offered = false;
    for (const auto& c : e.offered) {
      if (c.context.features.size() != dataset.d) {
        throw Error(ErrorCode::kInvalidData, "event " + std::to_string(e.t) + " has features of dimension " +
                                                 std::to_string(c.context.features.size()) + ", expected " +
                                                 std::to_string(dataset.d));
      }
      logged_offered = logged_offered || c.id == e.chosen;
    }
    if (!logged_offered) {
      throw Error(ErrorCode::kInvalidData, "event " + std::to_string(e.t) + " logged an arm that was not offered");
    }
  }

  std::vector<int> matched;
  for (const auto& e : dataset.events) {
    const Decision d = policy.select(e.offered, rng);
    if (d.chosen != e.chosen) continue;
    const auto it = std::find_if(e.offered.begin(), e.offered.end(), [&](const Candidate& c) { return c.id == e.chosen; });
    policy.update(e.chosen, it->context, static_cast<double>(e.reward));
    matched.push_back(e.reward);
  }
  WindowedCtrReport report = windowed_ctr_from_rewards(matched, window_size);
  report.matched_events = matched.size();
  return report;
}

ReplayDataset generate_uniform_log(const SyntheticEnv& env, std::size_t events, Rng& env_rng, Rng& log_rng) {
  ReplayDataset ds;
  ds.d = env.dim();
  ds.logging_policy = "uniform";
  ds.events.reserve(events);
  for (std::size_t t = 1; t <= events; ++t) {
    const auto offered = env.draw_round(t, env_rng);
    const std::size_t pick = uniform_index(log_rng, offered.size());
    RoundRecord r;
    r.t = t;
    r.offered = to_candidates(offered);
    r.chosen = offered[pick].id;
    r.reward = env_reward(offered[pick].click_prob, env_rng);
    r.was_random = true;
    ds.events.push_back(std::move(r));
  }
  return ds;
}

}  // namespace egucb
