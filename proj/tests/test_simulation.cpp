#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "egucb/error.hpp"
#include "egucb/event_log.hpp"
#include "egucb/simulation.hpp"
#include "oracles.hpp"

namespace egucb {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidInput;
}

TEST(EnvCreate, UnitNormAndDeterminism) {
  const SyntheticEnv one = env_create(2, 1, 1, Link::kLogistic, 5);
  EXPECT_NEAR(norm(one.theta_star(0)), 1.0, 1e-12);

  const SyntheticEnv a = env_create(10, 50, 10, Link::kLogistic, 123);
  const SyntheticEnv b = env_create(10, 50, 10, Link::kLogistic, 123);
  EXPECT_EQ(a.theta_star_map(), b.theta_star_map());
  for (std::size_t i = 0; i < a.num_arms(); ++i) EXPECT_NEAR(norm(a.theta_star(i)), 1.0, 1e-12);
  EXPECT_NE(a.theta_star_map(), env_create(10, 50, 10, Link::kLogistic, 124).theta_star_map());
}

TEST(EnvCreate, InvalidSizes) {
  EXPECT_EQ(code_of([] { env_create(3, 4, 5, Link::kLogistic, 1); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { env_create(0, 4, 2, Link::kLogistic, 1); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { env_create(3, 4, 0, Link::kLogistic, 1); }), ErrorCode::kInvalidConfig);
}

TEST(Links, Examples) {
  EXPECT_NEAR(apply_link(Link::kLogistic, 1.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(apply_link(Link::kLogistic, 1.0), 0.7311, 1e-4);
  EXPECT_DOUBLE_EQ(apply_link(Link::kClippedLinear, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(apply_link(Link::kClippedLinear, 3.0), 1.0);
  EXPECT_DOUBLE_EQ(apply_link(Link::kClippedLinear, -3.0), 0.0);
}

TEST(Links, ParallelAndOrthogonalContexts) {
  const SyntheticEnv env = env_create(4, 3, 3, Link::kLogistic, 9);
  EXPECT_NEAR(env.click_probability(0, env.theta_star(0)), 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  const SyntheticEnv lin = env_create(2, 1, 1, Link::kClippedLinear, 9);
  const Vec& th = lin.theta_star(0);
  EXPECT_NEAR(lin.click_probability(0, Vec{-th[1], th[0]}), 0.5, 1e-15);
}

TEST(Links, ProbabilitiesStayInUnitInterval) {
  Rng rng(21);
  for (Link link : {Link::kLogistic, Link::kClippedLinear}) {
    for (int i = 0; i < 1000000; ++i) {
      const double z = 3.0 * (2.0 * uniform01(rng) - 1.0);
      const double p = apply_link(link, z);
      ASSERT_TRUE(p >= 0.0 && p <= 1.0);
    }
  }
}

TEST(DrawRound, ShapesAndSharedContext) {
  for (Link link : {Link::kLogistic, Link::kClippedLinear}) {
    const SyntheticEnv env = env_create(6, 20, 7, link, 3);
    Rng rng(4);
    for (std::uint64_t t = 1; t <= 2000; ++t) {
      const auto offered = env.draw_round(t, rng);
      ASSERT_EQ(offered.size(), 7u);
      std::set<ArmId> ids;
      for (const auto& o : offered) {
        ids.insert(o.id);
        EXPECT_NEAR(norm(o.context.features), 1.0, 1e-12);
        EXPECT_EQ(o.context.features, offered.front().context.features);
        EXPECT_TRUE(o.click_prob >= 0.0 && o.click_prob <= 1.0);
      }
      EXPECT_EQ(ids.size(), 7u);
    }
  }
}

TEST(DrawRound, ArmsAreSampledUniformly) {
  const SyntheticEnv env = env_create(3, 10, 3, Link::kLogistic, 5);
  Rng rng(6);
  std::map<ArmId, int> counts;
  constexpr int kRounds = 30000;
  for (int t = 0; t < kRounds; ++t)
    for (const auto& o : env.draw_round(t, rng)) counts[o.id]++;
  for (const auto& [id, n] : counts) EXPECT_TRUE(testing::within_binomial(n / double(kRounds), 0.3, kRounds)) << id.value;
}

TEST(DrawRound, StreamIsReproducible) {
  const SyntheticEnv env = env_create(5, 12, 4, Link::kLogistic, 77);
  Rng a(1), b(1);
  for (int t = 0; t < 200; ++t) {
    const auto x = env.draw_round(t, a);
    const auto y = env.draw_round(t, b);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_EQ(x[i].id, y[i].id);
      EXPECT_EQ(x[i].context.features, y[i].context.features);
    }
    EXPECT_EQ(env_reward(x[0].click_prob, a), env_reward(y[0].click_prob, b));
  }
}

TEST(EnvReward, Bernoulli) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(env_reward(0.0, rng), 0);
    EXPECT_EQ(env_reward(1.0, rng), 1);
  }
  constexpr int kDraws = 100000;
  int clicks = 0;
  for (int i = 0; i < kDraws; ++i) clicks += env_reward(0.5, rng);
  EXPECT_TRUE(testing::within_binomial(clicks / double(kDraws), 0.5, kDraws));
  EXPECT_EQ(code_of([&] { env_reward(1.2, rng); }), ErrorCode::kInvalidProbability);
  EXPECT_EQ(code_of([&] { env_reward(-0.1, rng); }), ErrorCode::kInvalidProbability);
}

std::vector<RoundRecord> records_from(const std::vector<int>& rewards) {
  std::vector<RoundRecord> out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    RoundRecord r;
    r.t = i + 1;
    r.chosen = ArmId{"a"};
    r.offered = {Candidate{ArmId{"a"}, Context{Vec{1.0}}}};
    r.reward = rewards[i];
    out.push_back(std::move(r));
  }
  return out;
}

TEST(WindowedCtr, Examples) {
  const auto ten_k = windowed_ctr(records_from(std::vector<int>(10000, 1)), 1000);
  EXPECT_EQ(ten_k.windows.size(), 10u);
  for (const auto& w : ten_k.windows) EXPECT_EQ(w.ctr, 1.0);

  std::vector<int> alternating;
  for (int i = 0; i < 1000; ++i) alternating.push_back(i % 2 == 0 ? 1 : 0);
  for (const auto& w : windowed_ctr(records_from(alternating), 100).windows) EXPECT_EQ(w.ctr, 0.5);

  const auto partial = windowed_ctr(records_from(std::vector<int>(25, 0)), 10);
  ASSERT_EQ(partial.windows.size(), 3u);
  EXPECT_EQ(partial.windows.back().displays, 5u);
  EXPECT_EQ(partial.windows.back().window_index, 2u);

  EXPECT_EQ(code_of([] { windowed_ctr({}, 0); }), ErrorCode::kInvalidConfig);
}

TEST(WindowedCtr, Conservation) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> rewards(uniform_index(rng, 5000));
    for (int& r : rewards) r = uniform01(rng) < 0.37 ? 1 : 0;
    const std::size_t window = 1 + uniform_index(rng, 700);
    const auto rep = windowed_ctr_from_rewards(rewards, window);
    std::uint64_t clicks = 0, displays = 0;
    for (const auto& w : rep.windows) {
      clicks += w.clicks;
      displays += w.displays;
      EXPECT_TRUE(w.ctr >= 0.0 && w.ctr <= 1.0);
    }
    const auto total = static_cast<std::uint64_t>(std::count(rewards.begin(), rewards.end(), 1));
    EXPECT_EQ(clicks, total);
    EXPECT_EQ(displays, rewards.size());
    if (!rewards.empty()) EXPECT_DOUBLE_EQ(rep.cumulative_ctr, double(total) / double(rewards.size()));
  }
}

// Replays the logged choice of each event, in order.
class LoggedArmPolicy final : public Policy {
 public:
  explicit LoggedArmPolicy(const ReplayDataset& ds) {
    for (const auto& e : ds.events) queue_.push_back(e.chosen);
  }
  std::string_view name() const override { return "logged"; }
  Decision select(std::span<const Candidate> c, Rng&) override {
    Decision d;
    d.chosen = queue_.front();
    queue_.pop_front();
    for (const auto& x : c) d.scores.push_back({x.id, 0.0});
    return d;
  }
  void update(const ArmId&, const Context&, double) override { ++updates; }
  int updates = 0;

 private:
  std::deque<ArmId> queue_;
};

class FixedArmPolicy final : public Policy {
 public:
  explicit FixedArmPolicy(ArmId arm) : arm_(std::move(arm)) {}
  std::string_view name() const override { return "fixed"; }
  Decision select(std::span<const Candidate> c, Rng&) override {
    Decision d;
    d.chosen = c.front().id;
    for (const auto& x : c) {
      d.scores.push_back({x.id, x.id == arm_ ? 1.0 : 0.0});
      if (x.id == arm_) d.chosen = arm_;
    }
    return d;
  }
  void update(const ArmId&, const Context&, double) override { ++updates; }
  int updates = 0;

 private:
  ArmId arm_;
};

TEST(Replay, FullMatch) {
  const SyntheticEnv env = env_create(4, 8, 3, Link::kLogistic, 2);
  Rng er(1), lr(2), pr(3);
  const ReplayDataset ds = generate_uniform_log(env, 3000, er, lr);
  LoggedArmPolicy policy(ds);
  const auto rep = replay_evaluate(policy, ds, 500, pr);
  EXPECT_EQ(*rep.matched_events, ds.events.size());
  EXPECT_EQ(policy.updates, static_cast<int>(ds.events.size()));
  int clicks = 0;
  for (const auto& e : ds.events) clicks += e.reward;
  EXPECT_DOUBLE_EQ(rep.cumulative_ctr, clicks / double(ds.events.size()));
}

TEST(Replay, FixedArmMatchesOneFifth) {
  const SyntheticEnv env = env_create(3, 5, 5, Link::kLogistic, 4);
  Rng er(5), lr(6), pr(7);
  const ReplayDataset ds = generate_uniform_log(env, 20000, er, lr);
  FixedArmPolicy policy(ArmId{"a2"});
  const auto rep = replay_evaluate(policy, ds, 1000, pr);
  EXPECT_TRUE(testing::within_binomial(*rep.matched_events / double(ds.events.size()), 0.2, ds.events.size()));
  EXPECT_EQ(policy.updates, static_cast<int>(*rep.matched_events));
  EXPECT_EQ(rep.total_displays, *rep.matched_events);
}

TEST(Replay, Errors) {
  FixedArmPolicy policy(ArmId{"a"});
  Rng rng(1);
  ReplayDataset empty;
  empty.d = 2;
  EXPECT_EQ(code_of([&] { replay_evaluate(policy, empty, 10, rng); }), ErrorCode::kEmptyDataset);

  ReplayDataset bad;
  bad.d = 2;
  bad.events = records_from({1});
  EXPECT_EQ(code_of([&] { replay_evaluate(policy, bad, 10, rng); }), ErrorCode::kInvalidData);
}

TEST(EventLog, WriteReadPreservesEvents) {
  const SyntheticEnv env = env_create(5, 9, 4, Link::kClippedLinear, 8);
  Rng er(1), lr(2);
  const ReplayDataset ds = generate_uniform_log(env, 250, er, lr);
  std::stringstream buf;
  write_event_log(buf, ds);
  const ReplayDataset back = read_event_log(buf);
  EXPECT_EQ(back.d, ds.d);
  EXPECT_EQ(back.logging_policy, "uniform");
  ASSERT_EQ(back.events.size(), ds.events.size());
  for (std::size_t i = 0; i < ds.events.size(); ++i) {
    EXPECT_EQ(back.events[i].t, ds.events[i].t);
    EXPECT_EQ(back.events[i].chosen, ds.events[i].chosen);
    EXPECT_EQ(back.events[i].reward, ds.events[i].reward);
    ASSERT_EQ(back.events[i].offered.size(), ds.events[i].offered.size());
    for (std::size_t k = 0; k < ds.events[i].offered.size(); ++k) {
      EXPECT_EQ(back.events[i].offered[k].id, ds.events[i].offered[k].id);
      EXPECT_EQ(back.events[i].offered[k].context.features, ds.events[i].offered[k].context.features);
    }
  }
}

TEST(EventLog, ParseErrorsCarryLineNumbers) {
  std::stringstream in;
  in << R"({"format":"egucb-events","version":1,"d":2})" << '\n'
     << R"({"t":1,"arms":[{"id":"x","features":[0.1,0.2]}],"chosen":"x","click":1})" << '\n'
     << "\n"
     << R"({"t":2,"arms":[{"id":"x","features":[0.1]}],"chosen":"x","click":1})" << '\n';
  try {
    read_event_log(in);
    FAIL() << "expected parse-error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }

  std::stringstream garbage;
  garbage << R"({"format":"egucb-events","version":1,"d":2})" << "\nnot json\n";
  EXPECT_EQ(code_of([&] { read_event_log(garbage); }), ErrorCode::kParseError);

  std::stringstream click;
  click << R"({"format":"egucb-events","version":1,"d":1})" << '\n'
        << R"({"t":1,"arms":[{"id":"x","features":[0.1]}],"chosen":"x","click":2})" << '\n';
  EXPECT_EQ(code_of([&] { read_event_log(click); }), ErrorCode::kParseError);

  std::stringstream unknown_arm;
  unknown_arm << R"({"format":"egucb-events","version":1,"d":1})" << '\n'
              << R"({"t":1,"arms":[{"id":"x","features":[0.1]}],"chosen":"y","click":0})" << '\n';
  EXPECT_EQ(code_of([&] { read_event_log(unknown_arm); }), ErrorCode::kParseError);

  std::stringstream empty;
  EXPECT_EQ(code_of([&] { read_event_log(empty); }), ErrorCode::kEmptyDataset);
}

}  // namespace
}  // namespace egucb
