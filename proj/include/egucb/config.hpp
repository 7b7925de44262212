#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "egucb/simulation.hpp"

namespace egucb {

enum class PolicyKind { kExploit, kRandom, kEpsilonGreedy, kEpsilonDecreasing, kLinUcb, kEgGreedy, kGradientLinUcb };

std::string_view to_string(PolicyKind kind);
// Throws kInvalidPolicy for names outside the supported set.
PolicyKind parse_policy(std::string_view name);

// The comparison suite: pure exploitation plus the related-work baselines.
std::vector<PolicyKind> default_policy_suite();
std::vector<double> default_eg_candidates();

struct ExperimentConfig {
  PolicyKind policy = PolicyKind::kGradientLinUcb;
  std::vector<PolicyKind> policies = default_policy_suite();  // compare only

  std::uint64_t rounds = 10000;
  std::uint64_t window = 1000;
  std::uint64_t arms_per_round = 10;
  std::uint64_t num_arms = 50;
  std::uint64_t d = 10;
  Link link = Link::kLogistic;
  std::uint64_t seed = 1;
  std::uint64_t num_seeds = 1;  // compare runs seeds seed, seed+1, ...

  double alpha = 0.5;
  double epsilon = 0.1;
  double epsilon0 = 10.0;
  std::vector<double> eg_candidates = default_eg_candidates();
  double tau = 0.1;
  double beta = 0.01;
  double kappa = 0.05;

  void validate() const;
};

// Parses `key = value` lines. Lists use `[a, b, c]`; `#` starts a comment.
// Unset keys keep their defaults. Errors: kUnknownKey naming the key,
// kInvalidValue for out-of-range or unparsable values, kParseError for lines
// without `=`.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace egucb
