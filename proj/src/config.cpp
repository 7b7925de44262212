#include "egucb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "egucb/eg.hpp"
#include "egucb/error.hpp"

namespace egucb {

namespace {

constexpr std::pair<PolicyKind, std::string_view> kPolicyNames[] = {
    {PolicyKind::kExploit, "exploit"},
    {PolicyKind::kRandom, "random"},
    {PolicyKind::kEpsilonGreedy, "epsilon_greedy"},
    {PolicyKind::kEpsilonDecreasing, "epsilon_decreasing"},
    {PolicyKind::kLinUcb, "linucb"},
    {PolicyKind::kEgGreedy, "eg_greedy"},
    {PolicyKind::kGradientLinUcb, "gradient_linucb"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::kInvalidValue,
              fmt::format("{} = {}: {}", key, value, why));
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  if (!v.empty() && v.front() == '-') bad_value(key, v, "must be a non-negative integer");
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "must be a non-negative integer");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    bad_value(key, v, "must be a finite number");
  }
  return out;
}

std::vector<std::string_view> parse_list(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad_value(key, v, "must be a list like [a, b]");
  std::string_view body = trim(v.substr(1, v.size() - 2));
  std::vector<std::string_view> items;
  if (body.empty()) return items;
  while (true) {
    const auto comma = body.find(',');
    const auto item = trim(body.substr(0, comma));
    if (item.empty()) bad_value(key, v, "empty list element");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return items;
}

void require(bool ok, std::string_view key, double value, std::string_view why) {
  if (!ok) bad_value(key, fmt::format("{}", value), why);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"policy",
       [](ExperimentConfig& c, auto, auto v) { c.policy = parse_policy(trim(v)); }},
      {"policies",
       [](ExperimentConfig& c, auto k, auto v) {
         c.policies.clear();
         for (auto item : parse_list(k, v)) c.policies.push_back(parse_policy(item));
       }},
      {"rounds", [](ExperimentConfig& c, auto k, auto v) { c.rounds = parse_uint(k, v); }},
      {"window", [](ExperimentConfig& c, auto k, auto v) { c.window = parse_uint(k, v); }},
      {"arms_per_round", [](ExperimentConfig& c, auto k, auto v) { c.arms_per_round = parse_uint(k, v); }},
      {"num_arms", [](ExperimentConfig& c, auto k, auto v) { c.num_arms = parse_uint(k, v); }},
      {"d", [](ExperimentConfig& c, auto k, auto v) { c.d = parse_uint(k, v); }},
      {"link", [](ExperimentConfig& c, auto, auto v) { c.link = parse_link(trim(v)); }},
      {"seed", [](ExperimentConfig& c, auto k, auto v) { c.seed = parse_uint(k, v); }},
      {"num_seeds", [](ExperimentConfig& c, auto k, auto v) { c.num_seeds = parse_uint(k, v); }},
      {"alpha", [](ExperimentConfig& c, auto k, auto v) { c.alpha = parse_real(k, v); }},
      {"epsilon", [](ExperimentConfig& c, auto k, auto v) { c.epsilon = parse_real(k, v); }},
      {"epsilon0", [](ExperimentConfig& c, auto k, auto v) { c.epsilon0 = parse_real(k, v); }},
      {"eg_candidates",
       [](ExperimentConfig& c, auto k, auto v) {
         c.eg_candidates.clear();
         for (auto item : parse_list(k, v)) c.eg_candidates.push_back(parse_real(k, item));
       }},
      {"tau", [](ExperimentConfig& c, auto k, auto v) { c.tau = parse_real(k, v); }},
      {"beta", [](ExperimentConfig& c, auto k, auto v) { c.beta = parse_real(k, v); }},
      {"kappa", [](ExperimentConfig& c, auto k, auto v) { c.kappa = parse_real(k, v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  for (const auto& [k, name] : kPolicyNames)
    if (k == kind) return name;
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  for (const auto& [k, n] : kPolicyNames)
    if (n == name) return k;
  throw Error(ErrorCode::kInvalidPolicy, fmt::format("unknown policy '{}'", name));
}

std::vector<PolicyKind> default_policy_suite() {
  return {PolicyKind::kExploit, PolicyKind::kEpsilonGreedy, PolicyKind::kEpsilonDecreasing,
          PolicyKind::kEgGreedy, PolicyKind::kLinUcb, PolicyKind::kGradientLinUcb};
}

std::vector<double> default_eg_candidates() { return {0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0}; }

void ExperimentConfig::validate() const {
  require(rounds >= 1, "rounds", static_cast<double>(rounds), "must be >= 1");
  require(window >= 1, "window", static_cast<double>(window), "must be >= 1");
  require(arms_per_round >= 1, "arms_per_round", static_cast<double>(arms_per_round), "must be >= 1");
  require(num_arms >= arms_per_round, "num_arms", static_cast<double>(num_arms), "must be >= arms_per_round");
  require(d >= 1, "d", static_cast<double>(d), "must be >= 1");
  require(num_seeds >= 1, "num_seeds", static_cast<double>(num_seeds), "must be >= 1");
  require(alpha >= 0.0, "alpha", alpha, "must be >= 0");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon", epsilon, "must be in [0, 1]");
  require(epsilon0 >= 0.0, "epsilon0", epsilon0, "must be >= 0");
  if (policies.empty()) throw Error(ErrorCode::kInvalidValue, "policies: at least one policy is required");
  try {
    EgState probe(eg_candidates, tau, beta, kappa);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidValue, e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, fmt::format("line {}: expected 'key = value'", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error(ErrorCode::kUnknownKey, fmt::format("unknown key '{}'", key));
    if (!seen.emplace(key).second) bad_value(key, value, "key given more than once");
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileError, fmt::format("cannot open config '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::vector<std::string_view> names;
  for (auto p : c.policies) names.push_back(to_string(p));
  std::string out;
  out += fmt::format("policy = {}\n", to_string(c.policy));
  out += fmt::format("policies = [{}]\n", fmt::join(names, ", "));
  out += fmt::format("rounds = {}\n", c.rounds);
  out += fmt::format("window = {}\n", c.window);
  out += fmt::format("arms_per_round = {}\n", c.arms_per_round);
  out += fmt::format("num_arms = {}\n", c.num_arms);
  out += fmt::format("d = {}\n", c.d);
  out += fmt::format("link = {}\n", to_string(c.link));
  out += fmt::format("seed = {}\n", c.seed);
  out += fmt::format("num_seeds = {}\n", c.num_seeds);
  out += fmt::format("alpha = {}\n", c.alpha);
  out += fmt::format("epsilon = {}\n", c.epsilon);
  out += fmt::format("epsilon0 = {}\n", c.epsilon0);
  out += fmt::format("eg_candidates = [{}]\n", fmt::join(c.eg_candidates, ", "));
  out += fmt::format("tau = {}\n", c.tau);
  out += fmt::format("beta = {}\n", c.beta);
  out += fmt::format("kappa = {}\n", c.kappa);
  return out;
}

}  // namespace egucb
