#include "egucb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "egucb/eg.hpp"
#include "egucb/error.hpp"
#include "egucb/event_log.hpp"
#include "egucb/snapshot.hpp"

namespace egucb {

namespace {

EgState make_eg(const ExperimentConfig& c) { return EgState(c.eg_candidates, c.tau, c.beta, c.kappa); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kFileError, fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kFileError, fmt::format("failed writing '{}'", path.string()));
}

void sort_results(std::vector<RunResult>& results) {
  std::sort(results.begin(), results.end(), [](const RunResult& a, const RunResult& b) {
    const auto an = to_string(a.policy), bn = to_string(b.policy);
    if (an != bn) return an < bn;
    return a.seed < b.seed;
  });
}

std::string metadata_text(std::string_view command, const ExperimentConfig& config,
                          std::span<const RunResult> results, double wall_seconds,
                          const std::vector<std::string>& extra) {
  std::string out;
  out += "# egucb run metadata\n";
  out += fmt::format("command = {}\n", command);
  out += fmt::format("code_version = {}\n", kCodeVersion);
  out += to_config_text(config);
  for (const auto& line : extra) out += line + '\n';
  for (const auto& r : results) {
    const auto label = fmt::format("{}.{}", to_string(r.policy), r.seed);
    out += fmt::format("cumulative_ctr.{} = {}\n", label, r.report.cumulative_ctr);
    out += fmt::format("random_rounds.{} = {}\n", label, r.random_rounds);
    if (r.report.matched_events) out += fmt::format("matched_events.{} = {}\n", label, *r.report.matched_events);
    if (r.eg_final_p) out += fmt::format("eg_final_p.{} = [{}]\n", label, fmt::join(*r.eg_final_p, ", "));
  }
  out += fmt::format("wall_clock_seconds = {:.3f}\n", wall_seconds);
  return out;
}

void write_outputs(CommandOutput& output, std::string_view command, const ExperimentConfig& config,
                   const std::filesystem::path& out, const std::vector<std::string>& extra = {}) {
  output.csv_path = out;
  output.metadata_path = metadata_path_for(out);
  {
    auto csv = open_for_write(output.csv_path);
    write_ctr_csv(csv, output.results);
    finish_write(csv, output.csv_path);
  }
  auto meta = open_for_write(output.metadata_path);
  meta << metadata_text(command, config, output.results, output.wall_seconds, extra);
  finish_write(meta, output.metadata_path);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void capture_eg(RunResult& result, const Policy& policy) {
  if (const EgState* eg = policy.eg_state()) result.eg_final_p = eg->probabilities();
}

}  // namespace

std::unique_ptr<Policy> make_policy(PolicyKind kind, const ExperimentConfig& c, std::size_t d) {
  switch (kind) {
    case PolicyKind::kExploit: return std::make_unique<EpsilonGreedyPolicy>(d, 0.0, "exploit");
    case PolicyKind::kRandom: return std::make_unique<RandomPolicy>();
    case PolicyKind::kEpsilonGreedy: return std::make_unique<EpsilonGreedyPolicy>(d, c.epsilon);
    case PolicyKind::kEpsilonDecreasing: return std::make_unique<EpsilonDecreasingPolicy>(d, c.epsilon0);
    case PolicyKind::kLinUcb: return std::make_unique<LinUcbPolicy>(d, c.alpha);
    case PolicyKind::kEgGreedy: return std::make_unique<EgGreedyPolicy>(d, make_eg(c));
    case PolicyKind::kGradientLinUcb:
      return std::make_unique<GradientLinUcbPolicy>(LinUcbState(d, c.alpha), make_eg(c));
  }
  throw Error(ErrorCode::kInvalidPolicy, "unhandled policy kind");
}

RunResult run_simulation(const ExperimentConfig& config, PolicyKind kind, std::uint64_t seed,
                         std::vector<RoundRecord>* trace) {
  config.validate();
  const SyntheticEnv env = SyntheticEnv::create(config.d, config.num_arms, config.arms_per_round, config.link, seed);
  Rng env_rng = make_rng(seed, "env-rounds");
  Rng policy_rng = make_rng(seed, "policy");
  std::shared_ptr<Policy> policy = make_policy(kind, config, config.d);

  RunResult result;
  result.policy = kind;
  result.seed = seed;
  std::vector<int> rewards;
  rewards.reserve(config.rounds);
  for (std::uint64_t t = 1; t <= config.rounds; ++t) {
    const auto offered = env.draw_round(t, env_rng);
    const auto candidates = to_candidates(offered);
    const Decision d = policy->select(candidates, policy_rng);
    const auto it = std::find_if(offered.begin(), offered.end(), [&](const OfferedArm& o) { return o.id == d.chosen; });
    const int reward = env_reward(it->click_prob, env_rng);
    policy->update(d.chosen, it->context, static_cast<double>(reward));
    rewards.push_back(reward);
    result.random_rounds += d.was_random ? 1 : 0;
    if (trace) trace->push_back(RoundRecord{t, candidates, d.chosen, reward, d.epsilon_used, d.was_random});
  }
  result.report = windowed_ctr_from_rewards(rewards, config.window);
  capture_eg(result, *policy);
  result.final_policy = std::move(policy);
  return result;
}

std::vector<RunResult> run_compare(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunResult> results;
  for (PolicyKind kind : config.policies)
    for (std::uint64_t s = 0; s < config.num_seeds; ++s) results.push_back(run_simulation(config, kind, config.seed + s));
  sort_results(results);
  return results;
}

RunResult run_replay(const ExperimentConfig& config, const ReplayDataset& dataset) {
  config.validate();
  Rng policy_rng = make_rng(config.seed, "policy");
  std::shared_ptr<Policy> policy = make_policy(config.policy, config, dataset.d);
  RunResult result;
  result.policy = config.policy;
  result.seed = config.seed;
  result.report = replay_evaluate(*policy, dataset, config.window, policy_rng);
  capture_eg(result, *policy);
  result.final_policy = std::move(policy);
  return result;
}

void write_ctr_csv(std::ostream& out, std::span<const RunResult> results) {
  out << kCsvHeader << '\n';
  for (const auto& r : results)
    for (const auto& w : r.report.windows)
      out << fmt::format("{},{},{},{},{},{:.6f}\n", to_string(r.policy), r.seed, w.window_index, w.displays, w.clicks,
                         w.ctr);
}

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p += ".meta";
  return p;
}

CommandOutput cmd_run(const ExperimentConfig& config, const std::filesystem::path& out,
                      const std::optional<std::filesystem::path>& snapshot) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutput output;
  output.results.push_back(run_simulation(config, config.policy, config.seed));
  output.wall_seconds = seconds_since(start);
  write_outputs(output, "run", config, out);

  if (snapshot) {
    const Policy& p = *output.results.front().final_policy;
    auto snap = open_for_write(*snapshot);
    snap << "{\n\"policy\": \"" << p.name() << "\"";
    if (const LinUcbState* lin = p.linucb_state()) snap << ",\n\"linucb\": " << linucb_snapshot(*lin);
    if (const EgState* eg = p.eg_state()) snap << ",\n\"eg\": " << eg_snapshot(*eg);
    snap << "\n}\n";
    finish_write(snap, *snapshot);
  }
  return output;
}

CommandOutput cmd_compare(const ExperimentConfig& config, const std::filesystem::path& out) {
  const auto start = std::chrono::steady_clock::now();
  CommandOutput output;
  output.results = run_compare(config);
  output.wall_seconds = seconds_since(start);
  write_outputs(output, "compare", config, out);
  return output;
}

CommandOutput cmd_replay(const ExperimentConfig& config, const std::filesystem::path& log_path,
                         const std::filesystem::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const ReplayDataset dataset = read_event_log_file(log_path);
  CommandOutput output;
  output.results.push_back(run_replay(config, dataset));
  output.wall_seconds = seconds_since(start);
  const auto matched = output.results.front().report.matched_events.value_or(0);
  write_outputs(output, "replay", config, out,
                {fmt::format("log_path = {}", log_path.string()), fmt::format("log_events = {}", dataset.events.size()),
                 fmt::format("log_d = {}", dataset.d), fmt::format("logging_policy = {}", dataset.logging_policy),
                 fmt::format("matched_fraction = {}",
                             static_cast<double>(matched) / static_cast<double>(dataset.events.size()))});
  return output;
}

void cmd_genlog(const ExperimentConfig& config, std::uint64_t events, const std::filesystem::path& out) {
  config.validate();
  const SyntheticEnv env =
      SyntheticEnv::create(config.d, config.num_arms, config.arms_per_round, config.link, config.seed);
  Rng env_rng = make_rng(config.seed, "env-rounds");
  Rng log_rng = make_rng(config.seed, "logger");
  write_event_log_file(out, generate_uniform_log(env, events, env_rng, log_rng));
}

}  // namespace egucb
