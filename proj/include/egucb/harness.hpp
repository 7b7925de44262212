#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egucb/config.hpp"
#include "egucb/policies.hpp"
#include "egucb/simulation.hpp"

namespace egucb {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kCsvHeader = "policy,seed,window_index,displays,clicks,ctr";

std::unique_ptr<Policy> make_policy(PolicyKind kind, const ExperimentConfig& config, std::size_t d);

// One (policy, seed) cell of an experiment.
struct RunResult {
  PolicyKind policy = PolicyKind::kExploit;
  std::uint64_t seed = 0;
  WindowedCtrReport report;
  std::uint64_t random_rounds = 0;
  std::optional<std::vector<double>> eg_final_p;
  std::shared_ptr<const Policy> final_policy;
};

// Runs `config.rounds` rounds of draw -> select -> reward -> update. The
// environment parameters and round stream depend only on the seed; the
// policy draws from its own stream, so every policy sees the same rounds for
// a given seed. When `trace` is non-null every round is appended to it.
RunResult run_simulation(const ExperimentConfig& config, PolicyKind policy, std::uint64_t seed,
                         std::vector<RoundRecord>* trace = nullptr);

// All (policy, seed) cells, sorted by policy name then seed.
std::vector<RunResult> run_compare(const ExperimentConfig& config);

RunResult run_replay(const ExperimentConfig& config, const ReplayDataset& dataset);

void write_ctr_csv(std::ostream& out, std::span<const RunResult> results);

struct CommandOutput {
  std::vector<RunResult> results;
  std::filesystem::path csv_path;
  std::filesystem::path metadata_path;
  double wall_seconds = 0.0;
};

// Metadata sidecar lives next to the CSV as `<csv>.meta`.
std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path);

CommandOutput cmd_run(const ExperimentConfig& config, const std::filesystem::path& out,
                      const std::optional<std::filesystem::path>& snapshot = std::nullopt);
CommandOutput cmd_compare(const ExperimentConfig& config, const std::filesystem::path& out);
CommandOutput cmd_replay(const ExperimentConfig& config, const std::filesystem::path& log_path,
                         const std::filesystem::path& out);

// Writes a uniform-random event log drawn from the configured environment.
void cmd_genlog(const ExperimentConfig& config, std::uint64_t events, const std::filesystem::path& out);

}  // namespace egucb
