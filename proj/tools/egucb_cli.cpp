#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "egucb/config.hpp"
#include "egucb/error.hpp"
#include "egucb/harness.hpp"
#include "egucb/snapshot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

egucb::ExperimentConfig load(const std::string& config_path, const std::optional<std::uint64_t>& seed) {
  egucb::ExperimentConfig config = config_path.empty() ? egucb::parse_config("") : egucb::load_config_file(config_path);
  if (seed) config.seed = *seed;
  return config;
}

void print_summary(const egucb::CommandOutput& out) {
  for (const auto& r : out.results) {
    std::cout << fmt::format("{:<20} seed={:<6} cumulative_ctr={:.4f}", egucb::to_string(r.policy), r.seed,
                             r.report.cumulative_ctr);
    if (!r.report.windows.empty()) std::cout << fmt::format(" final_window_ctr={:.4f}", r.report.windows.back().ctr);
    if (r.report.matched_events) std::cout << fmt::format(" matched={}", *r.report.matched_events);
    std::cout << '\n';
  }
  std::cout << "wrote " << out.csv_path.string() << " and " << out.metadata_path.string() << '\n';
}

void inspect(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw egucb::Error(egucb::ErrorCode::kFileError, "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw egucb::Error(egucb::ErrorCode::kParseError, e.what());
  }
  std::cout << "policy: " << doc.value("policy", "?") << '\n';
  if (doc.contains("linucb")) {
    const auto lin = egucb::load_linucb_snapshot(doc["linucb"].dump());
    std::cout << fmt::format("linucb: d={} alpha={} arms={}\n", lin.dim(), lin.alpha(), lin.arms().size());
    for (const auto& [id, m] : lin.arms()) {
      std::cout << fmt::format("  {:<8} pulls={:<6} mean_reward={:.4f} |theta|={:.4f}\n", id.value, m.pulls,
                               egucb::empirical_mean(m), egucb::norm(egucb::ridge_estimate(m)));
    }
  }
  if (doc.contains("eg")) {
    const auto eg = egucb::load_eg_snapshot(doc["eg"].dump());
    std::cout << fmt::format("eg: tau={} beta={} kappa={}\n", eg.tau(), eg.beta(), eg.kappa());
    for (std::size_t k = 0; k < eg.size(); ++k)
      std::cout << fmt::format("  epsilon={:<6} p={:.6f}\n", eg.candidates()[k], eg.probabilities()[k]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual bandit simulation harness: LinUCB, Gradient-LinUCB and baselines"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path = "ctr.csv";
  std::string log_path;
  std::string snapshot_path;
  std::uint64_t events = 10000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (key = value lines)");
    sub->add_option("--seed", seed, "Master seed; overrides the config");
    sub->add_option("--out", out_path, "Output path")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Simulate one policy");
  add_common(run);
  run->add_option("--snapshot", snapshot_path, "Write final learner state (JSON) to this path");

  auto* compare = app.add_subcommand("compare", "Simulate every policy in `policies` on paired seeds");
  add_common(compare);

  auto* replay = app.add_subcommand("replay", "Evaluate a policy on a logged-event file");
  add_common(replay);
  replay->add_option("--log", log_path, "Logged-event file (JSON Lines)")->required();

  auto* genlog = app.add_subcommand("genlog", "Write a uniform-random event log from the synthetic environment");
  add_common(genlog);
  genlog->add_option("--events", events, "Number of logged events")->capture_default_str();

  auto* insp = app.add_subcommand("inspect", "Summarize a snapshot written by `run --snapshot`");
  insp->add_option("--snapshot", snapshot_path, "Snapshot path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (insp->parsed()) {
      inspect(snapshot_path);
      return kExitOk;
    }
    const auto config = load(config_path, seed);
    if (run->parsed()) {
      std::optional<std::filesystem::path> snap;
      if (!snapshot_path.empty()) snap = snapshot_path;
      print_summary(egucb::cmd_run(config, out_path, snap));
    } else if (compare->parsed()) {
      print_summary(egucb::cmd_compare(config, out_path));
    } else if (replay->parsed()) {
      print_summary(egucb::cmd_replay(config, log_path, out_path));
    } else if (genlog->parsed()) {
      egucb::cmd_genlog(config, events, out_path);
      std::cout << "wrote " << events << " events to " << out_path << '\n';
    }
  } catch (const egucb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == egucb::ErrorCode::kFileError ? kExitIo : kExitValidation;
  }
  return kExitOk;
}
