#include "egucb/event_log.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "egucb/error.hpp"

namespace egucb {

using nlohmann::json;

void write_event_log(std::ostream& out, const ReplayDataset& dataset) {
  json header = {{"format", kEventLogFormat},
                 {"version", kEventLogVersion},
                 {"d", dataset.d},
                 {"logging_policy", dataset.logging_policy}};
  out << header.dump() << '\n';
  for (const auto& e : dataset.events) {
    json arms = json::array();
    for (const auto& c : e.offered) arms.push_back({{"id", c.id.value}, {"features", c.context.features.raw()}});
    json line = {{"t", e.t}, {"arms", std::move(arms)}, {"chosen", e.chosen.value}, {"click", e.reward}};
    out << line.dump() << '\n';
  }
}

void write_event_log_file(const std::filesystem::path& path, const ReplayDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileError, "cannot open '" + path.string() + "' for writing");
  write_event_log(out, dataset);
  if (!out) throw Error(ErrorCode::kFileError, "failed writing '" + path.string() + "'");
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

RoundRecord parse_event(const json& j, std::size_t d, std::size_t line_no) {
  if (!j.is_object()) parse_fail(line_no, "event is not an object");
  for (const char* key : {"t", "arms", "chosen", "click"})
    if (!j.contains(key)) parse_fail(line_no, std::string("missing field '") + key + "'");

  RoundRecord r;
  if (!j["t"].is_number_unsigned()) parse_fail(line_no, "'t' must be a non-negative integer");
  r.t = j["t"].get<std::uint64_t>();
  if (!j["chosen"].is_string()) parse_fail(line_no, "'chosen' must be a string");
  r.chosen = ArmId{j["chosen"].get<std::string>()};
  if (!j["click"].is_number_integer()) parse_fail(line_no, "'click' must be 0 or 1");
  const auto click = j["click"].get<long long>();
  if (click != 0 && click != 1) parse_fail(line_no, "'click' must be 0 or 1");
  r.reward = static_cast<int>(click);

  const json& arms = j["arms"];
  if (!arms.is_array() || arms.empty()) parse_fail(line_no, "'arms' must be a non-empty array");
  bool chosen_seen = false;
  for (const auto& a : arms) {
    if (!a.is_object() || !a.contains("id") || !a.contains("features") || !a["id"].is_string() ||
        !a["features"].is_array()) {
      parse_fail(line_no, "arm entries need a string 'id' and a 'features' array");
    }
    std::vector<double> features;
    features.reserve(a["features"].size());
    for (const auto& f : a["features"]) {
      if (!f.is_number()) parse_fail(line_no, "features must be numbers");
      features.push_back(f.get<double>());
    }
    if (features.size() != d) {
      parse_fail(line_no, "feature vector has length " + std::to_string(features.size()) + ", header declares d=" +
                              std::to_string(d));
    }
    Candidate c{ArmId{a["id"].get<std::string>()}, Context{Vec(std::move(features))}};
    chosen_seen = chosen_seen || c.id == r.chosen;
    r.offered.push_back(std::move(c));
  }
  if (!chosen_seen) parse_fail(line_no, "chosen arm '" + r.chosen.value + "' is not among the offered arms");
  return r;
}

}  // namespace

ReplayDataset read_event_log(std::istream& in) {
  ReplayDataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!have_header) {
      if (!j.is_object() || j.value("format", "") != kEventLogFormat) parse_fail(line_no, "missing event-log header");
      if (j.value("version", 0) != kEventLogVersion) parse_fail(line_no, "unsupported event-log version");
      if (!j.contains("d") || !j["d"].is_number_unsigned() || j["d"].get<std::size_t>() == 0) {
        parse_fail(line_no, "header needs a positive integer 'd'");
      }
      ds.d = j["d"].get<std::size_t>();
      ds.logging_policy = j.value("logging_policy", "unknown");
      have_header = true;
      continue;
    }
    ds.events.push_back(parse_event(j, ds.d, line_no));
  }
  if (!have_header) throw Error(ErrorCode::kEmptyDataset, "event log is empty");
  return ds;
}

ReplayDataset read_event_log_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileError, "cannot open '" + path.string() + "'");
  return read_event_log(in);
}

}  // namespace egucb
