#include "egucb/snapshot.hpp"

#include <json.hpp>

#include "egucb/error.hpp"

namespace egucb {

using nlohmann::json;

namespace {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Mat mat_from_json(const json& j, std::size_t d) {
  if (!j.is_array() || j.size() != d) throw Error(ErrorCode::kInvalidData, "matrix has wrong row count");
  Mat m(d);
  for (std::size_t r = 0; r < d; ++r) {
    const auto row = j[r].get<std::vector<double>>();
    if (row.size() != d) throw Error(ErrorCode::kInvalidData, "matrix has wrong column count");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = row[c];
  }
  return m;
}

json parse_snapshot(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (j.value("kind", "") != kind) throw Error(ErrorCode::kInvalidData, std::string("expected a ") + kind + " snapshot");
  if (j.value("version", 0) != kSnapshotVersion) throw Error(ErrorCode::kInvalidData, "unsupported snapshot version");
  return j;
}

}  // namespace

std::string linucb_snapshot(const LinUcbState& state) {
  json arms = json::object();
  for (const auto& [id, m] : state.arms()) {
    arms[id.value] = {{"a", mat_to_json(m.a)},
                      {"a_inv", mat_to_json(m.a_inv)},
                      {"b", m.b.raw()},
                      {"pulls", m.pulls},
                      {"click_sum", m.click_sum}};
  }
  json j = {{"kind", "linucb"},
            {"version", kSnapshotVersion},
            {"d", state.dim()},
            {"alpha", state.alpha()},
            {"arms", std::move(arms)}};
  return j.dump(2);
}

LinUcbState load_linucb_snapshot(const std::string& text) {
  const json j = parse_snapshot(text, "linucb");
  try {
    const auto d = j.at("d").get<std::size_t>();
    LinUcbState state(d, j.at("alpha").get<double>());
    for (const auto& [id, a] : j.at("arms").items()) {
      ArmModel m;
      m.a = mat_from_json(a.at("a"), d);
      m.a_inv = mat_from_json(a.at("a_inv"), d);
      m.b = Vec(a.at("b").get<std::vector<double>>());
      m.pulls = a.at("pulls").get<std::uint64_t>();
      m.click_sum = a.at("click_sum").get<double>();
      state.restore_arm(ArmId{id}, std::move(m));
    }
    return state;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidData, std::string("malformed linucb snapshot: ") + e.what());
  }
}

std::string eg_snapshot(const EgState& state) {
  json j = {{"kind", "eg"},
            {"version", kSnapshotVersion},
            {"candidates", state.candidates()},
            {"w", state.weights()},
            {"p", state.probabilities()},
            {"tau", state.tau()},
            {"beta", state.beta()},
            {"kappa", state.kappa()}};
  return j.dump(2);
}

EgState load_eg_snapshot(const std::string& text) {
  const json j = parse_snapshot(text, "eg");
  try {
    return EgState::restore(j.at("candidates").get<std::vector<double>>(), j.at("w").get<std::vector<double>>(),
                            j.at("p").get<std::vector<double>>(), j.at("tau").get<double>(),
                            j.at("beta").get<double>(), j.at("kappa").get<double>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidData, std::string("malformed eg snapshot: ") + e.what());
  }
}

}  // namespace egucb
