#pragma once

#include <string>

#include "egucb/eg.hpp"
#include "egucb/policies.hpp"

namespace egucb {

// Versioned JSON snapshots of learner state, used by `run --snapshot` and for
// resuming. LinUCB snapshots carry d, alpha and per-arm {a, a_inv, b, pulls,
// click_sum}; EG snapshots carry candidates, w, p, tau, beta, kappa.
inline constexpr int kSnapshotVersion = 1;

std::string linucb_snapshot(const LinUcbState& state);
LinUcbState load_linucb_snapshot(const std::string& text);

std::string eg_snapshot(const EgState& state);
EgState load_eg_snapshot(const std::string& text);

}  // namespace egucb
