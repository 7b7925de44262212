#pragma once

#include <filesystem>
#include <iosfwd>

#include "egucb/simulation.hpp"

namespace egucb {

// Logged-event files are JSON Lines. The first line is a header
//   {"format":"egucb-events","version":1,"d":<int>,"logging_policy":"uniform"}
// and each following line is one event
//   {"t":<int>,"arms":[{"id":"a3","features":[...]}, ...],"chosen":"a3","click":0|1}
// Blank lines are ignored.
inline constexpr const char* kEventLogFormat = "egucb-events";
inline constexpr int kEventLogVersion = 1;

void write_event_log(std::ostream& out, const ReplayDataset& dataset);
void write_event_log_file(const std::filesystem::path& path, const ReplayDataset& dataset);

// Throws kEmptyDataset for an empty stream and kParseError (with the 1-based
// line number) for malformed lines.
ReplayDataset read_event_log(std::istream& in);
ReplayDataset read_event_log_file(const std::filesystem::path& path);

}  // namespace egucb
