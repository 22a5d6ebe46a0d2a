#pragma once

// Line-delimited run log. The first line is a JSON header (config echo, seed,
// adult body length, root genomes); every following line is one JSON epoch
// record. Doubles are written in shortest round-trip form and genomes as
// 24 comma-separated values, so a log reloads bit-exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wobble/learner.hpp"

namespace wobble {

inline constexpr const char* kRunLogFormat = "wobble-runlog/1";

struct RunHeader {
  std::string experiment;
  std::string condition;
  std::uint64_t seed = 0;
  nlohmann::json config;  // run-level config echo (setup, learner, schedule)
  std::string config_hash;
  double adult_body_length = 0.0;
  std::vector<Genome> roots;
  int planned_epochs = 0;

  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

struct RunLog {
  RunHeader header;
  std::vector<EpochRecord> epochs;

  bool complete() const { return static_cast<int>(epochs.size()) == header.planned_epochs; }
  friend bool operator==(const RunLog&, const RunLog&) = default;
};

nlohmann::json header_to_json(const RunHeader& h);
RunHeader header_from_json(const nlohmann::json& j);
nlohmann::json epoch_to_json(const EpochRecord& r);
EpochRecord epoch_from_json(const nlohmann::json& j);

/// Reads a log. Epochs must be contiguous from 0; a gap raises LogError naming
/// the offending epoch index. With `allow_partial`, an unterminated trailing
/// line (interrupted write) is ignored instead of rejected.
RunLog read_runlog(const std::filesystem::path& path, bool allow_partial = false);

/// Byte length of the valid prefix (header + whole epoch lines) of a log file.
std::uintmax_t valid_prefix_bytes(const std::filesystem::path& path);

void write_runlog(const std::filesystem::path& path, const RunLog& log);

/// Appends epoch records to a log, one flushed line per record.
class RunLogWriter {
 public:
  /// Starts a fresh log containing only the header.
  RunLogWriter(const std::filesystem::path& path, const RunHeader& header);
  /// Continues an existing log, truncated to `keep_bytes` first.
  RunLogWriter(const std::filesystem::path& path, std::uintmax_t keep_bytes);

  void append(const EpochRecord& record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Structural consistency: kept ids are the fitness top-k with index
/// tie-break, parents in range, kept members reappear unchanged next epoch.
/// Throws LogError.
void check_runlog(const RunLog& log, int kept);

}  // namespace wobble
