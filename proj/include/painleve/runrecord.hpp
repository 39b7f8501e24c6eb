#pragma once

// Run records: every CLI command writes one JSON record describing its
// parameters and outputs, including on failure.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace painleve {

inline constexpr const char* kVersion = "0.1.0";

struct RunRecord {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  double seconds = 0.0;
  std::string version = kVersion;
  std::string error;  // empty on success
};

/// Output root: --out-dir flag when given, else $PAINLEVE_OUT_DIR, else ".".
std::filesystem::path resolve_out_dir(const std::string& flag_value);

/// Writes <out_dir>/run_record_<command>.json (directory created if needed).
void write_run_record(const RunRecord& rec, const std::filesystem::path& out_dir);

}  // namespace painleve
