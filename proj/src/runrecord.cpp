#include "painleve/runrecord.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace painleve {

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PAINLEVE_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_run_record(const RunRecord& rec, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  nlohmann::ordered_json j;
  j["command"] = rec.command;
  j["parameters"] = rec.parameters;
  j["outputs"] = rec.outputs;
  j["timings"] = {{"seconds", rec.seconds}};
  j["versions"] = {{"artifact", rec.version}};
  if (!rec.error.empty()) j["error"] = rec.error;
  std::ofstream os(out_dir / ("run_record_" + rec.command + ".json"));
  os << j.dump(2) << '\n';
}

}  // namespace painleve
