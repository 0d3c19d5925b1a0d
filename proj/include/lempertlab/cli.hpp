#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace lempertlab {

// exit codes
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotMember = 2;
constexpr int kExitTooManyFailures = 3;
constexpr int kExitNormalization = 4;
constexpr int kExitCheckFailed = 5;

struct RunConfig {
  unsigned seed = 7;
  int n = 4;
  int samples = 100;
  int disc_degree = 6;
  int boundary_grid = 512;
  double margin = 1e-6;
  double tolerance = 1e-2;
  std::string output;
  std::string format = "json";
  int jobs = 1;

  void validate() const;
};

// key = value lines, '#' starts a comment
std::map<std::string, std::string> read_config_file(const std::string& path);
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lempertlab
