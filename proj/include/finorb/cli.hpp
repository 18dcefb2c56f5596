#pragma once

// Single `finorb` binary with subcommands. parse_args validates every spec
// up front (exit 64 on failure); run dispatches and maps module errors to
// exit codes: 0 success, 2 inconclusive, 64 usage, 65 data, 1 internal.

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace finorb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string group;
  std::string target;
  std::string gens = "nielsen";
  std::string hom;
  std::string quotient;
  std::string dot;
  std::string out;
  std::string cert;
  std::string matrices;
  std::string matrix;
  std::string format = "json";  // json | text | dot
  std::size_t cap = 0;          // 0: FINORB_DEFAULT_CAP or the built-in default
  std::size_t orbit_cap = 0;
  std::size_t closure_cap = 0;
  int n = 4;
  int dim = -1;
  int threads = 0;  // 0: leave the OpenMP default
};

/// args excludes the program name. Throws UsageError; returns normally for --help
/// with subcommand "help" and the help text in `out`.
RunConfig parse_args(const std::vector<std::string>& args, std::string* help = nullptr);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error mapping; what the binary's main calls.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finorb::cli
