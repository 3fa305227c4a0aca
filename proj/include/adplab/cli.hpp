#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adp::cli {

enum class Format { json, csv };

struct RunConfig {
  std::vector<double> p_list{2.1, 2.5, 3.0, 5.0, 8.0};
  std::size_t grid = 10000;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned enum_cap = 24;
  double slack = 1e-9;
  std::string output_path;
  Format format = Format::json;
  unsigned threads = 1;
};

/// Bad flags, bad config files and invariant violations. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError unless grid >= 2, samples >= 100, enum_cap in [1, 30],
/// slack > 0, threads >= 1 and every p >= 2.
void validate(const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Reports go to `out`
/// or to --output; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace adp::cli
