#pragma once

// The cuspsum command line: gen, windows, means and verify.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cuspsum/errors.hpp"
#include "cuspsum/forms.hpp"
#include "cuspsum/sums.hpp"

namespace cuspsum::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2, kExitIo = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class WindowMode { theorem, fixed_delta, fixed_y };

WindowMode parse_mode(const std::string& text);
std::string to_string(WindowMode mode);

struct ExperimentConfig {
  int weight = 12;
  std::size_t N = 10000;
  std::vector<double> X_grid;
  WindowMode mode = WindowMode::theorem;
  double delta = 2.0 / 3.0;
  double y = 10;
  std::optional<std::filesystem::path> cache;
  std::optional<std::filesystem::path> out;
  std::optional<double> tolerance;
};

// "a,b,c" or "logspace:a,b,count" with a, b the endpoint values. Empty text
// gives an empty grid. Throws UsageError on malformed input.
std::vector<double> parse_grid(const std::string& text);

// Accepts integer or floating notation ("1e6") for nonnegative integers.
std::size_t parse_count(const std::string& text);

// Sorts and deduplicates the grid, checks delta in (1/2, 2/3] for
// fixed_delta and y > 0 for fixed_y. Throws UsageError.
void normalize(ExperimentConfig& c);

// FNV-1a of a canonical rendering of the fields that affect output.
std::uint64_t config_hash(const ExperimentConfig& c);

// $CUSPSUM_CACHE_DIR (or the working directory) / cuspsum_k{k}_N{N}.csp
std::filesystem::path default_cache_path(int weight, std::size_t N);

// Reads the cache when it is valid for (weight, N), otherwise generates the
// table and writes it. Sets *hit accordingly.
forms::EigenformTable load_or_generate(int weight, std::size_t N, const std::filesystem::path& path,
                                       bool* hit = nullptr);

// H for one grid point under the configured mode.
double window_half_width(const ExperimentConfig& c, double X);

// Full CSV text: comment line, header, one row per grid point sorted by X.
std::string windows_csv(const ExperimentConfig& c, const sums::PartialSumTable& p);

// X,count,long_interval_mean rows for the same grid.
std::string means_csv(const ExperimentConfig& c, const sums::PartialSumTable& p);

// Parses argv and runs a subcommand; returns the exit code. Messages go to
// out and err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cuspsum::cli
