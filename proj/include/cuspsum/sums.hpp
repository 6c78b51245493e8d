#pragma once

// Exact partial sums S(n) = a(1) + ... + a(n) and the mean-square statistics
// built on them. Numerators stay big integers; floating point only enters in
// the final ratio or through per-term logarithms.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cuspsum/forms.hpp"

namespace cuspsum::sums {

// log(|S(n)|^2 / n^(k-1)) for S(n) = 0.
inline constexpr double kZeroLogSentinel = -std::numeric_limits<double>::infinity();

// Natural log of |v| from the bit length and leading mantissa; -inf for 0.
double log_abs(const BigInt& v);

class PartialSumTable {
 public:
  // sums[0] must be 0; sums[n] = S(n).
  PartialSumTable(int weight, std::vector<BigInt> sums);

  int weight() const { return weight_; }
  std::size_t max_index() const { return sums_.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return sums_[n]; }
  std::span<const BigInt> sums() const { return sums_; }
  // log(|S(n)|^2 / n^(k-1)), kZeroLogSentinel when S(n) = 0.
  double log_normalized_square(std::size_t n) const { return log_s2_norm_[n]; }
  std::span<const double> log_normalized_squares() const { return log_s2_norm_; }

 private:
  int weight_;
  std::vector<BigInt> sums_;
  std::vector<double> log_s2_norm_;
};

PartialSumTable partial_sums(const forms::EigenformTable& table);

// (1/X) sum_{n <= X} |S(n)|^2 / X^(k - 1/2). Throws DomainError for X < 1 and
// RangeError for X beyond the table.
double long_interval_mean(const PartialSumTable& p, double X);

// X^(2/3) (log X)^(1/6). Throws DomainError for X <= 1.
double theorem_window(double X);

struct WindowStat {
  double X = 0;
  double H = 0;
  std::size_t count = 0;
  double raw_mean_sq = 0;  // (1/H) sum_{|n - X| < H} |S(n)|^2
  double normalized = 0;   // raw_mean_sq / X^(k - 1/2)
};

// Integers n with |n - X| < H. Throws RangeError unless the window sits in
// [1, N], i.e. X - H >= 0 and X + H <= N + 1.
WindowStat window_mean(const PartialSumTable& p, double X, double H);

inline constexpr double kDefaultTruncation = 60.0;

struct SmoothedSum {
  double value = 0;
  std::size_t first_index = 0;  // range of n that survived truncation
  std::size_t last_index = 0;
  bool table_limited = false;   // the untruncated range ran past N
};

// (1/2pi) sum |S(n)|^2 / n^(k-1) exp(-y^2 log^2(X/n) / 4pi), dropping terms
// with y^2 log^2(X/n) > 4 pi t_cut. Terms are formed in the log domain.
SmoothedSum smoothed_second_moment(const PartialSumTable& p, double X, double y,
                                   double t_cut = kDefaultTruncation);

struct InequalityReport {
  double X = 0;
  double y = 0;
  std::size_t window_count = 0;
  double lhs = 0;  // sum_{|n - X| < X/y} |S(n)|^2 / n^(k-1)
  double rhs = 0;  // 2 pi e^(1/pi) * smoothed_second_moment(X, y)
  bool pass = false;
};

// Requires y >= 2 and the window [X - X/y, X + X/y] inside [0, N + 1].
InequalityReport window_vs_smoothed(const PartialSumTable& p, double X, double y);

struct ExponentFit {
  double delta = 0;
  double slope = 0;             // d log(raw_mean_sq) / d log X with H = X^delta
  double intercept = 0;
  double residual = 0;          // RMS residual of the raw fit
  double normalized_slope = 0;  // same fit on raw_mean_sq / X^(k - 1/2)
  double corollary_exponent = 0;  // k + 3/2 - 3 delta
  std::vector<WindowStat> points;  // sorted by X
};

// Least-squares slope over the grid. Throws DomainError for fewer than three
// distinct points.
ExponentFit exponent_fit(const PartialSumTable& p, std::span<const double> X_grid, double delta);

}  // namespace cuspsum::sums
