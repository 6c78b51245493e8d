#include "cuspsum/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cuspsum/errors.hpp"

namespace cuspsum::sums {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 0;  // empty when last < first
  std::size_t count() const { return last >= first ? last - first + 1 : 0; }
};

// Integers n with |n - X| < H, checked against [1, N].
IndexRange open_window(double X, double H, std::size_t N) {
  if (!std::isfinite(X) || !std::isfinite(H) || H <= 0) throw DomainError("window needs finite X and H > 0");
  if (X - H < 0) throw RangeError("window reaches below n = 1");
  IndexRange r;
  r.first = static_cast<std::size_t>(std::floor(X - H)) + 1;
  const double upper = std::ceil(X + H) - 1;
  if (upper > static_cast<double>(N)) {
    throw RangeError("window reaches n = " + std::to_string(static_cast<long long>(upper)) +
                     " beyond the table size " + std::to_string(N));
  }
  r.last = static_cast<std::size_t>(upper);
  return r;
}

BigInt sum_of_squares(const PartialSumTable& p, std::size_t first, std::size_t last) {
  BigInt total;
  for (std::size_t n = first; n <= last; ++n) mpz_addmul(total.get_mpz_t(), p[n].get_mpz_t(), p[n].get_mpz_t());
  return total;
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

// num / den to within a couple of ulps, through the log domain only when the
// quotient leaves the double range.
double big_ratio(const BigInt& num, double den, double log_den) {
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, num.get_mpz_t());
  const double direct = std::ldexp(mantissa / den, static_cast<int>(exp));
  if (std::isfinite(den) && std::isfinite(direct) && direct != 0) return direct;
  return std::exp(std::log(std::abs(mantissa)) + static_cast<double>(exp) * kLn2 - log_den);
}

}  // namespace

double log_abs(const BigInt& v) {
  if (sgn(v) == 0) return kZeroLogSentinel;
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::abs(mantissa)) + static_cast<double>(exp) * kLn2;
}

PartialSumTable::PartialSumTable(int weight, std::vector<BigInt> sums)
    : weight_(weight), sums_(std::move(sums)), log_s2_norm_(sums_.size(), kZeroLogSentinel) {
  if (sums_.empty() || sums_[0] != 0) throw DomainError("partial sum table must have S(0) = 0");
  const double km1 = weight_ - 1;
  for (std::size_t n = 1; n < sums_.size(); ++n) {
    if (sgn(sums_[n]) == 0) continue;
    log_s2_norm_[n] = 2.0 * log_abs(sums_[n]) - km1 * std::log(static_cast<double>(n));
  }
}

PartialSumTable partial_sums(const forms::EigenformTable& table) {
  std::vector<BigInt> s(table.max_index() + 1);
  for (std::size_t n = 1; n <= table.max_index(); ++n) s[n] = s[n - 1] + table[n];
  return PartialSumTable(table.weight(), std::move(s));
}

double long_interval_mean(const PartialSumTable& p, double X) {
  if (!(X >= 1)) throw DomainError("long_interval_mean needs X >= 1");
  const double top = std::floor(X);
  if (top > static_cast<double>(p.max_index())) throw RangeError("long_interval_mean: X beyond the table");
  const BigInt numerator = sum_of_squares(p, 1, static_cast<std::size_t>(top));
  if (sgn(numerator) == 0) return 0.0;
  const double e = p.weight() + 0.5;
  return big_ratio(numerator, std::pow(X, e), e * std::log(X));
}

double theorem_window(double X) {
  if (!(X > 1) || !std::isfinite(X)) throw DomainError("theorem_window needs X > 1");
  return std::pow(X, 2.0 / 3.0) * std::pow(std::log(X), 1.0 / 6.0);
}

WindowStat window_mean(const PartialSumTable& p, double X, double H) {
  const IndexRange range = open_window(X, H, p.max_index());
  WindowStat stat;
  stat.X = X;
  stat.H = H;
  stat.count = range.count();
  if (stat.count == 0) return stat;
  const BigInt numerator = sum_of_squares(p, range.first, range.last);
  if (sgn(numerator) == 0) return stat;
  const double e = p.weight() - 0.5;
  stat.raw_mean_sq = big_ratio(numerator, H, std::log(H));
  stat.normalized = big_ratio(numerator, H * std::pow(X, e), std::log(H) + e * std::log(X));
  return stat;
}

SmoothedSum smoothed_second_moment(const PartialSumTable& p, double X, double y, double t_cut) {
  if (!(X >= 1) || !std::isfinite(X)) throw DomainError("smoothed_second_moment needs X >= 1");
  if (!(y > 0) || !std::isfinite(y)) throw DomainError("smoothed_second_moment needs y > 0");
  if (!(t_cut > 0)) throw DomainError("truncation level must be positive");
  const double cutoff = 4 * kPi * t_cut;
  const double reach = std::sqrt(cutoff) / y;  // |log(X/n)| <= reach survives
  const double lo = std::max(1.0, std::ceil(X * std::exp(-reach)));
  const double hi = std::floor(X * std::exp(reach));
  const auto N = static_cast<double>(p.max_index());

  SmoothedSum out;
  out.table_limited = hi > N;
  out.first_index = static_cast<std::size_t>(lo);
  out.last_index = static_cast<std::size_t>(std::min(hi, N));
  const double log_X = std::log(X);
  const double y2 = y * y;
  CompensatedSum total;
  for (std::size_t n = out.first_index; n <= out.last_index; ++n) {
    const double l = log_X - std::log(static_cast<double>(n));
    const double exponent = y2 * l * l;
    if (exponent > cutoff) continue;
    const double log_term = p.log_normalized_square(n);
    if (log_term == kZeroLogSentinel) continue;
    total.add(std::exp(log_term - exponent / (4 * kPi)));
  }
  out.value = total.value() / (2 * kPi);
  return out;
}

InequalityReport window_vs_smoothed(const PartialSumTable& p, double X, double y) {
  if (!(y >= 2)) throw DomainError("window_vs_smoothed needs y >= 2");
  const IndexRange range = open_window(X, X / y, p.max_index());
  InequalityReport report;
  report.X = X;
  report.y = y;
  report.window_count = range.count();
  CompensatedSum lhs;
  for (std::size_t n = range.first; n <= range.last; ++n) {
    const double log_term = p.log_normalized_square(n);
    if (log_term != kZeroLogSentinel) lhs.add(std::exp(log_term));
  }
  report.lhs = lhs.value();
  report.rhs = 2 * kPi * std::exp(1 / kPi) * smoothed_second_moment(p, X, y).value;
  report.pass = report.lhs <= report.rhs;
  return report;
}

ExponentFit exponent_fit(const PartialSumTable& p, std::span<const double> X_grid, double delta) {
  std::vector<double> grid(X_grid.begin(), X_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 3) throw DomainError("exponent_fit needs at least three distinct grid points");
  if (!(delta > 0)) throw DomainError("exponent_fit needs delta > 0");

  ExponentFit fit;
  fit.delta = delta;
  fit.corollary_exponent = p.weight() + 1.5 - 3 * delta;
  std::vector<double> xs;
  std::vector<double> ys;
  for (double X : grid) {
    const WindowStat stat = window_mean(p, X, std::pow(X, delta));
    if (!(stat.raw_mean_sq > 0)) throw DomainError("exponent_fit: window with zero mean square");
    fit.points.push_back(stat);
    xs.push_back(std::log(X));
    ys.push_back(std::log(stat.raw_mean_sq));
  }
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0;
  double mean_y = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  // log(normalized) = log(raw) - (k - 1/2) log X exactly, so the slopes differ by k - 1/2.
  fit.normalized_slope = fit.slope - (p.weight() - 0.5);
  return fit;
}

}  // namespace cuspsum::sums
