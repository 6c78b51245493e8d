#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuspsum/errors.hpp"
#include "cuspsum/sums.hpp"

using namespace cuspsum;
using namespace cuspsum::sums;
using doctest::Approx;

namespace {

const PartialSumTable& delta_sums() {
  static const PartialSumTable p = partial_sums(forms::generate_delta(20000));
  return p;
}

constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

TEST_CASE("partial sums of tau") {
  const auto& p = delta_sums();
  CHECK(p[0] == 0);
  CHECK(p[1] == 1);
  CHECK(p[2] == -23);
  CHECK(p[3] == 229);
  CHECK(p[4] == -1243);
  CHECK(p.log_normalized_square(2) == Approx(-1.353630554301099021976).epsilon(1e-14));
}

TEST_CASE("telescoping") {
  const auto t = forms::generate_delta(3000);
  const auto p = partial_sums(t);
  for (std::size_t n = 1; n <= 3000; ++n) CHECK(p[n] - p[n - 1] == t[n]);
}

TEST_CASE("zero partial sum uses the sentinel") {
  const PartialSumTable p(12, {0, 1, 0, 2});
  CHECK(p.log_normalized_square(2) == kZeroLogSentinel);
  CHECK(std::isfinite(p.log_normalized_square(3)));
  CHECK_THROWS_AS(PartialSumTable(12, {1, 1}), DomainError);
}

TEST_CASE("log_abs of big integers") {
  CHECK(log_abs(BigInt(0)) == -std::numeric_limits<double>::infinity());
  CHECK(log_abs(BigInt(-1)) == 0.0);
  BigInt big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
  CHECK(log_abs(big) == Approx(400 * std::log(10.0)).epsilon(1e-15));
}

TEST_CASE("long interval mean") {
  const auto& p = delta_sums();
  CHECK(long_interval_mean(p, 3) == Approx(0.0575469734349507591093).epsilon(1e-14));
  CHECK(long_interval_mean(p, 1) == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(long_interval_mean(p, 0.5), DomainError);
  CHECK_THROWS_AS(long_interval_mean(p, 20001), RangeError);
}

TEST_CASE("theorem window") {
  CHECK(theorem_window(std::exp(1.0)) == Approx(std::exp(2.0 / 3.0)).epsilon(1e-15));
  CHECK(theorem_window(1e6) == Approx(15490.34735647617604018).epsilon(1e-14));
  CHECK(theorem_window(1e3) == Approx(138.0033060343321880993).epsilon(1e-14));
  CHECK_THROWS_AS(theorem_window(1), DomainError);
}

TEST_CASE("window mean") {
  const auto& p = delta_sums();
  const auto w = window_mean(p, 2, 1.5);
  CHECK(w.count == 3);
  CHECK(w.raw_mean_sq == Approx(52971 / 1.5).epsilon(1e-15));
  CHECK(w.normalized == Approx(52971 / 1.5 / std::pow(2.0, 11.5)).epsilon(1e-14));

  const auto single = window_mean(p, 3, 0.5);
  CHECK(single.count == 1);
  CHECK(single.raw_mean_sq == Approx(229.0 * 229.0 / 0.5).epsilon(1e-15));

  // Strict inequality: n = 4 and n = 2 sit exactly on the boundary.
  CHECK(window_mean(p, 3, 1).count == 1);

  CHECK_THROWS_AS(window_mean(p, 20000, 10), RangeError);
  CHECK_THROWS_AS(window_mean(p, 5, 6), RangeError);
}

TEST_CASE("normalized window statistic is finite and positive") {
  const auto& p = delta_sums();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const double X = 10 + static_cast<double>(rng() % 19000);
    const double H = 0.6 + std::uniform_real_distribution<double>(0, 1)(rng) * std::min(X, 20000 - X);
    const auto w = window_mean(p, X, H);
    CAPTURE(X);
    CAPTURE(H);
    CHECK(std::isfinite(w.normalized));
    CHECK(w.normalized > 0);
  }
}

TEST_CASE("smoothed second moment") {
  const auto& p = delta_sums();
  const auto sharp = smoothed_second_moment(p, 2, 1e4);
  CHECK(sharp.first_index == 2);
  CHECK(sharp.last_index == 2);
  CHECK(sharp.value == Approx(529.0 / 2048.0 / kTwoPi).epsilon(1e-14));

  const auto wide = smoothed_second_moment(p, 1, 1);
  CHECK(wide.value >= 1 / kTwoPi);

  // The truncated range around X = 1e4 reaches n = 63300.
  const auto long_table = partial_sums(forms::generate_delta(70000));
  const double X = 1e4;
  const double y = std::cbrt(X) * std::pow(std::log(X), -1.0 / 6.0);
  const auto anchor = smoothed_second_moment(long_table, X, y);
  CHECK(smoothed_second_moment(p, X, y).table_limited);
  CHECK_FALSE(anchor.table_limited);
  CHECK(anchor.value == Approx(2792.9505778388011).epsilon(1e-12));
}

TEST_CASE("window versus smoothed inequality") {
  const auto& p = delta_sums();
  const auto r = window_vs_smoothed(p, 1e4, 20);
  CHECK(std::isfinite(r.lhs));
  CHECK(std::isfinite(r.rhs));
  CHECK(r.lhs <= r.rhs);
  CHECK(r.pass);

  const auto empty = window_vs_smoothed(p, 10.5, 100);
  CHECK(empty.window_count == 0);
  CHECK(empty.lhs == 0);
  CHECK(empty.pass);

  CHECK_THROWS_AS(window_vs_smoothed(p, 100, 1.5), DomainError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const double X = 4 + std::uniform_real_distribution<double>(0, 1)(rng) * 15000;
    const double y = 2 + std::uniform_real_distribution<double>(0, 1)(rng) * 300;
    CAPTURE(X);
    CAPTURE(y);
    CHECK(window_vs_smoothed(p, X, y).pass);
  }
}

TEST_CASE("exponent fit on a synthetic table") {
  // S(n) = round(n^(k/2 - 1/4)) for k = 12, so |S(n)|^2 ~ n^(k - 1/2).
  const std::size_t N = 50000;
  std::vector<BigInt> s(N + 1);
  s[0] = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    mpf_class v(std::pow(static_cast<double>(n), 5.75), 128);
    s[n] = BigInt(v + 0.5);
  }
  const PartialSumTable p(12, std::move(s));
  const std::vector<double> grid = {1000, 3000, 10000, 30000};
  const auto fit = exponent_fit(p, grid, 0.6);
  // Reference: the same regression on the window sums of n^(k - 1/2), which
  // carry the curvature bias of the finite windows.
  double mx = 0, my = 0;
  std::vector<double> xs, ys;
  for (double X : grid) {
    const double H = std::pow(X, 0.6);
    double sum = 0;
    for (auto n = static_cast<std::size_t>(std::floor(X - H)) + 1; n < X + H; ++n) {
      sum += std::pow(static_cast<double>(n), 11.5);
    }
    xs.push_back(std::log(X));
    ys.push_back(std::log(sum / H));
    mx += xs.back() / 4;
    my += ys.back() / 4;
  }
  double sxx = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  CHECK(fit.slope == Approx(sxy / sxx).epsilon(1e-6));
  CHECK(fit.normalized_slope == Approx(fit.slope - 11.5).epsilon(1e-9));
  CHECK(std::abs(fit.slope - 11.5) < 0.05);
  CHECK(fit.corollary_exponent == Approx(12 + 1.5 - 1.8));
}

TEST_CASE("exponent fit ignores grid order") {
  const auto& p = delta_sums();
  const std::vector<double> grid = {1000, 2000, 5000, 10000};
  const std::vector<double> reversed(grid.rbegin(), grid.rend());
  const auto a = exponent_fit(p, grid, 2.0 / 3.0);
  const auto b = exponent_fit(p, reversed, 2.0 / 3.0);
  CHECK(a.slope == b.slope);
  CHECK(a.intercept == b.intercept);
  CHECK(a.points.size() == 4);
  const std::vector<double> two = {1000, 2000};
  CHECK_THROWS_AS(exponent_fit(p, two, 2.0 / 3.0), DomainError);
  const std::vector<double> dup = {1000, 1000, 2000};
  CHECK_THROWS_AS(exponent_fit(p, dup, 2.0 / 3.0), DomainError);
}
