// Acceptance gate. One line per criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cuspsum/decomposition.hpp"
#include "cuspsum/forms.hpp"
#include "cuspsum/mellin.hpp"
#include "cuspsum/sums.hpp"

using namespace cuspsum;

namespace {

// Tolerances and budgets.
constexpr std::size_t kOracleN = 10000;
constexpr double kOracleSeconds = 5;
constexpr std::size_t kHeckeBound = 10000;
constexpr double kHeckeSeconds = 10;
constexpr std::size_t kPerfN = 1000000;
constexpr double kPerfSeconds = 60;
constexpr int kSpotChecks = 100;
constexpr unsigned kSpotSeed = 20240611;
constexpr double kKernelTolerance = 1e-10;
constexpr double kKernelSeconds = 1;
constexpr double kTransformTolerance = 1e-6;
constexpr double kTransformSeconds = 5;
constexpr std::size_t kDecompositionN = 100000;
constexpr double kDecompositionTolerance = 1e-6;
constexpr double kDecompositionSeconds = 120;
constexpr double kMeanSpread = 0.10;
constexpr double kBandFactor = 4;
constexpr double kSlopeTolerance = 0.15;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double timed(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return seconds_since(t0);
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void coefficient_oracle() {
  bool equal = false, prefix = false;
  const double secs = timed([&] {
    const forms::EigenformTable a = forms::generate_delta(kOracleN);
    const forms::EigenformTable b = forms::delta_via_eisenstein(kOracleN);
    equal = a == b;
    const long expect[] = {1, -24, 252, -1472, 4830, -6048};
    prefix = true;
    for (int n = 1; n <= 6; ++n) prefix = prefix && a[n] == expect[n - 1];
  });
  report(equal && prefix && secs < kOracleSeconds, "coefficients",
         fmt("N=%zu exact=%d first-six=%d %.2fs (limit %.0fs)", kOracleN, equal, prefix, secs, kOracleSeconds));
}

void hecke_suite() {
  std::size_t total = 0, failed = 0;
  const double secs = timed([&] {
    for (int k : {12, 16, 22}) {
      const forms::HeckeReport r = forms::hecke_report(forms::eigenform(k, kHeckeBound), kHeckeBound);
      total += r.multiplicativity_checked + r.prime_power_checked + r.deligne_checked;
      failed += r.failures();
    }
  });
  report(failed == 0 && secs < kHeckeSeconds, "hecke",
         fmt("weights 12,16,22 bound=%zu relations=%zu failures=%zu %.2fs (limit %.0fs)", kHeckeBound, total, failed,
             secs, kHeckeSeconds));
}

void performance() {
  std::vector<forms::EigenformTable> out;
  const double secs = timed([&] { out.push_back(forms::generate_delta(kPerfN)); });
  const forms::EigenformTable& t = out.front();
  std::mt19937_64 rng(kSpotSeed);
  std::uniform_int_distribution<std::size_t> pick(1, kPerfN);
  std::vector<std::size_t> idx(kSpotChecks);
  for (auto& i : idx) i = pick(rng);
  const std::vector<BigInt> ref = forms::delta_via_eisenstein_at(idx);
  int agree = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) agree += t[idx[i]] == ref[i];
  report(secs < kPerfSeconds && agree == kSpotChecks, "performance",
         fmt("generate N=%zu %.2fs (limit %.0fs), spot agreement %d/%d", kPerfN, secs, kPerfSeconds, agree,
             kSpotChecks));
}

void kernel_identity() {
  double worst = 0;
  const double secs = timed([&] {
    for (double X : {2.0, 10.0, 100.0})
      for (double y : {1.0, 5.0, 20.0}) {
        const mellin::KernelParams p{X, y};
        const double exact = mellin::kernel_closed_form(p);
        const double got = mellin::kernel_line_integral(p).value;
        worst = std::max(worst, std::abs(got - exact) / exact);
      }
  });
  report(worst <= kKernelTolerance && secs < kKernelSeconds, "kernel identity",
         fmt("3x3 grid max rel gap %.2e (tol %.0e) %.3fs (limit %.0fs)", worst, kKernelTolerance, secs,
             kKernelSeconds));
}

void derivative_transforms() {
  double worst = 0;
  int passed = 0, total = 0;
  const double secs = timed([&] {
    for (auto [m, l] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 1}})
      for (double X : {2.0, 10.0, 100.0})
        for (double y : {1.0, 5.0, 20.0}) {
          const mellin::TransformReport r =
              mellin::derivative_transform_check(m, l, {X, y}, {}, kTransformTolerance);
          worst = std::max(worst, r.rel_gap);
          passed += r.pass;
          ++total;
        }
  });
  report(passed == total && secs < kTransformSeconds, "derivative transforms",
         fmt("(m,l) in {00,10,11,21} x 3x3 grid %d/%d, max rel gap %.2e (tol %.0e) %.2fs (limit %.0fs)", passed,
             total, worst, kTransformTolerance, secs, kTransformSeconds));
}

void decomposition(const forms::EigenformTable& t, const sums::PartialSumTable& p) {
  mellin::QuadratureOptions quad;
  quad.target = kDecompositionTolerance;
  for (mellin::Complex s : {mellin::Complex(4, 0), mellin::Complex(4, 3)}) {
    mellin::DecompositionReport at_n, at_2n;
    const double secs = timed([&] { at_n = mellin::decomposition_check(t, p, s, 0.5, kDecompositionN, quad); });
    at_2n = mellin::decomposition_check(t, p, s, 0.5, 2 * kDecompositionN, quad);
    const bool within = at_n.rel_gap <= kDecompositionTolerance && at_n.pass;
    const bool shrinks = at_2n.rel_gap < at_n.rel_gap;
    // Not gating: the same doubling where the gap sits well above rounding.
    const double small_n = mellin::decomposition_check(t, p, s, 0.5, kDecompositionN / 10, quad).rel_gap;
    const double small_2n = mellin::decomposition_check(t, p, s, 0.5, kDecompositionN / 5, quad).rel_gap;
    report(within && shrinks && secs < kDecompositionSeconds, fmt("decomposition s=%g%+gi", s.real(), s.imag()),
           fmt("N=%zu rel gap %.3e (tol %.0e, certified %.2e); N=%zu rel gap %.3e, shrinks=%d; %.1fs (limit %.0fs)"
               " [N=%zu: %.3e -> %.3e]",
               kDecompositionN, at_n.rel_gap, kDecompositionTolerance, at_n.certified_error, 2 * kDecompositionN,
               at_2n.rel_gap, shrinks, secs, kDecompositionSeconds, kDecompositionN / 10, small_n, small_2n));
  }
}

void long_interval_trend(const sums::PartialSumTable& p) {
  const double c4 = sums::long_interval_mean(p, 1e4);
  const double c5 = sums::long_interval_mean(p, 1e5);
  const double c6 = sums::long_interval_mean(p, 1e6);
  const double hi = std::max({c4, c5, c6}), lo = std::min({c4, c5, c6});
  const double spread = (hi - lo) / lo;
  const double d1 = std::abs(c5 - c4), d2 = std::abs(c6 - c5);
  report(spread <= kMeanSpread && d2 < d1, "long-interval mean",
         fmt("C(1e4)=%.6g C(1e5)=%.6g C(1e6)=%.6g spread %.2f%% (limit %.0f%%), |dC| %.3g then %.3g", c4, c5, c6,
             100 * spread, 100 * kMeanSpread, d1, d2));
}

void window_statistic(const sums::PartialSumTable& p) {
  const std::vector<double> grid{1e4, 3e4, 1e5, 3e5, 1e6};
  double hi = 0, lo = INFINITY;
  std::string values;
  for (double X : grid) {
    const double v = sums::window_mean(p, X, sums::theorem_window(X)).normalized;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
    values += fmt(" %.4g", v);
  }
  const sums::ExponentFit fit = sums::exponent_fit(p, grid, 2.0 / 3);
  const double expected = p.weight() - 0.5;
  const bool band = hi / lo <= kBandFactor;
  const bool slope = std::abs(fit.slope - expected) <= kSlopeTolerance;
  report(band && slope, "window statistic",
         fmt("normalized%s, max/min %.3f (limit %.0f); slope %.4f vs %.1f (tol %.2f)", values.c_str(), hi / lo,
             kBandFactor, fit.slope, expected, kSlopeTolerance));
}

void inequality(const sums::PartialSumTable& p) {
  int passed = 0, total = 0;
  double worst = 0;
  for (double X : {1e3, 1e4, 1e5, 5e5})
    for (double y : {2.0, 20.0, 100.0}) {
      const sums::InequalityReport r = sums::window_vs_smoothed(p, X, y);
      passed += r.pass;
      ++total;
      if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
    }
  report(passed == total, "window vs smoothed",
         fmt("4x3 grid %d/%d, max lhs/rhs %.3f", passed, total, worst));
}

}  // namespace

int main() {
  coefficient_oracle();
  hecke_suite();
  performance();
  kernel_identity();
  derivative_transforms();

  // One table long enough for the largest window around 10^6.
  const std::size_t N = static_cast<std::size_t>(std::ceil(1e6 + sums::theorem_window(1e6))) + 1;
  const forms::EigenformTable delta = forms::generate_delta(N);
  const sums::PartialSumTable p = sums::partial_sums(delta);

  decomposition(delta, p);
  long_interval_trend(p);
  window_statistic(p);
  inequality(p);

  std::printf("%s: %d failing\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
