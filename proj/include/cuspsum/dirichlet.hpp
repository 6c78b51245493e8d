#pragma once

// Truncated Dirichlet series sum c(n) n^-(s + shift) with certified tails.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cuspsum/forms.hpp"
#include "cuspsum/special.hpp"
#include "cuspsum/sums.hpp"

namespace cuspsum::dirichlet {

using special::Complex;

// Growth assumption |c(n)| <= C n^exponent used past the truncation point.
// C is measured over the table and doubled.
struct GrowthModel {
  double exponent = 0;
  double min_real_s = 0;  // evaluations with Re s below this are refused
  bool finite = false;    // coefficients past the table are zero
};

struct Evaluation {
  Complex value;
  double tail_bound = 0;
  double abs_sum = 0;  // sum of |terms|, for rounding estimates
  std::size_t terms = 0;
};

class DirichletSeries {
 public:
  // coeffs[0] is ignored; coeffs[n] = c(n) for n = 1..size-1.
  DirichletSeries(std::span<const BigInt> coeffs, double shift, GrowthModel growth);

  std::size_t max_index() const { return log_mag_.size() - 1; }
  double shift() const { return shift_; }
  double growth_constant() const { return growth_constant_; }
  const GrowthModel& growth() const { return growth_; }

  // First N terms plus the bound on everything beyond. Throws DomainError
  // if Re s < min_real_s and RangeError if N exceeds the table.
  Evaluation evaluate(Complex s, std::size_t N) const;
  Evaluation evaluate(Complex s) const { return evaluate(s, max_index()); }

  // Bound on sum_{n > N} |c(n)| n^-(sigma + shift).
  double tail_bound(double sigma, std::size_t N) const;

 private:
  std::vector<double> log_mag_;
  std::vector<std::int8_t> sign_;
  double shift_;
  GrowthModel growth_;
  double growth_constant_ = 0;
};

// Slack above the Hafner-Ivic exponent for w(n).
inline constexpr double kGrowthEpsilon = 0.1;

// |S(n)|^2 n^-(s + k - 1), |S(n)|^2 <= C n^(k - 1 + 2/3), Re s >= 3.
DirichletSeries squared_partial_sums(const sums::PartialSumTable& p, std::size_t N);

// w(n) = 2 a(n) S(n) - a(n)^2 for n = 1..N, with w(0) = 0.
// Throws RangeError if N exceeds either table.
std::vector<BigInt> w_coefficients(const forms::EigenformTable& t, const sums::PartialSumTable& p,
                                   std::size_t N);

// w(n) n^-(s + k - 1), w(n) <= C n^(k - 1 + 1/3 + eps), Re s >= 1.5.
DirichletSeries w_series(const forms::EigenformTable& t, const sums::PartialSumTable& p, std::size_t N);

}  // namespace cuspsum::dirichlet
