#pragma once

// Numerical check of
//   D(s) = W(s) + W(s-1)/(s+k-2)
//          + (1/2 pi i) int_(sigma_z) W(s-z) zeta(z) Gamma(z) Gamma(s+k-1-z) / Gamma(s+k-1) dz
// with D(s) = sum |S(n)|^2 n^-(s+k-1) and W(s) = sum w(n) n^-(s+k-1),
// both truncated at N.

#include <cstddef>
#include <optional>

#include "cuspsum/forms.hpp"
#include "cuspsum/integrand.hpp"
#include "cuspsum/sums.hpp"

namespace cuspsum::mellin {

struct QuadratureOptions {
  double h = 0.05;
  std::optional<double> T;  // default: from the analytic envelope
  double target = 1e-6;     // certified relative error required to pass
};

// Absolute error budget of the right side minus the left side.
struct ErrorBudget {
  double lhs_tail = 0;         // D past N
  double w_tail = 0;           // W(s) past N
  double shifted_w_tail = 0;   // W(s-1)/(s+k-2) past N
  double integral_w_tail = 0;  // W(s-z) past N inside the integral
  double truncation = 0;       // |Im z| > T
  double discretization = 0;   // trapezoid rule
  double rounding = 0;

  double total() const {
    return lhs_tail + w_tail + shifted_w_tail + integral_w_tail + truncation + discretization + rounding;
  }
};

struct DecompositionReport {
  Complex s;
  double sigma_z = 0;
  std::size_t N = 0;
  Complex lhs;
  Complex rhs;
  Complex w_term;        // W(s)
  Complex shifted_term;  // W(s-1)/(s+k-2)
  Complex integral_term;
  double abs_gap = 0;
  double rel_gap = 0;
  ErrorBudget budget;
  double certified_error = 0;  // budget.total() / |lhs|
  double target = 0;
  Contour contour;
  std::size_t nodes = 0;
  // The gap is inside the certified error and the certified error meets the target.
  bool pass = false;
};

// Throws DomainError for Re s < 3, for sigma_z outside (0, 1) or within
// 0.05 of 0 or 1 (a contour-pole proximity error), and RangeError when N
// exceeds either table.
DecompositionReport decomposition_check(const forms::EigenformTable& t, const sums::PartialSumTable& p, Complex s,
                                        double sigma_z, std::size_t N, const QuadratureOptions& quad = {});

// An upper bound for |zeta(sigma + it)|, 0 < sigma < 1, from Euler-Maclaurin
// summation cut at ceil(|t|).
double zeta_bound(double sigma, double t);

}  // namespace cuspsum::mellin
