#include "cuspsum/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "cuspsum/dirichlet.hpp"
#include "cuspsum/errors.hpp"

namespace cuspsum::mellin {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleMargin = 0.05;

// |Gamma(z) Gamma(A - z) / Gamma(A)| at z = sigma_z + iu.
double gamma_ratio_abs(double sigma_z, double u, Complex A) {
  const Complex z(sigma_z, u);
  return std::exp((special::log_gamma(z) + special::log_gamma(A - z) - special::log_gamma(A)).real());
}

}  // namespace

double zeta_bound(double sigma, double t) {
  const double n = std::max(1.0, std::ceil(std::abs(t)));
  const double at = std::max(std::abs(t), 1e-300);
  const double abs_s = std::hypot(sigma, t);
  // sum_{m<=n} m^-sigma + n^(1-s)/(s-1) - n^-s/2 - s int_n^inf ({x}-1/2) x^(-s-1) dx
  return 1 + std::pow(n, 1 - sigma) / (1 - sigma) + std::pow(n, 1 - sigma) / at + 0.5 * std::pow(n, -sigma) +
         abs_s * std::pow(n, -sigma) / (2 * sigma);
}

DecompositionReport decomposition_check(const forms::EigenformTable& t, const sums::PartialSumTable& p, Complex s,
                                        double sigma_z, std::size_t N, const QuadratureOptions& quad) {
  special::checked(s, "decomposition_check");
  if (!(s.real() >= 3)) throw DomainError("decomposition_check: requires Re s >= 3");
  if (!(sigma_z > 0 && sigma_z < 1)) throw DomainError("decomposition_check: sigma_z must lie in (0, 1)");
  if (sigma_z < kPoleMargin || sigma_z > 1 - kPoleMargin) {
    throw DomainError("decomposition_check: contour within 0.05 of a pole of the integrand");
  }
  if (t.weight() != p.weight()) throw DomainError("decomposition_check: weight mismatch");
  if (N == 0) throw RangeError("decomposition_check: N must be positive");

  const double k = t.weight();
  const Complex A = s + (k - 1);
  const auto D = std::make_shared<dirichlet::DirichletSeries>(dirichlet::squared_partial_sums(p, N));
  const auto W = std::make_shared<dirichlet::DirichletSeries>(dirichlet::w_series(t, p, N));

  DecompositionReport r;
  r.s = s;
  r.sigma_z = sigma_z;
  r.N = N;
  r.target = quad.target;

  const dirichlet::Evaluation lhs = D->evaluate(s);
  const dirichlet::Evaluation w_s = W->evaluate(s);
  const dirichlet::Evaluation w_s1 = W->evaluate(s - 1.0);
  const double shift_denominator = std::abs(s + (k - 2));
  r.lhs = lhs.value;
  r.w_term = w_s.value;
  r.shifted_term = w_s1.value / (s + (k - 2));

  // sup over the contour of |W(s - z)|, attained termwise at Im z = Im s.
  const dirichlet::Evaluation w_abs = W->evaluate(Complex(s.real() - sigma_z, 0));
  const double w_sup = w_abs.abs_sum + w_abs.tail_bound;
  const double w_contour_tail = W->tail_bound(s.real() - sigma_z, N);

  // The Gamma part decreases in |u| once |u| > |Im s|; the zeta bound grows
  // slowly. An upper Riemann sum with unit steps bounds the tail.
  const double u_floor = std::abs(s.imag()) + 1;
  const auto envelope = [&](double u0) {
    double total = 0;
    for (double sign : {1.0, -1.0}) {
      for (double u = u0;; u += 1) {
        const double g = gamma_ratio_abs(sigma_z, sign * u, A);
        const double term = g * zeta_bound(sigma_z, u + 1) * w_sup;
        total += term;
        if (term < 1e-30 * total || term == 0) break;
      }
    }
    return total / (2 * kPi);
  };
  const double scale = std::max(std::abs(lhs.value), std::numeric_limits<double>::min());
  double T = 0;
  if (quad.T) {
    T = *quad.T;
  } else {
    T = std::max(10.0, std::ceil(u_floor));
    while (envelope(T) > 1e-3 * std::numeric_limits<double>::epsilon() * scale && T < 1000) T += 5;
  }
  r.contour = Contour{sigma_z, T, quad.h};
  validate(r.contour);

  IntegrandDescriptor f;
  f.times(DirichletFactor{W, AffineArg{1, -1, 0}})
      .times(ZetaFactor{kVariable})
      .times(GammaFactor{kVariable, 1})
      .times(GammaFactor{AffineArg{1, -1, k - 1}, 1})
      .times(GammaFactor{AffineArg{1, 0, k - 1}, -1});
  const LineIntegral integral = line_integral(f, s, r.contour);
  r.integral_term = integral.value;
  r.nodes = integral.nodes;

  // Same quadrature applied to |zeta Gamma Gamma / Gamma| for the W tails.
  IntegrandDescriptor kernel_abs;
  kernel_abs.times(ZetaFactor{kVariable})
      .times(GammaFactor{kVariable, 1})
      .times(GammaFactor{AffineArg{1, -1, k - 1}, 1})
      .times(GammaFactor{AffineArg{1, 0, k - 1}, -1});
  const double kernel_mass = line_integral(kernel_abs, s, r.contour).abs_value;

  r.rhs = r.w_term + r.shifted_term + r.integral_term;
  r.abs_gap = std::abs(r.rhs - r.lhs);
  r.rel_gap = r.abs_gap / scale;

  const double eps = std::numeric_limits<double>::epsilon();
  ErrorBudget& b = r.budget;
  b.lhs_tail = lhs.tail_bound;
  b.w_tail = w_s.tail_bound;
  b.shifted_w_tail = w_s1.tail_bound / shift_denominator;
  b.truncation = envelope(T);
  b.integral_w_tail = w_contour_tail * (kernel_mass + b.truncation / w_sup);
  // Trapezoid error for a function analytic in |Im u| < d: about
  // 2 M exp(-2 pi d / h), M the L1 norm on the strip edges.
  const double d = 0.9 * std::min(sigma_z, 1 - sigma_z);
  b.discretization = 2 * 10 * w_sup * kernel_mass * std::exp(-2 * kPi * d / quad.h);
  b.rounding = 64 * eps * (lhs.abs_sum + w_s.abs_sum + w_s1.abs_sum / shift_denominator + w_sup * kernel_mass);
  r.certified_error = b.total() / scale;
  r.pass = r.rel_gap <= r.certified_error && r.certified_error <= quad.target;
  return r;
}

}  // namespace cuspsum::mellin
