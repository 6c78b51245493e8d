#include "cuspsum/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cuspsum/errors.hpp"

namespace cuspsum::mellin {
namespace {

constexpr double kPi = std::numbers::pi;

double log_closed_form(const KernelParams& p) {
  const double L = std::log(p.X);
  return -std::log(2 * kPi) - p.y * p.y * L * L / (4 * kPi);
}

// Central difference weights for the m-th derivative on nodes -r..r,
// r = ceil(m / 2), second-order accurate.
std::vector<double> central_weights(int m) {
  switch (m) {
    case 1: return {-0.5, 0, 0.5};
    case 2: return {1, -2, 1};
    case 3: return {-0.5, 1, 0, -1, 0.5};
    case 4: return {1, -4, 6, -4, 1};
    default: return {1};
  }
}

double central_difference(auto&& g, double x, double h, int m) {
  const std::vector<double> w = central_weights(m);
  const int r = static_cast<int>(w.size() / 2);
  double sum = 0;
  for (int j = -r; j <= r; ++j) sum += w[j + r] * g(x + j * h);
  return sum / std::pow(h, m);
}

}  // namespace

void validate(const KernelParams& p) {
  if (!std::isfinite(p.X) || !(p.X >= 1)) throw DomainError("kernel: X must be >= 1");
  if (!std::isfinite(p.y) || !(p.y > 0)) throw DomainError("kernel: y must be > 0");
}

double kernel_closed_form(const KernelParams& p) {
  validate(p);
  return std::exp(log_closed_form(p));
}

double saddle_abscissa(const KernelParams& p) {
  validate(p);
  return -p.y * p.y * std::log(p.X) / (2 * kPi);
}

Contour resolve(const LineIntegralSpec& spec, const KernelParams& p) {
  validate(p);
  Contour c;
  c.sigma = spec.sigma.value_or(saddle_abscissa(p));
  c.T = spec.T.value_or(6 * p.y);
  c.h = spec.h.value_or(std::min(0.05, p.y / 50));
  validate(c);
  return c;
}

IntegrandDescriptor kernel_integrand(const KernelParams& p) {
  validate(p);
  IntegrandDescriptor f;
  f.times(KernelFactor{p.y}).times(PowerFactor{p.X}).times(ConstantFactor{1 / p.y});
  return f;
}

KernelIntegral kernel_line_integral(const KernelParams& p, const LineIntegralSpec& spec) {
  const Contour c = resolve(spec, p);
  const LineIntegral li = line_integral(kernel_integrand(p), 0, c);
  KernelIntegral r;
  r.contour = c;
  r.value = li.value.real();
  r.imag_part = li.value.imag();
  r.condition = r.value != 0 ? li.abs_value / std::abs(r.value) : std::numeric_limits<double>::infinity();
  // |f(sigma + it)| = exp(pi (sigma^2 - t^2) / y^2 + sigma log X) / y, and
  // int_T^inf exp(-pi t^2 / y^2) dt = (y / 2) erfc(sqrt(pi) T / y).
  const double log_tail = -std::log(2 * kPi) + kPi * c.sigma * c.sigma / (p.y * p.y) + c.sigma * std::log(p.X) +
                          std::log(std::erfc(std::sqrt(kPi) * c.T / p.y));
  r.tail_bound = std::exp(log_tail);
  r.truncation_warning = !(log_tail - log_closed_form(p) <= std::log(spec.tolerance));
  return r;
}

TransformReport derivative_transform_check(int m, int l, const KernelParams& p, const LineIntegralSpec& spec,
                                           std::optional<double> tolerance) {
  if (m < 0 || m > 4 || l < 0 || l > 4) throw DomainError("derivative_transform_check: m and l must lie in [0, 4]");
  validate(p);
  TransformReport r;
  r.m = m;
  r.l = l;
  r.params = p;
  r.tolerance = tolerance.value_or(m == 0 ? 1e-10 : 1e-6);

  // Gamma(s+m+l)/Gamma(s+l) is the polynomial (s+l)_m, entire like the kernel.
  IntegrandDescriptor f = kernel_integrand(p);
  if (m > 0) f.times(PochhammerFactor{AffineArg{0, 1, static_cast<double>(l)}, m});
  const Contour c = resolve(spec, p);
  r.lhs = line_integral(f, 0, c).value.real();

  const double y = p.y;
  const auto G = [&](double x) {
    const double L = std::log(x);
    return std::pow(x, m + l - 1) * std::exp(-std::log(2 * kPi) - y * y * L * L / (4 * kPi));
  };
  if (m == 0) {
    r.rhs = std::pow(p.X, 1 - l) * G(p.X);
  } else {
    // Step relative to the scale on which G varies. G carries the rounding
    // of its exponent, so the working precision is kappa * eps rather than
    // eps, and Richardson makes the truncation error O(h^4).
    const double L = std::log(p.X);
    const double scale = p.X / (1 + y + y * y * std::abs(L));
    const double kappa = 1 + y * y * L * L / (4 * kPi) + std::abs(m + l - 1) * std::abs(L);
    const double eps = kappa * std::numeric_limits<double>::epsilon();
    double h = std::pow(eps, 1.0 / (m + 4)) * scale;
    // Keep the stencil inside X > 0.
    h = std::min(h, p.X / (2.0 * (m / 2 + 1)));
    const double d1 = central_difference(G, p.X, h, m);
    const double d2 = central_difference(G, p.X, 2 * h, m);
    // Richardson on the O(h^2) leading error.
    const double d = (4 * d1 - d2) / 3;
    const double factor = std::pow(p.X, 1 - l);
    r.rhs = factor * d;
    r.fd_error = std::abs(d1 - d2) / 3 * factor / std::max(std::abs(r.rhs), std::numeric_limits<double>::min());
  }
  r.rel_gap = std::abs(r.lhs - r.rhs) / std::abs(r.rhs);
  const double L = std::log(p.X);
  r.envelope = std::pow(y + y * y * std::abs(L), m) * std::exp(-y * y * L * L / (4 * kPi));
  r.observed_constant = std::abs(r.lhs) / r.envelope;
  r.pass = r.rel_gap <= r.tolerance;
  return r;
}

}  // namespace cuspsum::mellin
