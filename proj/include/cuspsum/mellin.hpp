#pragma once

// The Gaussian concentrating kernel exp(pi s^2 / y^2) X^s / y, its Mellin
// inversion and the differentiated family of identities.

#include <optional>

#include "cuspsum/integrand.hpp"

namespace cuspsum::mellin {

struct KernelParams {
  double X = 1;
  double y = 1;
};

// Throws DomainError unless X >= 1 and y > 0, both finite.
void validate(const KernelParams& p);

// (1/2pi) exp(-y^2 log^2 X / 4pi)
double kernel_closed_form(const KernelParams& p);

// Abscissa of the real saddle, -y^2 log X / 2pi. On this line the kernel
// integrand is a positive Gaussian in Im s.
double saddle_abscissa(const KernelParams& p);

// Unset fields take defaults: sigma the saddle abscissa, T = 6y,
// h = min(0.05, y/50).
struct LineIntegralSpec {
  std::optional<double> sigma;
  std::optional<double> T;
  std::optional<double> h;
  double tolerance = 1e-10;  // relative tail above this raises the warning flag
};

Contour resolve(const LineIntegralSpec& spec, const KernelParams& p);

// exp(pi v^2 / y^2) X^v / y
IntegrandDescriptor kernel_integrand(const KernelParams& p);

struct KernelIntegral {
  double value = 0;
  double imag_part = 0;    // should vanish by symmetry
  double tail_bound = 0;   // |integrand| beyond +-T, integrated exactly
  double condition = 0;    // (integral of |f|) / |integral of f|
  bool truncation_warning = false;
  Contour contour;
};

KernelIntegral kernel_line_integral(const KernelParams& p, const LineIntegralSpec& spec = {});

struct TransformReport {
  int m = 0;
  int l = 0;
  KernelParams params;
  double lhs = 0;           // quadrature of Gamma(s+m+l)/Gamma(s+l) times the kernel
  double rhs = 0;           // X^(1-l) (d/dX)^m (X^(m+l-1) closed form)
  double rel_gap = 0;
  double fd_error = 0;      // finite-difference error estimate, relative
  double tolerance = 0;
  double envelope = 0;      // (y + y^2 |log X|)^m exp(-y^2 log^2 X / 4pi)
  double observed_constant = 0;  // |lhs| / envelope
  bool pass = false;
};

// Default tolerance 1e-10 for m = 0 and 1e-6 otherwise. Throws DomainError
// for m or l outside [0, 4].
TransformReport derivative_transform_check(int m, int l, const KernelParams& p,
                                           const LineIntegralSpec& spec = {},
                                           std::optional<double> tolerance = std::nullopt);

}  // namespace cuspsum::mellin
