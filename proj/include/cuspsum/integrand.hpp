#pragma once

// Symbolic vertical-line integrands: products of Gamma, zeta, Beta, Gaussian
// kernel, power and Dirichlet-series factors of affine arguments.

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "cuspsum/dirichlet.hpp"
#include "cuspsum/special.hpp"

namespace cuspsum::mellin {

using special::Complex;

// s_coeff * s + v_coeff * v + constant, where s is a fixed parameter and v
// the integration variable.
struct AffineArg {
  Complex s_coeff = 0;
  Complex v_coeff = 0;
  Complex constant = 0;

  Complex at(Complex s, Complex v) const { return s_coeff * s + v_coeff * v + constant; }
};

// The integration variable itself.
inline constexpr AffineArg kVariable{0, 1, 0};

struct GammaFactor {
  AffineArg arg;
  int power = 1;  // +1 or -1
};
struct ZetaFactor {
  AffineArg arg;
};
struct BetaFactor {
  AffineArg a;
  AffineArg b;
};
// exp(pi arg^2 / y^2)
struct KernelFactor {
  double y;
  AffineArg arg = kVariable;
};
// X^arg
struct PowerFactor {
  double X;
  AffineArg arg = kVariable;
};
// arg (arg + 1) ... (arg + count - 1), i.e. Gamma(arg + count) / Gamma(arg)
struct PochhammerFactor {
  AffineArg arg;
  int count;
};
struct DirichletFactor {
  std::shared_ptr<const dirichlet::DirichletSeries> series;
  AffineArg arg;
};
struct ConstantFactor {
  Complex value;
};

using Factor = std::variant<GammaFactor, ZetaFactor, BetaFactor, KernelFactor, PowerFactor, PochhammerFactor,
                            DirichletFactor, ConstantFactor>;

class IntegrandDescriptor {
 public:
  IntegrandDescriptor& times(Factor f) {
    factors_.push_back(std::move(f));
    return *this;
  }
  std::span<const Factor> factors() const { return factors_; }

  // Gamma, Beta, kernel and power factors are combined in the log domain,
  // the rest multiplied directly. Errors from the special functions
  // (poles, domain) propagate.
  Complex value(Complex s, Complex v) const;

 private:
  std::vector<Factor> factors_;
};

struct Contour {
  double sigma = 0;
  double T = 0;
  double h = 0;
};

// Throws DomainError unless T > 0, h > 0 and h <= T / 50.
void validate(const Contour& c);

struct LineIntegral {
  Complex value;
  double abs_value = 0;  // (1/2pi) sum h |f|, the same rule applied to |f|
  std::size_t nodes = 0;
};

// (1/2 pi i) int_{sigma - iT}^{sigma + iT} f(s, v) dv by the trapezoid rule
// with nodes sigma + i j h, summed in ascending |j|.
LineIntegral line_integral(const IntegrandDescriptor& f, Complex s, const Contour& c);

}  // namespace cuspsum::mellin
