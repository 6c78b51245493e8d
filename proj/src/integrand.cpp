#include "cuspsum/integrand.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cuspsum/errors.hpp"
#include "cuspsum/parallel.hpp"

namespace cuspsum::mellin {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Complex IntegrandDescriptor::value(Complex s, Complex v) const {
  Complex log_part = 0;
  Complex product = 1;
  for (const Factor& f : factors_) {
    std::visit(Overloaded{
                   [&](const GammaFactor& g) { log_part += static_cast<double>(g.power) * special::log_gamma(g.arg.at(s, v)); },
                   [&](const ZetaFactor& z) { product *= special::zeta(z.arg.at(s, v)); },
                   [&](const BetaFactor& b) { log_part += special::log_beta(b.a.at(s, v), b.b.at(s, v)); },
                   [&](const KernelFactor& k) {
                     const Complex a = k.arg.at(s, v);
                     log_part += std::numbers::pi * a * a / (k.y * k.y);
                   },
                   [&](const PowerFactor& p) { log_part += p.arg.at(s, v) * std::log(p.X); },
                   [&](const PochhammerFactor& p) {
                     const Complex a = p.arg.at(s, v);
                     for (int j = 0; j < p.count; ++j) product *= a + static_cast<double>(j);
                   },
                   [&](const DirichletFactor& d) { product *= d.series->evaluate(d.arg.at(s, v)).value; },
                   [&](const ConstantFactor& c) { product *= c.value; },
               },
               f);
  }
  return product * std::exp(log_part);
}

void validate(const Contour& c) {
  if (!std::isfinite(c.sigma)) throw DomainError("contour: sigma must be finite");
  if (!(c.T > 0) || !std::isfinite(c.T)) throw DomainError("contour: T must be positive");
  if (!(c.h > 0)) throw DomainError("contour: h must be positive");
  if (c.h > c.T / 50) throw DomainError("contour: h = " + std::to_string(c.h) + " exceeds T/50");
}

LineIntegral line_integral(const IntegrandDescriptor& f, Complex s, const Contour& c) {
  validate(c);
  const auto half = static_cast<std::size_t>(std::floor(c.T / c.h + 1e-9));
  const bool endpoint = std::abs(static_cast<double>(half) * c.h - c.T) <= 1e-9 * c.T;
  // Node j = 0 is t = 0; nodes 2i-1, 2i are t = -ih, +ih.
  const std::size_t count = 2 * half + 1;
  std::vector<Complex> values(count);
  parallel_for(
      count,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
          const std::size_t i = (j + 1) / 2;
          const double t = (j % 2 == 1 ? -1.0 : 1.0) * static_cast<double>(i) * c.h;
          values[j] = f.value(s, Complex(c.sigma, t));
        }
      },
      8);
  Complex sum = 0;
  Complex carry = 0;
  double abs_sum = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t i = (j + 1) / 2;
    const double weight = (endpoint && i == half && i > 0) ? 0.5 : 1.0;
    const Complex y = weight * values[j] - carry;
    const Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    abs_sum += weight * std::abs(values[j]);
  }
  const double scale = c.h / (2 * std::numbers::pi);
  return LineIntegral{sum * scale, abs_sum * scale, count};
}

}  // namespace cuspsum::mellin
