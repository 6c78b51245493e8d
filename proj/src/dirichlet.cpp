#include "cuspsum/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cuspsum/errors.hpp"

namespace cuspsum::dirichlet {
namespace {

// Neumaier summation of a real sequence.
class Compensated {
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

}  // namespace

DirichletSeries::DirichletSeries(std::span<const BigInt> coeffs, double shift, GrowthModel growth)
    : shift_(shift), growth_(growth) {
  if (coeffs.size() < 2) throw DomainError("DirichletSeries: need at least one coefficient");
  log_mag_.resize(coeffs.size());
  sign_.resize(coeffs.size());
  log_mag_[0] = -std::numeric_limits<double>::infinity();
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    sign_[n] = static_cast<std::int8_t>(sgn(coeffs[n]));
    log_mag_[n] = sums::log_abs(coeffs[n]);
    if (sign_[n] != 0) {
      c = std::max(c, log_mag_[n] - growth.exponent * std::log(static_cast<double>(n)));
    }
  }
  growth_constant_ = 2 * std::exp(c);
}

double DirichletSeries::tail_bound(double sigma, std::size_t N) const {
  if (growth_.finite && N >= max_index()) return 0;
  const double beta = growth_.exponent - sigma - shift_;
  if (!(beta < -1)) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(std::max<std::size_t>(N, 1));
  // sum_{m > N} m^beta <= int_N^inf x^beta dx
  return growth_constant_ * std::exp((beta + 1) * std::log(n)) / (-beta - 1);
}

Evaluation DirichletSeries::evaluate(Complex s, std::size_t N) const {
  special::checked(s, "dirichlet_eval");
  if (s.real() < growth_.min_real_s) {
    throw DomainError("dirichlet_eval: Re s = " + std::to_string(s.real()) +
                      " is below the supported abscissa " + std::to_string(growth_.min_real_s));
  }
  if (N > max_index()) {
    throw RangeError("dirichlet_eval: N = " + std::to_string(N) + " exceeds the table size " +
                     std::to_string(max_index()));
  }
  const double sigma = s.real() + shift_;
  const double t = s.imag();
  Compensated re;
  Compensated im;
  Compensated abs_sum;
  for (std::size_t n = 1; n <= N; ++n) {
    if (sign_[n] == 0) continue;
    const double log_n = std::log(static_cast<double>(n));
    const double mag = std::exp(log_mag_[n] - sigma * log_n);
    const double phase = -t * log_n;
    const double signed_mag = sign_[n] > 0 ? mag : -mag;
    re.add(signed_mag * std::cos(phase));
    im.add(signed_mag * std::sin(phase));
    abs_sum.add(mag);
  }
  Evaluation e;
  e.value = Complex(re.value(), im.value());
  e.tail_bound = tail_bound(s.real(), N);
  e.abs_sum = abs_sum.value();
  e.terms = N;
  return e;
}

DirichletSeries squared_partial_sums(const sums::PartialSumTable& p, std::size_t N) {
  if (N > p.max_index()) throw RangeError("squared_partial_sums: N exceeds the table");
  std::vector<BigInt> c(N + 1);
  for (std::size_t n = 1; n <= N; ++n) c[n] = p[n] * p[n];
  const double k = p.weight();
  return DirichletSeries(c, k - 1, GrowthModel{k - 1 + 2.0 / 3.0, 3.0, false});
}

std::vector<BigInt> w_coefficients(const forms::EigenformTable& t, const sums::PartialSumTable& p,
                                   std::size_t N) {
  if (N > t.max_index() || N > p.max_index()) throw RangeError("w_coefficients: N exceeds the table");
  std::vector<BigInt> w(N + 1);
  for (std::size_t n = 1; n <= N; ++n) w[n] = 2 * t[n] * p[n] - t[n] * t[n];
  return w;
}

DirichletSeries w_series(const forms::EigenformTable& t, const sums::PartialSumTable& p, std::size_t N) {
  const double k = t.weight();
  return DirichletSeries(w_coefficients(t, p, N), k - 1,
                         GrowthModel{k - 1 + 1.0 / 3.0 + kGrowthEpsilon, 1.5, false});
}

}  // namespace cuspsum::dirichlet
