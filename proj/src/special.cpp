#include "cuspsum/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cuspsum/errors.hpp"

namespace cuspsum::special {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 671.0 / 128.0;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,     -0.491913816097620199,
    .339946499848118887e-4,  .465236289270485756e-4,   -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,   -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real());
}

// Valid for Re z >= 1/2.
Complex lanczos_log_gamma(Complex z) {
  const Complex t = z + kLanczosG;
  Complex series = kLanczosC0;
  for (std::size_t j = 0; j < kLanczos.size(); ++j) series += kLanczos[j] / (z + static_cast<double>(j + 1));
  return (z + 0.5) * std::log(t) - t + std::log(kSqrtTwoPi * series / z);
}

// Alternating series sum_{k>=0} (-1)^k (k+1)^-z, accelerated. Terms chosen
// from the bound |error| <= 3 (1 + 2|t|) e^(pi|t|/2) (3 + sqrt 8)^-n / |Gamma(z)|
// on the eta function (Borwein).
Complex eta(Complex z) {
  const double t = std::abs(z.imag());
  const double log_gamma_re = log_gamma(z).real();
  const double log_target = std::log(3 * (1 + 2 * t)) + kPi * t / 2 - log_gamma_re + 37.0;  // e^-37 ~ 1e-16
  const double rate = std::log(3 + std::sqrt(8.0));
  int n = static_cast<int>(std::ceil(log_target / rate));
  n = std::clamp(n, 8, 380);

  double d = std::pow(3 + std::sqrt(8.0), n);
  d = (d + 1 / d) / 2;
  double b = -1;
  double c = -d;
  Complex sum = 0;
  Complex carry = 0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    // (k+1)^-z
    const double lk = std::log(static_cast<double>(k + 1));
    const Complex term = c * std::exp(-z * lk);
    const Complex y = term - carry;
    const Complex s = sum + y;
    carry = (s - sum) - y;
    sum = s;
    b = (static_cast<double>(k) + n) * (static_cast<double>(k) - n) * b / ((k + 0.5) * (k + 1));
  }
  return sum / d;
}

Complex zeta_from_eta(Complex z) { return eta(z) / (1.0 - std::exp((1.0 - z) * std::numbers::ln2)); }

}  // namespace

Complex checked(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
  return z;
}

Complex log_gamma(Complex z) {
  checked(z, "log_gamma");
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at a nonpositive integer");
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // log Gamma(z) = log Gamma(z + m) - sum_{j<m} log(z + j), principal logs.
  const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  Complex correction = 0;
  for (int j = 0; j < shift; ++j) correction += std::log(z + static_cast<double>(j));
  return lanczos_log_gamma(z + static_cast<double>(shift)) - correction;
}

Complex zeta(Complex z) {
  checked(z, "zeta");
  if (!(z.real() > 0)) throw DomainError("zeta: only Re z > 0 is supported");
  if (z == Complex(1, 0)) throw PoleError("zeta: pole at z = 1");
  if (std::abs(z - 1.0) < 1e-8) throw PoleError("zeta: too close to the pole at z = 1");
  const Complex denom = 1.0 - std::exp((1.0 - z) * std::numbers::ln2);
  if (std::abs(denom) > 0.05) return zeta_from_eta(z);
  // Removable singularity of eta / (1 - 2^(1-z)) at z = 1 + 2 pi i m / ln 2.
  // Average over a circle; the trapezoid rule on the circle converges
  // geometrically since the nearest other singularity is at least 9 away.
  constexpr int kNodes = 32;
  const double radius = std::min(0.25, 0.9 * z.real());
  Complex mean = 0;
  for (int j = 0; j < kNodes; ++j) {
    const double theta = 2 * kPi * (j + 0.5) / kNodes;
    mean += zeta_from_eta(z + std::polar(radius, theta));
  }
  return mean / static_cast<double>(kNodes);
}

Complex log_beta(Complex s, Complex z) { return log_gamma(s) + log_gamma(z) - log_gamma(s + z); }

}  // namespace cuspsum::special
