#pragma once

// Complex log-Gamma, Riemann zeta and log-Beta for vertical-line integrands.

#include <complex>

namespace cuspsum::special {

using Complex = std::complex<double>;

// Throws DomainError if either component is NaN or infinite.
Complex checked(Complex z, const char* what);

// Analytic continuation of log Gamma from the positive real axis, with the
// branch cut on the negative real axis (the branch for which
// log_gamma(z + 1) = log_gamma(z) + log z with the principal log).
//
// Lanczos approximation with g = 671/128 and 14 terms (Numerical Recipes,
// 3rd ed., gammln), relative error below 1e-15 in Gamma on Re z >= 1/2.
// Arguments with Re z < 1/2 are shifted up with the recurrence first.
// Throws PoleError at nonpositive integers.
Complex log_gamma(Complex z);

// Riemann zeta for Re z > 0, z != 1, from the alternating (eta) series with
// the Cohen-Rodriguez Villegas-Zagier acceleration. Near the zeros of
// 1 - 2^(1-z) off the real axis the value is recovered from the mean over a
// small circle. Throws DomainError for Re z <= 0 and PoleError at z = 1.
Complex zeta(Complex z);

// log Gamma(s) + log Gamma(z) - log Gamma(s + z).
Complex log_beta(Complex s, Complex z);

}  // namespace cuspsum::special
