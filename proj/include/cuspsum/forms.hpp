#pragma once

// Fourier coefficients of the normalized Hecke eigenforms of level one in the
// weights where the cusp space is one-dimensional.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuspsum/series.hpp"

namespace cuspsum::forms {

inline constexpr int kSupportedWeights[] = {12, 16, 18, 20, 22, 26};

bool is_supported_weight(int weight);

// Exact coefficients a(0..N) with a(0) = 0 and a(1) = 1. Immutable once built.
class EigenformTable {
 public:
  // Throws DomainError unless a(0) = 0 and, for N >= 1, a(1) = 1.
  EigenformTable(int weight, std::vector<BigInt> coeffs);

  int weight() const { return weight_; }
  std::size_t max_index() const { return coeffs_.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return coeffs_[n]; }
  std::span<const BigInt> coefficients() const { return coeffs_; }

  friend bool operator==(const EigenformTable&, const EigenformTable&) = default;

 private:
  int weight_;
  std::vector<BigInt> coeffs_;
};

// prod (1 - q^n)^3 = sum_m (-1)^m (2m+1) q^(m(m+1)/2), truncated at degree N.
IntegerSeries eta_cubed_sparse(std::size_t N);

// sigma_power(n) = sum_{d | n} d^power for n = 0..N (entry 0 is 0), by a
// multiplicative smallest-prime-factor sieve.
std::vector<BigInt> divisor_power_sums(unsigned power, std::size_t N);

// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
IntegerSeries eisenstein(int weight, std::size_t N);

// tau(1..N) as q * (prod (1 - q^n)^3)^8, three exact squarings.
EigenformTable generate_delta(std::size_t N);

// tau(1..N) as (E4^3 - E6^2) / 1728. Throws ArithmeticError on an inexact division.
EigenformTable delta_via_eisenstein(std::size_t N);

// tau(n) at selected indices without any series multiplication:
// 1728 tau(n) = [q^n] (E8 * E4 - E6 * E6), where E8 = E4^2 = 1 + 480 sum sigma_7(n) q^n.
std::vector<BigInt> delta_via_eisenstein_at(std::span<const std::size_t> indices);

// Delta * E4^a * E6^b with 4a + 6b = weight - 12.
EigenformTable eigenform(int weight, std::size_t N);

struct HeckeFailure {
  enum class Kind { multiplicativity, prime_power, deligne };
  Kind kind;
  std::size_t m;  // first factor, or the prime
  std::size_t n;  // second factor, or the exponent r + 1 of p^(r+1)
};

std::string to_string(HeckeFailure::Kind kind);

struct HeckeReport {
  std::size_t bound = 0;
  std::size_t multiplicativity_checked = 0;
  std::size_t multiplicativity_failures = 0;
  std::size_t prime_power_checked = 0;
  std::size_t prime_power_failures = 0;
  std::size_t deligne_checked = 0;
  std::size_t deligne_failures = 0;
  std::optional<HeckeFailure> first_failure;

  std::size_t failures() const { return multiplicativity_failures + prime_power_failures + deligne_failures; }
  bool passed() const { return failures() == 0; }
};

// Checks a(mn) = a(m)a(n) on coprime pairs 2 <= m < n, mn <= bound; the
// prime-power recursion; and a(p)^2 <= 4 p^(k-1) at primes, all exactly.
HeckeReport hecke_report(const EigenformTable& table, std::size_t bound);

}  // namespace cuspsum::forms
