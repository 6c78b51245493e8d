#pragma once

// Exact power series with arbitrary-precision integer coefficients.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cuspsum {

using BigInt = mpz_class;

// Coefficients of q^0 .. q^N, never rounded. Always holds at least one term.
class IntegerSeries {
 public:
  explicit IntegerSeries(std::vector<BigInt> coeffs);

  std::size_t size() const { return coeffs_.size(); }
  std::size_t degree() const { return coeffs_.size() - 1; }
  const BigInt& operator[](std::size_t i) const { return coeffs_[i]; }
  std::span<const BigInt> coeffs() const { return coeffs_; }
  std::vector<BigInt> release() && { return std::move(coeffs_); }

  friend bool operator==(const IntegerSeries&, const IntegerSeries&) = default;

 private:
  std::vector<BigInt> coeffs_;
};

struct ConvolutionOptions {
  // Force the number of primes instead of sizing the set from the certified
  // bound. Used to exercise the overflow guard.
  std::optional<std::size_t> prime_count;
  // Products with len_a * len_b at or below this use the schoolbook path.
  std::size_t schoolbook_cutoff = 4096;
};

// Bits B such that every coefficient of a * b (truncated at degree N) has
// absolute value below 2^B: bits(max|a|) + bits(max|b|) + bits(min length).
std::size_t product_bound_bits(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t N);

// Number of primes from ntt::kPrimes whose product exceeds 2^(bound_bits + 1),
// or nullopt if even the full list is too small.
std::optional<std::size_t> primes_for_bound(std::size_t bound_bits);

// a * b truncated at degree N, via multimodular NTT and CRT. Throws
// ReconstructionOverflow when the prime product cannot hold the bound.
IntegerSeries series_multiply(const IntegerSeries& a, const IntegerSeries& b, std::size_t N,
                              const ConvolutionOptions& options = {});
IntegerSeries series_square(const IntegerSeries& a, std::size_t N, const ConvolutionOptions& options = {});

// Quadratic reference paths.
IntegerSeries series_multiply_schoolbook(const IntegerSeries& a, const IntegerSeries& b, std::size_t N);
IntegerSeries series_square_schoolbook(const IntegerSeries& a, std::size_t N);

}  // namespace cuspsum
