#include "cuspsum/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "cuspsum/errors.hpp"
#include "cuspsum/ntt.hpp"
#include "cuspsum/parallel.hpp"

namespace cuspsum {
namespace {

std::size_t max_abs_bits(std::span<const BigInt> values) {
  std::size_t bits = 0;
  for (const auto& v : values) {
    if (sgn(v) != 0) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
  }
  return bits;
}

std::uint32_t residue(const BigInt& v, std::uint32_t p) {
  if (v.fits_slong_p()) {
    const long x = v.get_si();
    long r = x % static_cast<long>(p);
    if (r < 0) r += static_cast<long>(p);
    return static_cast<std::uint32_t>(r);
  }
  return static_cast<std::uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) { return ntt::detail::pow_mod(a, p - 2, p); }

// Centered Chinese remaindering over the first `count` primes. The residues
// are of c + B with B = floor(M / 2), so the mixed-radix value lies in [0, M)
// and c is recovered with a single subtraction.
class Reconstructor {
 public:
  explicit Reconstructor(std::size_t count) : count_(count) {
    modulus_ = 1;
    for (std::size_t i = 0; i < count; ++i) modulus_ *= ntt::kPrimes[i].modulus;
    half_ = modulus_ / 2;
    half_residues_.resize(count);
    inverses_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t p = ntt::kPrimes[i].modulus;
      half_residues_[i] = static_cast<std::uint32_t>(mpz_fdiv_ui(half_.get_mpz_t(), p));
      std::uint64_t prefix = 1;
      for (std::size_t j = 0; j < i; ++j) prefix = prefix * (ntt::kPrimes[j].modulus % p) % p;
      inverses_[i] = i == 0 ? 1 : inverse_mod(prefix, p);
    }
  }

  std::uint32_t shift(std::size_t prime, std::uint32_t r) const {
    const std::uint64_t p = ntt::kPrimes[prime].modulus;
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(r) + half_residues_[prime]) % p);
  }

  void rebuild(std::span<const std::uint32_t> shifted_residues, BigInt& out) const {
    std::array<std::uint64_t, ntt::kPrimeCount> digits{};
    for (std::size_t i = 0; i < count_; ++i) {
      const std::uint64_t p = ntt::kPrimes[i].modulus;
      // Value of the partial mixed-radix number modulo p.
      std::uint64_t acc = 0;
      for (std::size_t j = i; j-- > 0;) acc = (acc * (ntt::kPrimes[j].modulus % p) + digits[j]) % p;
      const std::uint64_t r = shifted_residues[i];
      digits[i] = (r + p - acc) % p * inverses_[i] % p;
    }
    out = static_cast<unsigned long>(digits[count_ - 1]);
    for (std::size_t j = count_ - 1; j-- > 0;) {
      mpz_mul_ui(out.get_mpz_t(), out.get_mpz_t(), ntt::kPrimes[j].modulus);
      mpz_add_ui(out.get_mpz_t(), out.get_mpz_t(), digits[j]);
    }
    out -= half_;
  }

 private:
  std::size_t count_;
  BigInt modulus_;
  BigInt half_;
  std::vector<std::uint32_t> half_residues_;
  std::vector<std::uint64_t> inverses_;
};

std::size_t choose_prime_count(std::size_t bound_bits, const ConvolutionOptions& options) {
  const auto needed = primes_for_bound(bound_bits);
  if (options.prime_count) {
    const std::size_t forced = *options.prime_count;
    if (forced == 0 || forced > ntt::kPrimeCount || !needed || forced < *needed) {
      throw ReconstructionOverflow("prime set modulus is below the certified coefficient bound of 2^" +
                                   std::to_string(bound_bits));
    }
    return forced;
  }
  if (!needed) {
    throw ReconstructionOverflow("certified coefficient bound 2^" + std::to_string(bound_bits) +
                                 " exceeds the product of all available primes");
  }
  return *needed;
}

IntegerSeries multimodular(std::span<const BigInt> a, std::span<const BigInt> b, bool squaring, std::size_t N,
                           const ConvolutionOptions& options) {
  const std::size_t out_len = N + 1;
  a = a.first(std::min(a.size(), out_len));
  b = b.first(std::min(b.size(), out_len));
  const std::size_t bound = product_bound_bits(a, b, N);
  std::vector<BigInt> out(out_len);
  if (bound == 0) return IntegerSeries(std::move(out));
  const std::size_t count = choose_prime_count(bound, options);
  const Reconstructor crt(count);

  // residues[i][n] holds coefficient n of the product modulo prime i, shifted by B.
  std::vector<std::vector<std::uint32_t>> residues(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ntt::Prime& prime = ntt::kPrimes[i];
    std::vector<std::uint32_t> ra(a.size());
    parallel_for(a.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t n = lo; n < hi; ++n) ra[n] = residue(a[n], prime.modulus);
    }, 1 << 14);
    std::vector<std::uint32_t> product;
    if (squaring) {
      product = ntt::square(ra, prime, out_len);
    } else {
      std::vector<std::uint32_t> rb(b.size());
      parallel_for(b.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n) rb[n] = residue(b[n], prime.modulus);
      }, 1 << 14);
      product = ntt::convolve(ra, rb, prime, out_len);
    }
    for (auto& r : product) r = crt.shift(i, r);
    residues[i] = std::move(product);
  }

  parallel_for(out_len, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> column(count);
    for (std::size_t n = lo; n < hi; ++n) {
      for (std::size_t i = 0; i < count; ++i) column[i] = residues[i][n];
      crt.rebuild(column, out[n]);
    }
  }, 1 << 14);
  return IntegerSeries(std::move(out));
}

IntegerSeries schoolbook(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t N) {
  std::vector<BigInt> out(N + 1);
  for (std::size_t i = 0; i < a.size() && i <= N; ++i) {
    if (sgn(a[i]) == 0) continue;
    const std::size_t limit = std::min(b.size(), N + 1 - i);
    for (std::size_t j = 0; j < limit; ++j) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return IntegerSeries(std::move(out));
}

bool use_schoolbook(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t N,
                    const ConvolutionOptions& options) {
  if (options.prime_count) return false;
  const std::size_t la = std::min(a.size(), N + 1);
  const std::size_t lb = std::min(b.size(), N + 1);
  return la * lb <= options.schoolbook_cutoff;
}

}  // namespace

IntegerSeries::IntegerSeries(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("an integer series needs at least the constant term");
}

std::size_t product_bound_bits(std::span<const BigInt> a, std::span<const BigInt> b, std::size_t N) {
  const std::size_t la = std::min(a.size(), N + 1);
  const std::size_t lb = std::min(b.size(), N + 1);
  const std::size_t bits_a = max_abs_bits(a.first(la));
  const std::size_t bits_b = max_abs_bits(b.first(lb));
  if (bits_a == 0 || bits_b == 0) return 0;
  const std::size_t terms = std::min(la, lb);
  return bits_a + bits_b + static_cast<std::size_t>(std::bit_width(terms));
}

std::optional<std::size_t> primes_for_bound(std::size_t bound_bits) {
  // Every prime exceeds 2^31, so count primes contribute more than 31 * count bits.
  const std::size_t needed = (bound_bits + 1) / 31 + 1;
  if (needed > ntt::kPrimeCount) return std::nullopt;
  return needed;
}

IntegerSeries series_multiply(const IntegerSeries& a, const IntegerSeries& b, std::size_t N,
                              const ConvolutionOptions& options) {
  if (use_schoolbook(a.coeffs(), b.coeffs(), N, options)) return schoolbook(a.coeffs(), b.coeffs(), N);
  return multimodular(a.coeffs(), b.coeffs(), false, N, options);
}

IntegerSeries series_square(const IntegerSeries& a, std::size_t N, const ConvolutionOptions& options) {
  if (use_schoolbook(a.coeffs(), a.coeffs(), N, options)) return schoolbook(a.coeffs(), a.coeffs(), N);
  return multimodular(a.coeffs(), a.coeffs(), true, N, options);
}

IntegerSeries series_multiply_schoolbook(const IntegerSeries& a, const IntegerSeries& b, std::size_t N) {
  return schoolbook(a.coeffs(), b.coeffs(), N);
}

IntegerSeries series_square_schoolbook(const IntegerSeries& a, std::size_t N) {
  return schoolbook(a.coeffs(), a.coeffs(), N);
}

}  // namespace cuspsum
