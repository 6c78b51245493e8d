#pragma once

// Number-theoretic transforms over word-size primes of the form c * 2^23 + 1.
//
// The prime list is computed at compile time: every p = c * 2^23 + 1 with
// 2^31 < p < 2^32, largest first, together with a primitive root. All
// arithmetic is Montgomery with R = 2^32, so a product of two residues fits a
// 64-bit word without any 128-bit help.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cuspsum::ntt {

struct Prime {
  std::uint32_t modulus = 0;
  std::uint32_t generator = 0;
};

inline constexpr unsigned kMaxLog2 = 23;
inline constexpr std::size_t kMaxLength = std::size_t{1} << kMaxLog2;

namespace detail {

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp != 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

// Deterministic for n < 4,759,123,141 with bases {2, 7, 61}.
constexpr bool is_prime_u32(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ull, 3ull, 5ull, 7ull, 61ull}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 7ull, 61ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < r; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

constexpr std::uint32_t primitive_root(std::uint64_t p) {
  std::array<std::uint64_t, 16> factors{};
  std::size_t count = 0;
  std::uint64_t m = p - 1;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      factors[count++] = q;
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) factors[count++] = m;
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::size_t i = 0; i < count && ok; ++i) ok = pow_mod(g, (p - 1) / factors[i], p) != 1;
    if (ok) return static_cast<std::uint32_t>(g);
  }
  return 0;
}

template <std::size_t Count>
constexpr std::array<Prime, Count> find_primes() {
  std::array<Prime, Count> primes{};
  std::size_t found = 0;
  for (std::uint64_t c = (std::uint64_t{1} << (32 - kMaxLog2)) - 1; c >= (std::uint64_t{1} << (31 - kMaxLog2)) && found < Count; --c) {
    const std::uint64_t p = (c << kMaxLog2) + 1;
    if (is_prime_u32(p)) primes[found++] = Prime{static_cast<std::uint32_t>(p), primitive_root(p)};
  }
  return primes;
}

}  // namespace detail

inline constexpr std::size_t kPrimeCount = 25;
inline constexpr std::array<Prime, kPrimeCount> kPrimes = detail::find_primes<kPrimeCount>();

static_assert(kPrimes.back().modulus > (std::uint64_t{1} << 31), "prime list must stay above 2^31");

// Linear convolution of a and b modulo p, truncated to out_len coefficients.
// Inputs are residues in [0, p). Requires a transform length of at most
// kMaxLength.
std::vector<std::uint32_t> convolve(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                    const Prime& p, std::size_t out_len);

// Same as convolve(a, a, p, out_len) with one forward transform.
std::vector<std::uint32_t> square(std::span<const std::uint32_t> a, const Prime& p, std::size_t out_len);

}  // namespace cuspsum::ntt
