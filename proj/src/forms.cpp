#include "cuspsum/forms.hpp"

#include <algorithm>
#include <numeric>

#include "cuspsum/errors.hpp"
#include "cuspsum/parallel.hpp"

namespace cuspsum::forms {
namespace {

std::vector<std::uint32_t> smallest_prime_factors(std::size_t N) {
  std::vector<std::uint32_t> spf(N + 1, 0);
  for (std::size_t i = 2; i <= N; ++i) {
    if (spf[i] != 0) continue;
    for (std::size_t j = i; j <= N; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

BigInt power(std::size_t base, unsigned exp) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

std::vector<BigInt> delta_series_coefficients(std::size_t N) {
  // q * P^24 where P = prod (1 - q^n): a[n] = [q^(n-1)] P^24.
  const std::size_t degree = N - 1;
  IntegerSeries p = eta_cubed_sparse(degree);
  for (int step = 0; step < 3; ++step) p = series_square(p, degree);
  std::vector<BigInt> a(N + 1);
  for (std::size_t n = 1; n <= N; ++n) a[n] = p[n - 1];
  return a;
}

}  // namespace

bool is_supported_weight(int weight) {
  return std::find(std::begin(kSupportedWeights), std::end(kSupportedWeights), weight) != std::end(kSupportedWeights);
}

EigenformTable::EigenformTable(int weight, std::vector<BigInt> coeffs) : weight_(weight), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_[0] != 0) throw DomainError("eigenform table must have a(0) = 0");
  if (coeffs_.size() > 1 && coeffs_[1] != 1) throw DomainError("eigenform table must be normalized to a(1) = 1");
}

IntegerSeries eta_cubed_sparse(std::size_t N) {
  std::vector<BigInt> c(N + 1);
  for (std::size_t m = 0;; ++m) {
    const std::size_t index = m * (m + 1) / 2;
    if (index > N) break;
    const long value = static_cast<long>(2 * m + 1);
    c[index] = (m % 2 == 0) ? value : -value;
  }
  return IntegerSeries(std::move(c));
}

std::vector<BigInt> divisor_power_sums(unsigned power_exp, std::size_t N) {
  std::vector<BigInt> sigma(N + 1);
  if (N == 0) return sigma;
  sigma[1] = 1;
  const auto spf = smallest_prime_factors(N);
  // prime_part[n] = largest power of spf(n) dividing n.
  std::vector<std::uint32_t> prime_part(N + 1, 1);
  for (std::size_t n = 2; n <= N; ++n) {
    const std::size_t p = spf[n];
    const std::size_t rest = n / p;
    prime_part[n] = static_cast<std::uint32_t>(rest % p == 0 ? prime_part[rest] * p : p);
    const std::size_t cofactor = n / prime_part[n];
    if (cofactor == 1) {
      // sigma(p^e) = p^power * sigma(p^(e-1)) + 1
      if (rest == 1) {
        sigma[n] = power(p, power_exp) + 1;
      } else {
        sigma[n] = (sigma[p] - 1) * sigma[rest] + 1;
      }
    } else {
      sigma[n] = sigma[prime_part[n]] * sigma[cofactor];
    }
  }
  return sigma;
}

IntegerSeries eisenstein(int weight, std::size_t N) {
  long scale = 0;
  unsigned power_exp = 0;
  if (weight == 4) {
    scale = 240;
    power_exp = 3;
  } else if (weight == 6) {
    scale = -504;
    power_exp = 5;
  } else {
    throw UnsupportedWeight("eisenstein series available for weights 4 and 6 only, got " + std::to_string(weight));
  }
  std::vector<BigInt> c = divisor_power_sums(power_exp, N);
  c[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) c[n] *= scale;
  return IntegerSeries(std::move(c));
}

EigenformTable generate_delta(std::size_t N) {
  if (N < 1) throw DomainError("generate_delta needs N >= 1");
  return EigenformTable(12, delta_series_coefficients(N));
}

EigenformTable delta_via_eisenstein(std::size_t N) {
  if (N < 1) throw DomainError("delta_via_eisenstein needs N >= 1");
  const IntegerSeries e4 = eisenstein(4, N);
  const IntegerSeries e6 = eisenstein(6, N);
  const IntegerSeries e4_cubed = series_multiply(series_square(e4, N), e4, N);
  const IntegerSeries e6_squared = series_square(e6, N);
  std::vector<BigInt> a(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt diff = e4_cubed[n] - e6_squared[n];
    if (!mpz_divisible_ui_p(diff.get_mpz_t(), 1728)) {
      throw ArithmeticError("E4^3 - E6^2 not divisible by 1728 at index " + std::to_string(n));
    }
    mpz_divexact_ui(a[n].get_mpz_t(), diff.get_mpz_t(), 1728);
  }
  return EigenformTable(12, std::move(a));
}

std::vector<BigInt> delta_via_eisenstein_at(std::span<const std::size_t> indices) {
  std::vector<BigInt> out(indices.size());
  if (indices.empty()) return out;
  const std::size_t M = *std::max_element(indices.begin(), indices.end());
  std::vector<BigInt> e4 = divisor_power_sums(3, M);
  std::vector<BigInt> e6 = divisor_power_sums(5, M);
  std::vector<BigInt> e8 = divisor_power_sums(7, M);
  for (std::size_t n = 1; n <= M; ++n) {
    e4[n] *= 240;
    e6[n] *= -504;
    e8[n] *= 480;
  }
  e4[0] = e6[0] = e8[0] = 1;

  parallel_for(indices.size(), [&](std::size_t lo, std::size_t hi) {
    BigInt acc;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::size_t n = indices[k];
      if (n == 0) {
        out[k] = 0;
        continue;
      }
      acc = 0;
      for (std::size_t i = 0; i <= n; ++i) mpz_addmul(acc.get_mpz_t(), e8[i].get_mpz_t(), e4[n - i].get_mpz_t());
      // E6^2 is symmetric in i <-> n - i.
      for (std::size_t i = 0; 2 * i < n; ++i) {
        mpz_submul(acc.get_mpz_t(), e6[i].get_mpz_t(), e6[n - i].get_mpz_t());
        mpz_submul(acc.get_mpz_t(), e6[i].get_mpz_t(), e6[n - i].get_mpz_t());
      }
      if (n % 2 == 0) mpz_submul(acc.get_mpz_t(), e6[n / 2].get_mpz_t(), e6[n / 2].get_mpz_t());
      if (!mpz_divisible_ui_p(acc.get_mpz_t(), 1728)) {
        throw ArithmeticError("E8 E4 - E6^2 not divisible by 1728 at index " + std::to_string(n));
      }
      mpz_divexact_ui(out[k].get_mpz_t(), acc.get_mpz_t(), 1728);
    }
  });
  return out;
}

EigenformTable eigenform(int weight, std::size_t N) {
  if (!is_supported_weight(weight)) {
    throw UnsupportedWeight("weight " + std::to_string(weight) + " has no one-dimensional cusp space");
  }
  if (N < 1) throw DomainError("eigenform needs N >= 1");
  if (weight == 12) return generate_delta(N);
  int e4_power = 0;
  int e6_power = 0;
  switch (weight) {
    case 16: e4_power = 1; break;
    case 18: e6_power = 1; break;
    case 20: e4_power = 2; break;
    case 22: e4_power = 1; e6_power = 1; break;
    case 26: e4_power = 2; e6_power = 1; break;
  }
  IntegerSeries f(delta_series_coefficients(N));
  if (e4_power > 0) {
    const IntegerSeries e4 = eisenstein(4, N);
    for (int i = 0; i < e4_power; ++i) f = series_multiply(f, e4, N);
  }
  if (e6_power > 0) f = series_multiply(f, eisenstein(6, N), N);
  std::vector<BigInt> a = std::move(f).release();
  // Delta starts at q and both Eisenstein series at 1, so a(1) is already 1.
  if (a[1] != 1) throw ArithmeticError("eigenform product lost its normalization");
  return EigenformTable(weight, std::move(a));
}

std::string to_string(HeckeFailure::Kind kind) {
  switch (kind) {
    case HeckeFailure::Kind::multiplicativity: return "multiplicativity";
    case HeckeFailure::Kind::prime_power: return "prime_power";
    case HeckeFailure::Kind::deligne: return "deligne";
  }
  return "unknown";
}

HeckeReport hecke_report(const EigenformTable& table, std::size_t bound) {
  if (bound > table.max_index()) throw RangeError("hecke bound exceeds the table length");
  HeckeReport report;
  report.bound = bound;
  auto note = [&](HeckeFailure::Kind kind, std::size_t m, std::size_t n) {
    if (!report.first_failure) report.first_failure = HeckeFailure{kind, m, n};
  };

  BigInt product;
  for (std::size_t m = 2; m * (m + 1) <= bound; ++m) {
    for (std::size_t n = m + 1; m * n <= bound; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ++report.multiplicativity_checked;
      product = table[m] * table[n];
      if (product != table[m * n]) {
        ++report.multiplicativity_failures;
        note(HeckeFailure::Kind::multiplicativity, m, n);
      }
    }
  }

  const int k = table.weight();
  const auto spf = smallest_prime_factors(bound);
  BigInt expected;
  for (std::size_t p = 2; p <= bound; ++p) {
    if (spf[p] != p) continue;
    const BigInt p_km1 = power(p, static_cast<unsigned>(k - 1));

    ++report.deligne_checked;
    if (table[p] * table[p] > 4 * p_km1) {
      ++report.deligne_failures;
      note(HeckeFailure::Kind::deligne, p, 1);
    }

    // a(p^(r+1)) = a(p) a(p^r) - p^(k-1) a(p^(r-1))
    std::size_t prev = 1;  // p^(r-1)
    std::size_t cur = p;   // p^r
    for (std::size_t r = 1; cur <= bound / p; ++r) {
      const std::size_t next = cur * p;
      ++report.prime_power_checked;
      expected = table[p] * table[cur] - p_km1 * table[prev];
      if (expected != table[next]) {
        ++report.prime_power_failures;
        note(HeckeFailure::Kind::prime_power, p, r + 1);
      }
      prev = cur;
      cur = next;
    }
  }
  return report;
}

}  // namespace cuspsum::forms
