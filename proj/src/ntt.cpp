#include "cuspsum/ntt.hpp"

#include <algorithm>
#include <bit>

#include "cuspsum/errors.hpp"

namespace cuspsum::ntt {
namespace {

class Montgomery {
 public:
  explicit Montgomery(std::uint32_t p) : p_(p) {
    std::uint32_t inv = p;
    for (int i = 0; i < 5; ++i) inv *= 2u - p * inv;
    inv_ = inv;
    const std::uint64_t r1 = (std::uint64_t{1} << 32) % p;
    r2_ = static_cast<std::uint32_t>(r1 * r1 % p);
  }

  std::uint32_t modulus() const { return p_; }

  // t * 2^-32 mod p for t < p * 2^32. Low words of t and m*p agree, so the
  // difference of the high words is exact and lies in (-p, p).
  std::uint32_t reduce(std::uint64_t t) const {
    const std::uint32_t m = static_cast<std::uint32_t>(t) * inv_;
    const std::uint32_t hi_t = static_cast<std::uint32_t>(t >> 32);
    const std::uint32_t hi_mp = static_cast<std::uint32_t>((static_cast<std::uint64_t>(m) * p_) >> 32);
    return hi_t >= hi_mp ? hi_t - hi_mp : hi_t + (p_ - hi_mp);
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return reduce(static_cast<std::uint64_t>(a) * b); }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) + p_ - b);
  }

  std::uint32_t to_mont(std::uint32_t a) const { return mul(a, r2_); }
  std::uint32_t from_mont(std::uint32_t a) const { return reduce(a); }

  std::uint32_t pow(std::uint32_t base_mont, std::uint64_t exp) const {
    std::uint32_t result = to_mont(1);
    while (exp != 0) {
      if (exp & 1) result = mul(result, base_mont);
      base_mont = mul(base_mont, base_mont);
      exp >>= 1;
    }
    return result;
  }

 private:
  std::uint32_t p_;
  std::uint32_t inv_;
  std::uint32_t r2_;
};

// roots[m + j] = w_{2m}^j for m = 1, 2, 4, ..., n/2 and j < m.
std::vector<std::uint32_t> root_table(const Montgomery& mont, std::uint32_t generator_mont, std::size_t n,
                                      bool inverse) {
  std::vector<std::uint32_t> roots(std::max<std::size_t>(n, 2));
  const std::uint64_t order_exp = (mont.modulus() - 1) / n;
  std::uint32_t wn = mont.pow(generator_mont, order_exp);
  if (inverse) wn = mont.pow(wn, n - 1);
  for (std::size_t m = n / 2; m >= 1; m >>= 1) {
    // w_{2m} = wn^(n / 2m)
    const std::uint32_t w = mont.pow(wn, n / (2 * m));
    std::uint32_t cur = mont.to_mont(1);
    for (std::size_t j = 0; j < m; ++j) {
      roots[m + j] = cur;
      cur = mont.mul(cur, w);
    }
    if (m == 1) break;
  }
  return roots;
}

// Gentleman-Sande: natural order in, bit-reversed order out.
void forward(std::vector<std::uint32_t>& a, const Montgomery& mont, const std::vector<std::uint32_t>& roots) {
  const std::size_t n = a.size();
  for (std::size_t m = n / 2; m >= 1; m >>= 1) {
    for (std::size_t i = 0; i < n; i += 2 * m) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + m;
      const std::uint32_t* w = roots.data() + m;
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint32_t u = lo[j];
        const std::uint32_t v = hi[j];
        lo[j] = mont.add(u, v);
        hi[j] = mont.mul(mont.sub(u, v), w[j]);
      }
    }
    if (m == 1) break;
  }
}

// Cooley-Tukey: bit-reversed order in, natural order out (unscaled).
void inverse(std::vector<std::uint32_t>& a, const Montgomery& mont, const std::vector<std::uint32_t>& roots) {
  const std::size_t n = a.size();
  for (std::size_t m = 1; m < n; m <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * m) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + m;
      const std::uint32_t* w = roots.data() + m;
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint32_t u = lo[j];
        const std::uint32_t v = mont.mul(hi[j], w[j]);
        lo[j] = mont.add(u, v);
        hi[j] = mont.sub(u, v);
      }
    }
  }
}

// Inputs are already truncated to out_len, so a wrap-free cyclic length
// covers the whole product.
std::size_t transform_length(std::size_t len_a, std::size_t len_b) {
  const std::size_t n = std::bit_ceil(len_a + len_b - 1);
  if (n > kMaxLength) throw DomainError("convolution longer than the largest supported transform");
  return n;
}

std::vector<std::uint32_t> load(std::span<const std::uint32_t> src, std::size_t n, const Montgomery& mont) {
  std::vector<std::uint32_t> out(n, 0);
  const std::size_t count = std::min(src.size(), n);
  for (std::size_t i = 0; i < count; ++i) out[i] = mont.to_mont(src[i]);
  return out;
}

std::vector<std::uint32_t> finish(std::vector<std::uint32_t>& fa, const Montgomery& mont, std::uint32_t generator_mont,
                                  std::size_t out_len, std::size_t true_len) {
  const std::size_t n = fa.size();
  inverse(fa, mont, root_table(mont, generator_mont, n, /*inverse=*/true));
  const std::uint32_t n_inv = mont.pow(mont.to_mont(static_cast<std::uint32_t>(n % mont.modulus())), mont.modulus() - 2);
  std::vector<std::uint32_t> out(out_len, 0);
  const std::size_t count = std::min({out_len, true_len, n});
  for (std::size_t i = 0; i < count; ++i) out[i] = mont.from_mont(mont.mul(fa[i], n_inv));
  return out;
}

}  // namespace

std::vector<std::uint32_t> convolve(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                    const Prime& p, std::size_t out_len) {
  if (a.empty() || b.empty() || out_len == 0) return std::vector<std::uint32_t>(out_len, 0);
  a = a.first(std::min(a.size(), out_len));
  b = b.first(std::min(b.size(), out_len));
  const Montgomery mont(p.modulus);
  const std::size_t true_len = a.size() + b.size() - 1;
  const std::size_t n = transform_length(a.size(), b.size());
  const std::uint32_t g = mont.to_mont(p.generator);
  const auto roots = root_table(mont, g, n, false);
  auto fa = load(a, n, mont);
  auto fb = load(b, n, mont);
  forward(fa, mont, roots);
  forward(fb, mont, roots);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mont.mul(fa[i], fb[i]);
  return finish(fa, mont, g, out_len, true_len);
}

std::vector<std::uint32_t> square(std::span<const std::uint32_t> a, const Prime& p, std::size_t out_len) {
  if (a.empty() || out_len == 0) return std::vector<std::uint32_t>(out_len, 0);
  a = a.first(std::min(a.size(), out_len));
  const Montgomery mont(p.modulus);
  const std::size_t true_len = 2 * a.size() - 1;
  const std::size_t n = transform_length(a.size(), a.size());
  const std::uint32_t g = mont.to_mont(p.generator);
  auto fa = load(a, n, mont);
  forward(fa, mont, root_table(mont, g, n, false));
  for (std::size_t i = 0; i < n; ++i) fa[i] = mont.mul(fa[i], fa[i]);
  return finish(fa, mont, g, out_len, true_len);
}

}  // namespace cuspsum::ntt
