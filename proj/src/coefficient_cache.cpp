#include "cuspsum/coefficient_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cuspsum/errors.hpp"

namespace cuspsum::cache {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'C', 'S', 'P', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8;

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <class T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t pos) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[pos + i]) << (8 * i);
  return value;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open cache file " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

void append_varint(std::vector<std::uint8_t>& out, const BigInt& value) {
  BigInt zz = abs(value);
  zz *= 2;
  if (sgn(value) < 0) zz -= 1;
  if (zz == 0) {
    out.push_back(0);
    return;
  }
  // Export little-endian bytes, then regroup the bit stream into 7-bit groups.
  std::size_t count = 0;
  std::vector<std::uint8_t> raw((mpz_sizeinbase(zz.get_mpz_t(), 2) + 7) / 8);
  mpz_export(raw.data(), &count, -1, 1, 0, 0, zz.get_mpz_t());
  raw.resize(count);
  const std::size_t bits = mpz_sizeinbase(zz.get_mpz_t(), 2);
  const std::size_t groups = (bits + 6) / 7;
  for (std::size_t g = 0; g < groups; ++g) {
    std::uint32_t chunk = 0;
    const std::size_t bit = 7 * g;
    for (std::size_t b = 0; b < 2 && bit / 8 + b < raw.size(); ++b) chunk |= static_cast<std::uint32_t>(raw[bit / 8 + b]) << (8 * b);
    std::uint8_t group = static_cast<std::uint8_t>((chunk >> (bit % 8)) & 0x7f);
    if (g + 1 < groups) group |= 0x80;
    out.push_back(group);
  }
}

BigInt read_varint(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  std::vector<std::uint8_t> raw;
  std::uint32_t acc = 0;
  unsigned acc_bits = 0;
  for (;;) {
    if (pos >= bytes.size()) throw CacheError("truncated varint in cache payload");
    const std::uint8_t byte = bytes[pos++];
    acc |= static_cast<std::uint32_t>(byte & 0x7f) << acc_bits;
    acc_bits += 7;
    while (acc_bits >= 8) {
      raw.push_back(static_cast<std::uint8_t>(acc & 0xff));
      acc >>= 8;
      acc_bits -= 8;
    }
    if ((byte & 0x80) == 0) break;
  }
  if (acc_bits > 0) raw.push_back(static_cast<std::uint8_t>(acc));
  BigInt zz;
  mpz_import(zz.get_mpz_t(), raw.size(), -1, 1, 0, 0, raw.data());
  // Undo zig-zag: even -> x / 2, odd -> -(x + 1) / 2.
  const bool negative = mpz_odd_p(zz.get_mpz_t());
  if (negative) zz += 1;
  mpz_fdiv_q_2exp(zz.get_mpz_t(), zz.get_mpz_t(), 1);
  if (negative) zz = -zz;
  return zz;
}

std::vector<std::uint8_t> encode(const forms::EigenformTable& table) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.weight()));
  put_le<std::uint64_t>(out, table.max_index());
  for (std::size_t n = 1; n <= table.max_index(); ++n) append_varint(out, table[n]);
  put_le<std::uint64_t>(out, fnv1a64(out));
  return out;
}

forms::EigenformTable decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize + 8) throw CacheError("cache file too short");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw CacheError("cache file has wrong magic bytes");
  const std::size_t body = bytes.size() - 8;
  if (fnv1a64(bytes.first(body)) != get_le<std::uint64_t>(bytes, body)) {
    throw CacheError("cache file checksum mismatch");
  }
  const auto weight = get_le<std::uint32_t>(bytes, 4);
  const auto N = get_le<std::uint64_t>(bytes, 8);
  // Every varint takes at least one byte.
  if (N > body - kHeaderSize) throw CacheError("cache header claims more coefficients than the payload holds");
  std::vector<BigInt> a(N + 1);
  std::size_t pos = kHeaderSize;
  const auto payload = bytes.first(body);
  for (std::uint64_t n = 1; n <= N; ++n) a[n] = read_varint(payload, pos);
  if (pos != body) throw CacheError("trailing bytes after the last coefficient");
  try {
    return forms::EigenformTable(static_cast<int>(weight), std::move(a));
  } catch (const DomainError& e) {
    throw CacheError(std::string("cache holds an invalid table: ") + e.what());
  }
}

void write_table(const std::filesystem::path& path, const forms::EigenformTable& table) {
  const auto bytes = encode(table);
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CacheError("short write to cache file " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError("cannot move cache file into place: " + ec.message());
}

forms::EigenformTable read_table(const std::filesystem::path& path) { return decode(read_file(path)); }

bool is_valid_cache(const std::filesystem::path& path, int weight, std::uint64_t N) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return false;
  try {
    const auto bytes = read_file(path);
    if (bytes.size() < kHeaderSize + 8) return false;
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) return false;
    const std::span<const std::uint8_t> view(bytes);
    const std::size_t body = bytes.size() - 8;
    if (fnv1a64(view.first(body)) != get_le<std::uint64_t>(view, body)) return false;
    return get_le<std::uint32_t>(view, 4) == static_cast<std::uint32_t>(weight) && get_le<std::uint64_t>(view, 8) == N;
  } catch (const CacheError&) {
    return false;
  }
}

}  // namespace cuspsum::cache
