#pragma once

// Persistent eigenform tables.
//
// Layout (all integers little-endian):
//   "CSP1" | u32 weight | u64 N | N signed varints a(1..N) | u64 FNV-1a
// Each varint is the zig-zag image of a(n) (x >= 0 -> 2x, x < 0 -> -2x - 1)
// written 7 bits at a time, least significant group first, high bit set on
// every byte but the last. The checksum covers every byte before it.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cuspsum/forms.hpp"

namespace cuspsum::cache {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

void append_varint(std::vector<std::uint8_t>& out, const BigInt& value);
// Reads one varint starting at pos and advances pos. Throws CacheError on truncation.
BigInt read_varint(std::span<const std::uint8_t> bytes, std::size_t& pos);

std::vector<std::uint8_t> encode(const forms::EigenformTable& table);
forms::EigenformTable decode(std::span<const std::uint8_t> bytes);

void write_table(const std::filesystem::path& path, const forms::EigenformTable& table);
forms::EigenformTable read_table(const std::filesystem::path& path);

// True when path holds a checksum-valid cache for exactly (weight, N).
bool is_valid_cache(const std::filesystem::path& path, int weight, std::uint64_t N);

}  // namespace cuspsum::cache
