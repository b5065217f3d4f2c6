#pragma once

// Data-parallel inner loops over indicator bytes and 64-bit value tables.
// Every kernel has a scalar reference; an AVX2 variant is chosen at runtime
// when the CPU supports it. Both must agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace densitylab::kernels {

enum class Isa { Scalar, Avx2 };

enum class SetOp { And, Or, AndNot };

struct KernelTable {
  Isa isa;
  // Number of nonzero bytes; indicator arrays hold 0 or 1.
  std::size_t (*count_nonzero)(std::span<const std::uint8_t> bytes);
  // dst[i] = dst[i] op src[i] for 0/1 bytes.
  void (*combine)(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op);
  // bytes[i] ^= 1.
  void (*flip)(std::span<std::uint8_t> bytes);
  // |{i : values[i] > bound}|.
  std::size_t (*count_greater)(std::span<const std::uint64_t> values, std::uint64_t bound);
  // |{i : values[i] > first_index + i}|, i.e. entries above their own position.
  std::size_t (*count_above_index)(std::span<const std::uint64_t> values,
                                   std::uint64_t first_index);
  // First i with lhs[i] < rhs[i], or size() when lhs dominates rhs everywhere.
  std::size_t (*first_below)(std::span<const std::uint64_t> lhs,
                             std::span<const std::uint64_t> rhs);
};

const KernelTable& scalar_table();

/// nullptr when the binary or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// The table used by the free functions below; AVX2 if available.
const KernelTable& active();

/// Forces the scalar path (or restores auto-selection). Intended for tests and
/// benchmarks; not synchronized with concurrent kernel calls.
void force_scalar(bool on);

const char* isa_name(Isa isa);

inline std::size_t count_nonzero(std::span<const std::uint8_t> bytes) {
  return active().count_nonzero(bytes);
}
inline void combine(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op) {
  active().combine(dst, src, op);
}
inline void flip(std::span<std::uint8_t> bytes) { active().flip(bytes); }
inline std::size_t count_greater(std::span<const std::uint64_t> values, std::uint64_t bound) {
  return active().count_greater(values, bound);
}
inline std::size_t count_above_index(std::span<const std::uint64_t> values,
                                     std::uint64_t first_index) {
  return active().count_above_index(values, first_index);
}
inline std::size_t first_below(std::span<const std::uint64_t> lhs,
                               std::span<const std::uint64_t> rhs) {
  return active().first_below(lhs, rhs);
}

/// Inclusive running sums of a 0/1 indicator: out[i] = bytes[0] + ... + bytes[i].
std::vector<std::uint64_t> prefix_counts(std::span<const std::uint8_t> bytes);

}  // namespace densitylab::kernels
