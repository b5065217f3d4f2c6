#include "kernels_impl.hpp"

namespace densitylab::kernels::detail {

std::size_t count_nonzero_scalar(std::span<const std::uint8_t> bytes) {
  std::size_t n = 0;
  for (auto b : bytes) n += b != 0;
  return n;
}

void combine_scalar(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op) {
  const std::size_t n = std::min(dst.size(), src.size());
  switch (op) {
    case SetOp::And:
      for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
      break;
    case SetOp::Or:
      for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
      break;
    case SetOp::AndNot:
      for (std::size_t i = 0; i < n; ++i) dst[i] &= static_cast<std::uint8_t>(~src[i]);
      break;
  }
}

void flip_scalar(std::span<std::uint8_t> bytes) {
  for (auto& b : bytes) b ^= 1U;
}

std::size_t count_greater_scalar(std::span<const std::uint64_t> values, std::uint64_t bound) {
  std::size_t n = 0;
  for (auto v : values) n += v > bound;
  return n;
}

std::size_t count_above_index_scalar(std::span<const std::uint64_t> values,
                                     std::uint64_t first_index) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) n += values[i] > first_index + i;
  return n;
}

std::size_t first_below_scalar(std::span<const std::uint64_t> lhs,
                               std::span<const std::uint64_t> rhs) {
  const std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (lhs[i] < rhs[i]) return i;
  }
  return n;
}

}  // namespace densitylab::kernels::detail
