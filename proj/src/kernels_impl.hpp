#pragma once

#include <algorithm>

#include "densitylab/kernels.hpp"

namespace densitylab::kernels::detail {

std::size_t count_nonzero_scalar(std::span<const std::uint8_t> bytes);
void combine_scalar(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op);
void flip_scalar(std::span<std::uint8_t> bytes);
std::size_t count_greater_scalar(std::span<const std::uint64_t> values, std::uint64_t bound);
std::size_t count_above_index_scalar(std::span<const std::uint64_t> values,
                                     std::uint64_t first_index);
std::size_t first_below_scalar(std::span<const std::uint64_t> lhs,
                               std::span<const std::uint64_t> rhs);

#if defined(DENSITYLAB_HAVE_AVX2)
std::size_t count_nonzero_avx2(std::span<const std::uint8_t> bytes);
void combine_avx2(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op);
void flip_avx2(std::span<std::uint8_t> bytes);
std::size_t count_greater_avx2(std::span<const std::uint64_t> values, std::uint64_t bound);
std::size_t count_above_index_avx2(std::span<const std::uint64_t> values,
                                   std::uint64_t first_index);
std::size_t first_below_avx2(std::span<const std::uint64_t> lhs,
                             std::span<const std::uint64_t> rhs);
#endif

}  // namespace densitylab::kernels::detail
