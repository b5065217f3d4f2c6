// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "kernels_impl.hpp"

namespace densitylab::kernels::detail {
namespace {

inline std::uint64_t horizontal_sum(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

// Unsigned 64-bit a > b per lane via the sign-flip trick.
inline __m256i cmpgt_u64(__m256i a, __m256i b) {
  const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  return _mm256_cmpgt_epi64(_mm256_xor_si256(a, sign), _mm256_xor_si256(b, sign));
}

}  // namespace

std::size_t count_nonzero_avx2(std::span<const std::uint8_t> bytes) {
  const std::size_t n = bytes.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi8(1);
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bytes.data() + i));
    __m256i nz = _mm256_andnot_si256(_mm256_cmpeq_epi8(x, zero), one);
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(nz, zero));
  }
  return horizontal_sum(acc) + count_nonzero_scalar(bytes.subspan(i));
}

void combine_avx2(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, SetOp op) {
  const std::size_t n = std::min(dst.size(), src.size());
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
    __m256i a = _mm256_loadu_si256(d);
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
    __m256i r;
    switch (op) {
      case SetOp::And: r = _mm256_and_si256(a, b); break;
      case SetOp::Or: r = _mm256_or_si256(a, b); break;
      default: r = _mm256_andnot_si256(b, a); break;
    }
    _mm256_storeu_si256(d, r);
  }
  combine_scalar(dst.subspan(i, n - i), src.subspan(i, n - i), op);
}

void flip_avx2(std::span<std::uint8_t> bytes) {
  const __m256i one = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= bytes.size(); i += 32) {
    auto* p = reinterpret_cast<__m256i*>(bytes.data() + i);
    _mm256_storeu_si256(p, _mm256_xor_si256(_mm256_loadu_si256(p), one));
  }
  flip_scalar(bytes.subspan(i));
}

std::size_t count_greater_avx2(std::span<const std::uint64_t> values, std::uint64_t bound) {
  const __m256i b = _mm256_set1_epi64x(static_cast<long long>(bound));
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
    acc = _mm256_sub_epi64(acc, cmpgt_u64(v, b));
  }
  return horizontal_sum(acc) + count_greater_scalar(values.subspan(i), bound);
}

std::size_t count_above_index_avx2(std::span<const std::uint64_t> values,
                                   std::uint64_t first_index) {
  __m256i idx = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(first_index)),
                                 _mm256_setr_epi64x(0, 1, 2, 3));
  const __m256i step = _mm256_set1_epi64x(4);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i));
    acc = _mm256_sub_epi64(acc, cmpgt_u64(v, idx));
    idx = _mm256_add_epi64(idx, step);
  }
  return horizontal_sum(acc) + count_above_index_scalar(values.subspan(i), first_index + i);
}

std::size_t first_below_avx2(std::span<const std::uint64_t> lhs,
                             std::span<const std::uint64_t> rhs) {
  const std::size_t n = std::min(lhs.size(), rhs.size());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lhs.data() + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rhs.data() + i));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(cmpgt_u64(b, a)));
    if (mask != 0) {
      return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(mask)));
    }
  }
  return i + first_below_scalar(lhs.subspan(i, n - i), rhs.subspan(i, n - i));
}

}  // namespace densitylab::kernels::detail
