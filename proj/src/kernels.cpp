#include <atomic>

#include "kernels_impl.hpp"

namespace densitylab::kernels {
namespace {

constexpr KernelTable kScalar{
    Isa::Scalar,
    detail::count_nonzero_scalar,
    detail::combine_scalar,
    detail::flip_scalar,
    detail::count_greater_scalar,
    detail::count_above_index_scalar,
    detail::first_below_scalar,
};

#if defined(DENSITYLAB_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Isa::Avx2,
    detail::count_nonzero_avx2,
    detail::combine_avx2,
    detail::flip_avx2,
    detail::count_greater_avx2,
    detail::count_above_index_avx2,
    detail::first_below_avx2,
};
#endif

bool cpu_has_avx2() {
#if defined(DENSITYLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<bool> g_force_scalar{false};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(DENSITYLAB_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  if (g_force_scalar.load(std::memory_order_relaxed)) {
    return kScalar;
  }
  static const KernelTable* best = avx2_table() ? avx2_table() : &kScalar;
  return *best;
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::vector<std::uint64_t> prefix_counts(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint64_t> out(bytes.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    running += bytes[i] != 0;
    out[i] = running;
  }
  return out;
}

}  // namespace densitylab::kernels
