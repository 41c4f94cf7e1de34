#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "imbalance/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace imbalance::simd {

namespace {

const KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::squared_distance_scalar,
                          detail::axpy_scalar, detail::lerp_scalar};

#if defined(IMBALANCE_HAVE_AVX2_TU)
const KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::squared_distance_avx2,
                        detail::axpy_avx2, detail::lerp_avx2};
#endif

#if defined(IMBALANCE_HAVE_NEON_TU)
const KernelTable kNeon{Isa::neon, detail::dot_neon, detail::squared_distance_neon,
                        detail::axpy_neon, detail::lerp_neon};
#endif

const KernelTable* initial_table() {
  Isa isa = detect_isa();
  if (const char* env = std::getenv("IMBALANCE_SIMD"); env != nullptr && *env != '\0') {
    try {
      const Isa requested = parse_isa(env);
      if (isa_available(requested)) isa = requested;
    } catch (const std::invalid_argument&) {
      // unknown names keep the detected ISA
    }
  }
  return &kernels_for(isa);
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(IMBALANCE_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(IMBALANCE_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() noexcept {
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD variant not available on this machine: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(IMBALANCE_HAVE_AVX2_TU)
    case Isa::avx2:
      return kAvx2;
#endif
#if defined(IMBALANCE_HAVE_NEON_TU)
    case Isa::neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  throw std::invalid_argument("unknown SIMD variant: " + std::string(name));
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "squared_distance");
  return active().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void lerp(std::span<const double> s, std::span<const double> t, double alpha,
          std::span<double> out) {
  require_same_size(s.size(), t.size(), "lerp");
  require_same_size(s.size(), out.size(), "lerp");
  active().lerp(s.data(), t.data(), alpha, out.data(), s.size());
}

}  // namespace imbalance::simd
