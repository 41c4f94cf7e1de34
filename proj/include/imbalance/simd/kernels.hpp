#pragma once

// Dense double-precision kernels used by every inner loop in the library
// (distances, kernel evaluations, layer products, interpolation).
//
// Each kernel has a portable scalar reference and, where the target supports
// it, an AVX2 (x86-64) or NEON (AArch64) variant. The active variant is picked
// once at startup from CPU detection; IMBALANCE_SIMD=scalar|avx2|neon
// overrides the choice.
//
// Reductions accumulate in four interleaved lanes ((l0 + l1) + (l2 + l3),
// then the tail in order) and no variant uses fused multiply-add, so every
// variant returns bit-identical results. Reports therefore do not depend on
// the machine that produced them.

#include <cstddef>
#include <span>
#include <string_view>

namespace imbalance::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// out = s + alpha * (t - s)
  void (*lerp)(const double* s, const double* t, double alpha, double* out, std::size_t n);
};

/// True when `isa` is compiled in and supported by the running CPU.
bool isa_available(Isa isa) noexcept;

/// Best ISA available on this machine.
Isa detect_isa() noexcept;

/// Kernel table for a specific ISA. Throws std::invalid_argument when unavailable.
const KernelTable& kernels_for(Isa isa);

/// Kernel table currently used by the convenience wrappers below.
const KernelTable& active() noexcept;

/// Switch the active table. Not meant to be called while other threads compute.
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

/// Parses "scalar", "avx2" or "neon". Throws std::invalid_argument otherwise.
Isa parse_isa(std::string_view name);

// Span wrappers over the active table. Lengths must match (checked).
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void lerp(std::span<const double> s, std::span<const double> t, double alpha,
          std::span<double> out);

}  // namespace imbalance::simd
