#pragma once

#include <cstddef>

// Per-ISA entry points. Only the translation units compiled for a given ISA
// define its functions; dispatch.cpp references them behind the matching
// preprocessor guard.

namespace imbalance::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double squared_distance_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void lerp_scalar(const double* s, const double* t, double alpha, double* out, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define IMBALANCE_HAVE_AVX2_TU 1
double dot_avx2(const double* a, const double* b, std::size_t n);
double squared_distance_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void lerp_avx2(const double* s, const double* t, double alpha, double* out, std::size_t n);
#endif

#if defined(__aarch64__)
#define IMBALANCE_HAVE_NEON_TU 1
double dot_neon(const double* a, const double* b, std::size_t n);
double squared_distance_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void lerp_neon(const double* s, const double* t, double alpha, double* out, std::size_t n);
#endif

}  // namespace imbalance::simd::detail
