// AVX2 kernels. This translation unit is compiled with -mavx2 (and without
// FMA); it must only be entered after a runtime CPU check.

#include "kernels_internal.hpp"

#if defined(IMBALANCE_HAVE_AVX2_TU)

#include <immintrin.h>

namespace imbalance::simd::detail {

namespace {

inline double reduce_lanes(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double sum = reduce_lanes(acc);
  for (std::size_t i = body; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double sum = reduce_lanes(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d vy = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (std::size_t i = body; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_avx2(const double* s, const double* t, double alpha, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d vs = _mm256_loadu_pd(s + i);
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(t + i), vs);
    _mm256_storeu_pd(out + i, _mm256_add_pd(vs, _mm256_mul_pd(va, diff)));
  }
  for (std::size_t i = body; i < n; ++i) out[i] = s[i] + alpha * (t[i] - s[i]);
}

}  // namespace imbalance::simd::detail

#endif
