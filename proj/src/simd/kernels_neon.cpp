// NEON kernels for AArch64. Two float64x2 accumulators hold lanes {0,1} and
// {2,3} of the scalar reference's four-lane layout.

#include "kernels_internal.hpp"

#if defined(IMBALANCE_HAVE_NEON_TU)

#include <arm_neon.h>

namespace imbalance::simd::detail {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
               (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t i = body; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const float64x2_t dlo = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t dhi = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    lo = vaddq_f64(lo, vmulq_f64(dlo, dlo));
    hi = vaddq_f64(hi, vmulq_f64(dhi, dhi));
  }
  double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
               (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t i = body; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_neon(const double* s, const double* t, double alpha, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    const float64x2_t vs = vld1q_f64(s + i);
    const float64x2_t diff = vsubq_f64(vld1q_f64(t + i), vs);
    vst1q_f64(out + i, vaddq_f64(vs, vmulq_f64(va, diff)));
  }
  for (std::size_t i = body; i < n; ++i) out[i] = s[i] + alpha * (t[i] - s[i]);
}

}  // namespace imbalance::simd::detail

#endif
