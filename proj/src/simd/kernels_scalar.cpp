// Scalar reference kernels. The four-accumulator layout mirrors one 256-bit
// register of doubles so the vector variants can reproduce it exactly.

#include "kernels_internal.hpp"

namespace imbalance::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      acc[lane] += a[i + lane] * b[i + lane];
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = body; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      const double d = a[i + lane] - b[i + lane];
      acc[lane] += d * d;
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = body; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_scalar(const double* s, const double* t, double alpha, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s[i] + alpha * (t[i] - s[i]);
}

}  // namespace imbalance::simd::detail
