#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "imbalance/rng.hpp"
#include "imbalance/simd/kernels.hpp"

using namespace imbalance;

namespace {

std::vector<simd::Isa> available_isas() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
    if (simd::isa_available(isa)) out.push_back(isa);
  }
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Four interleaved partial sums, combined as (l0 + l1) + (l2 + l3), tail added in order.
template <typename Term>
double lane_sum(std::size_t n, Term term) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) lane[l] += term(i + l);
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += term(i);
  return total;
}

struct Buffers {
  std::vector<double> a, b;
};

// Storage with extra slack so offsets 0..3 give misaligned starting addresses.
Buffers random_buffers(Rng& rng, std::size_t n) {
  Buffers buf{std::vector<double>(n + 4), std::vector<double>(n + 4)};
  for (auto& v : buf.a) v = rng.uniform(-10.0, 10.0);
  for (auto& v : buf.b) v = rng.uniform(-10.0, 10.0);
  return buf;
}

}  // namespace

TEST_CASE("scalar table always exists and detection returns an available isa") {
  CHECK(simd::isa_available(simd::Isa::scalar));
  CHECK(simd::isa_available(simd::detect_isa()));
  CHECK(simd::kernels_for(simd::Isa::scalar).isa == simd::Isa::scalar);
}

TEST_CASE("isa names round trip") {
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
    CHECK(simd::parse_isa(simd::isa_name(isa)) == isa);
  }
  CHECK_THROWS_AS(simd::parse_isa("sse9"), std::invalid_argument);
}

TEST_CASE("unavailable isa is rejected") {
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::isa_available(isa)) {
      CHECK_THROWS_AS(simd::kernels_for(isa), std::invalid_argument);
      CHECK_THROWS_AS(simd::set_active_isa(isa), std::invalid_argument);
    }
  }
}

TEST_CASE("every kernel matches the lane-order reference bit for bit") {
  Rng rng(11);
  for (auto isa : available_isas()) {
    const auto& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (std::size_t n = 0; n <= 67; ++n) {
      for (std::size_t off = 0; off < 4; ++off) {
        CAPTURE(n);
        CAPTURE(off);
        auto buf = random_buffers(rng, n);
        const double* a = buf.a.data() + off;
        const double* b = buf.b.data() + off;

        const double dot_ref = lane_sum(n, [&](std::size_t i) { return a[i] * b[i]; });
        const double sq_ref = lane_sum(n, [&](std::size_t i) {
          const double d = a[i] - b[i];
          return d * d;
        });
        CHECK(same_bits(k.dot(a, b, n), dot_ref));
        CHECK(same_bits(k.squared_distance(a, b, n), sq_ref));

        const double alpha = rng.uniform(-2.0, 2.0);
        std::vector<double> y(buf.b.begin(), buf.b.end());
        k.axpy(alpha, a, y.data() + off, n);
        bool axpy_ok = true;
        for (std::size_t i = 0; i < n; ++i) axpy_ok &= same_bits(y[off + i], b[i] + alpha * a[i]);
        CHECK(axpy_ok);

        const double t = rng.uniform_closed01();
        std::vector<double> out(n + 4, 0.0);
        k.lerp(a, b, t, out.data() + off, n);
        bool lerp_ok = true;
        for (std::size_t i = 0; i < n; ++i) lerp_ok &= same_bits(out[off + i], a[i] + t * (b[i] - a[i]));
        CHECK(lerp_ok);
      }
    }
  }
}

TEST_CASE("vector variants agree with scalar on long inputs") {
  Rng rng(12);
  const auto& scalar = simd::kernels_for(simd::Isa::scalar);
  for (auto isa : available_isas()) {
    const auto& k = simd::kernels_for(isa);
    for (std::size_t n : {255u, 256u, 1000u, 4099u}) {
      auto buf = random_buffers(rng, n);
      CHECK(same_bits(k.dot(buf.a.data() + 1, buf.b.data() + 3, n), scalar.dot(buf.a.data() + 1, buf.b.data() + 3, n)));
      CHECK(same_bits(k.squared_distance(buf.a.data(), buf.b.data() + 2, n),
                      scalar.squared_distance(buf.a.data(), buf.b.data() + 2, n)));
    }
  }
}

TEST_CASE("reductions are accurate against an extended-precision sum") {
  Rng rng(13);
  for (std::size_t n : {1u, 7u, 64u, 513u}) {
    auto buf = random_buffers(rng, n);
    long double dot = 0.0L, sq = 0.0L, abs_dot = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(buf.a[i]) * buf.b[i];
      abs_dot += std::fabs(static_cast<long double>(buf.a[i]) * buf.b[i]);
      const long double d = static_cast<long double>(buf.a[i]) - buf.b[i];
      sq += d * d;
    }
    const auto a = std::span<const double>(buf.a.data(), n);
    const auto b = std::span<const double>(buf.b.data(), n);
    CHECK(std::fabs(simd::dot(a, b) - static_cast<double>(dot)) <= 1e-13 * static_cast<double>(abs_dot));
    CHECK(std::fabs(simd::squared_distance(a, b) - static_cast<double>(sq)) <= 1e-13 * static_cast<double>(sq));
  }
}

TEST_CASE("span wrappers check lengths") {
  std::vector<double> a(3), b(4);
  CHECK_THROWS(simd::dot(a, b));
  CHECK_THROWS(simd::squared_distance(a, b));
  CHECK_THROWS(simd::axpy(1.0, a, b));
  std::vector<double> out(2);
  CHECK_THROWS(simd::lerp(a, a, 0.5, out));
}

TEST_CASE("switching the active table changes dispatch but not results") {
  const auto original = simd::active().isa;
  std::vector<double> a = {1.5, -2.25, 3.0, 0.125, 7.0};
  std::vector<double> b = {0.5, 4.0, -1.0, 2.0, -3.5};
  std::vector<double> results;
  for (auto isa : available_isas()) {
    simd::set_active_isa(isa);
    CHECK(simd::active().isa == isa);
    results.push_back(simd::dot(a, b));
  }
  simd::set_active_isa(original);
  for (double r : results) CHECK(same_bits(r, results.front()));
}

TEST_CASE("lerp endpoints are exact") {
  std::vector<double> s = {1.0, -2.0, 0.3}, t = {4.0, 5.0, -0.7}, out(3);
  simd::lerp(s, t, 0.0, out);
  CHECK(out == s);
  simd::lerp(s, t, 1.0, out);
  // s + 1 * (t - s) may differ from t by one rounding step.
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(t[i]).epsilon(1e-15));
}
