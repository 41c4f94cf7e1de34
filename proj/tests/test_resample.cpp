#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "imbalance/error.hpp"
#include "imbalance/resample.hpp"
#include "support.hpp"

using namespace imbalance;
using namespace imbalance::resample;

namespace {

corpus::ClassDistribution distribution(std::vector<std::string> labels, std::vector<std::size_t> counts) {
  corpus::ClassDistribution d;
  d.labels = std::move(labels);
  d.counts = std::move(counts);
  d.total = std::accumulate(d.counts.begin(), d.counts.end(), std::size_t{0});
  return d;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

// Rows of `candidates` sorted by (distance to row `i`, index), `i` excluded, first k.
std::vector<std::size_t> nearest(const FeatureMatrix& fm, std::size_t i, const std::vector<std::size_t>& candidates,
                                 std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (auto r : candidates) {
    if (r != i) d.emplace_back(sq_dist(fm.row(i), fm.row(r)), r);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < std::min(k, d.size()); ++j) out.push_back(d[j].second);
  return out;
}

std::vector<std::size_t> all_rows(const FeatureMatrix& fm) {
  std::vector<std::size_t> out(fm.rows());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

std::size_t other_label_count(const FeatureMatrix& fm, std::size_t i, std::size_t m) {
  std::size_t other = 0;
  for (auto r : nearest(fm, i, all_rows(fm), m)) other += fm.labels[r] != fm.labels[i];
  return other;
}

// Three Gaussian-ish classes with overlapping boundaries.
FeatureMatrix imbalanced_fixture(std::uint64_t seed, std::size_t dim = 3) {
  Rng rng(seed);
  FeatureMatrix fm(dim, {"big", "mid", "small"}, FeatureKind::numeric);
  const std::size_t sizes[] = {60, 15, 6};
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      auto row = fm.append_zero_row(c);
      for (std::size_t j = 0; j < dim; ++j) row[j] = (j == 0 ? 1.2 * c : 0.0) + rng.normal();
    }
  }
  return fm;
}

void check_common_properties(const FeatureMatrix& in, const OversampledMatrix& out, const ResamplePlan& plan) {
  REQUIRE(out.matrix.rows() == in.rows() + plan.total());
  CHECK(out.original_rows() == in.rows());
  CHECK(out.synthetic_mask.size() == out.matrix.rows());
  for (std::size_t i = 0; i < in.rows(); ++i) {
    CHECK_FALSE(out.synthetic_mask[i]);
    CHECK(std::equal(in.row(i).begin(), in.row(i).end(), out.matrix.row(i).begin()));
    CHECK(out.matrix.labels[i] == in.labels[i]);
  }
  const auto after = class_distribution(out.matrix).counts;
  const auto before = class_distribution(in).counts;
  for (std::size_t c = 0; c < before.size(); ++c) CHECK(after[c] == before[c] + plan.quotas[c]);
  for (std::size_t s = 0; s < out.provenance.size(); ++s) {
    const std::size_t row = in.rows() + s;
    CHECK(out.synthetic_mask[row]);
    const auto& p = out.provenance[s];
    CHECK(in.labels[p.base] == out.matrix.labels[row]);
    if (p.neighbor) CHECK(in.labels[*p.neighbor] == in.labels[p.base]);
  }
}

// Segment property: x = s + alpha (s' - s), residual below 1e-9, inside the endpoint box.
void check_segments(const FeatureMatrix& in, const OversampledMatrix& out) {
  for (std::size_t s = 0; s < out.provenance.size(); ++s) {
    const auto& p = out.provenance[s];
    const auto x = out.matrix.row(in.rows() + s);
    const auto base = in.row(p.base);
    const auto nb = p.neighbor ? in.row(*p.neighbor) : base;
    CHECK(p.alpha >= 0.0);
    CHECK(p.alpha <= 1.0);
    double residual = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double expected = base[j] + p.alpha * (nb[j] - base[j]);
      residual += (x[j] - expected) * (x[j] - expected);
      CHECK(x[j] >= std::min(base[j], nb[j]));
      CHECK(x[j] <= std::max(base[j], nb[j]));
    }
    CHECK(std::sqrt(residual) < 1e-9);
  }
}

}  // namespace

TEST_CASE("quotas fill the gap to the majority by floor((M - n) k)") {
  const auto d = distribution({"a", "b", "c", "d"}, {100, 29, 1, 100});
  const auto p = target_sizes(d, 0.5);
  CHECK(p.majority_size == 100);
  CHECK(p.quotas == std::vector<std::size_t>{0, 35, 49, 0});  // 35.5 -> 35, 49.5 -> 49
  CHECK(target_sizes(d, 1.0).quotas == std::vector<std::size_t>{0, 71, 99, 0});
  CHECK(target_sizes(d, 0.0).quotas == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(target_sizes(d, 0.75).quotas == std::vector<std::size_t>{0, 53, 74, 0});
  CHECK(p.quota("b") == 35);
  CHECK(p.quota("zzz") == 0);
  CHECK(p.total() == 84);
}

TEST_CASE("quota products that are integral in exact arithmetic do not lose a unit") {
  // In doubles 100 * 0.29 = 28.999999999999996 and 100 * 0.57 = 56.99999999999999.
  const auto d = distribution({"a", "b"}, {100, 0});
  CHECK(target_sizes(d, 0.07).quotas[1] == 7);
  CHECK(target_sizes(d, 0.29).quotas[1] == 29);
  CHECK(target_sizes(d, 0.57).quotas[1] == 57);
}

TEST_CASE("quotas never exceed the gap") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> counts(2 + rng.uniform_index(6));
    for (auto& c : counts) c = rng.uniform_index(600);
    counts[0] += 1;
    const auto d = distribution(testing::class_names(counts.size()), counts);
    const double k = rng.uniform_closed01();
    const auto p = target_sizes(d, k);
    for (std::size_t c = 0; c < counts.size(); ++c) {
      CHECK(counts[c] + p.quotas[c] <= p.majority_size);
      CHECK(static_cast<double>(p.quotas[c]) <= static_cast<double>(p.majority_size - counts[c]) * k + 1e-6);
      CHECK(static_cast<double>(p.quotas[c]) > static_cast<double>(p.majority_size - counts[c]) * k - 1.0);
    }
  }
}

TEST_CASE("target_sizes argument checks") {
  CHECK_THROWS_AS(target_sizes(distribution({}, {}), 0.5), Error);
  CHECK_THROWS_AS(target_sizes(distribution({"a"}, {3}), 1.5), Error);
  CHECK_THROWS_AS(target_sizes(distribution({"a"}, {3}), -0.1), Error);
}

TEST_CASE("interpolate is s + alpha (s' - s)") {
  const std::vector<double> s = {0, 10, -2}, t = {4, 10, 2};
  CHECK(interpolate({s, t, 0.25}) == std::vector<double>{1, 10, -1});
  CHECK(interpolate({s, t, 0.0}) == s);
  CHECK_THROWS_AS(interpolate({s, t, 1.5}), Error);
  CHECK_THROWS_AS(interpolate({s, std::vector<double>{1}, 0.5}), Error);
}

TEST_CASE("method names round trip") {
  for (auto m : {Method::none, Method::random, Method::smote, Method::borderline_smote, Method::adasyn}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("SMOTE"), Error);
}

TEST_CASE("random oversampling duplicates existing rows") {
  const auto fm = imbalanced_fixture(1);
  const auto plan = target_sizes(class_distribution(fm), 1.0);
  const auto out = random_oversample(fm, plan, 9);
  check_common_properties(fm, out, plan);
  for (std::size_t s = 0; s < out.provenance.size(); ++s) {
    const auto& p = out.provenance[s];
    CHECK_FALSE(p.neighbor.has_value());
    const auto row = out.matrix.row(fm.rows() + s);
    CHECK(std::equal(row.begin(), row.end(), fm.row(p.base).begin()));
  }
}

TEST_CASE("record-level random oversampling appends copies") {
  corpus::Dataset ds;
  for (int i = 0; i < 6; ++i) ds.add({"big " + std::to_string(i), "big"});
  for (int i = 0; i < 2; ++i) ds.add({"small " + std::to_string(i), "small"});
  const auto plan = target_sizes(corpus::class_distribution(ds), 1.0);
  const auto out = random_oversample_records(ds, plan, 3);
  REQUIRE(out.size() == 12);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(out.records()[i] == ds.records()[i]);
  for (std::size_t i = ds.size(); i < out.size(); ++i) {
    CHECK(out.records()[i].label == "small");
    CHECK(out.records()[i].text.rfind("small", 0) == 0);
  }
  CHECK(out.records() == random_oversample_records(ds, plan, 3).records());
}

TEST_CASE("smote interpolates toward same-class nearest neighbors") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fm = imbalanced_fixture(seed);
    const auto plan = target_sizes(class_distribution(fm), 1.0);
    const auto out = smote(fm, plan, 5, seed);
    check_common_properties(fm, out, plan);
    check_segments(fm, out);
    const auto groups = fm.rows_by_class();
    for (const auto& p : out.provenance) {
      REQUIRE(p.neighbor.has_value());
      const auto nn = nearest(fm, p.base, groups[fm.labels[p.base]], 5);
      CHECK(std::find(nn.begin(), nn.end(), *p.neighbor) != nn.end());
    }
    CHECK(out.warnings.empty());
  }
}

TEST_CASE("smote clamps k to the class size and duplicates singletons") {
  FeatureMatrix fm(2, {"a", "b", "c"}, FeatureKind::numeric);
  for (int i = 0; i < 8; ++i) fm.append_row(std::vector<double>{double(i), 0}, 0);
  fm.append_row(std::vector<double>{0, 5}, 1);
  fm.append_row(std::vector<double>{1, 5}, 1);
  fm.append_row(std::vector<double>{9, 9}, 2);
  const auto plan = target_sizes(class_distribution(fm), 1.0);
  const auto out = smote(fm, plan, 5, 1);
  check_common_properties(fm, out, plan);
  check_segments(fm, out);
  REQUIRE(out.warnings.size() == 1);
  CHECK(out.warnings[0].find("'c'") != std::string::npos);
  for (const auto& p : out.provenance) {
    if (fm.labels[p.base] == 1) CHECK(*p.neighbor == (p.base == 8 ? 9u : 8u));
    if (fm.labels[p.base] == 2) CHECK_FALSE(p.neighbor.has_value());
  }
}

TEST_CASE("each class draws from its own sub-seed") {
  // Dropping the quota of one class leaves the other class's synthetic rows unchanged.
  const auto fm = imbalanced_fixture(3);
  auto plan = target_sizes(class_distribution(fm), 1.0);
  const auto full = smote(fm, plan, 5, 17);
  plan.quotas[1] = 0;
  const auto partial = smote(fm, plan, 5, 17);
  std::vector<double> full_small, partial_small;
  for (std::size_t s = 0; s < full.provenance.size(); ++s) {
    if (full.matrix.labels[fm.rows() + s] != 2) continue;
    const auto r = full.matrix.row(fm.rows() + s);
    full_small.insert(full_small.end(), r.begin(), r.end());
  }
  for (std::size_t s = 0; s < partial.provenance.size(); ++s) {
    const auto r = partial.matrix.row(fm.rows() + s);
    partial_small.insert(partial_small.end(), r.begin(), r.end());
  }
  CHECK(full_small == partial_small);
}

TEST_CASE("resamplers are deterministic per seed") {
  const auto fm = imbalanced_fixture(4);
  const auto plan = target_sizes(class_distribution(fm), 0.75);
  for (auto m : {Method::random, Method::smote, Method::borderline_smote, Method::adasyn}) {
    CAPTURE(method_name(m));
    const auto a = oversample(m, fm, plan, 5);
    const auto b = oversample(m, fm, plan, 5);
    const auto c = oversample(m, fm, plan, 6);
    CHECK(a.matrix == b.matrix);
    CHECK(a.matrix.rows() == c.matrix.rows());
    CHECK_FALSE(a.matrix == c.matrix);
  }
}

TEST_CASE("method none returns the input untouched") {
  const auto fm = imbalanced_fixture(5);
  const auto out = oversample(Method::none, fm, target_sizes(class_distribution(fm), 1.0), 1);
  CHECK(out.matrix == fm);
  CHECK(out.provenance.empty());
  CHECK(std::none_of(out.synthetic_mask.begin(), out.synthetic_mask.end(), [](bool b) { return b; }));
}

TEST_CASE("plans that reference unknown or empty classes are rejected") {
  const auto fm = imbalanced_fixture(6);
  ResamplePlan plan;
  plan.labels = {"ghost"};
  plan.quotas = {3};
  CHECK_THROWS_AS(smote(fm, plan, 5, 1), Error);
  FeatureMatrix with_empty(2, {"a", "b"}, FeatureKind::numeric);
  with_empty.append_row(std::vector<double>{0, 0}, 0);
  with_empty.append_row(std::vector<double>{1, 0}, 0);
  plan.labels = {"b"};
  plan.quotas = {2};
  CHECK_THROWS_AS(random_oversample(with_empty, plan, 1), Error);
  plan.quotas = {0};
  CHECK(random_oversample(with_empty, plan, 1).matrix == with_empty);
}

TEST_CASE("boundary tags match a brute-force count") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto fm = imbalanced_fixture(seed, 2);
    const auto index = neighbors::NeighborIndex::from_matrix(fm);
    for (std::size_t i = 0; i < fm.rows(); ++i) {
      const auto other = other_label_count(fm, i, 5);
      const auto expected = other == 5 ? BoundaryTag::noise : (2 * other >= 5 ? BoundaryTag::danger : BoundaryTag::safe);
      CHECK(classify_boundary(index, i, 5) == expected);
    }
  }
  FeatureMatrix tiny(1, {"a", "b"}, FeatureKind::numeric);
  tiny.append_row(std::vector<double>{0}, 0);
  tiny.append_row(std::vector<double>{1}, 1);
  CHECK(classify_boundary(tiny, 0, 1) == BoundaryTag::noise);
  CHECK_THROWS_AS(classify_boundary(tiny, 0, 2), Error);
  CHECK_THROWS_AS(classify_boundary(tiny, 5, 1), Error);
}

TEST_CASE("danger band edges for even m") {
  // m = 4: m' = 2 is danger (exactly half), m' = 1 is safe, m' = 4 is noise.
  FeatureMatrix fm(1, {"a", "b"}, FeatureKind::numeric);
  for (double x : {0.0, 1.0, 2.0}) fm.append_row(std::vector<double>{x}, 0);
  for (double x : {-1.0, -2.0}) fm.append_row(std::vector<double>{x}, 1);
  CHECK(classify_boundary(fm, 0, 4) == BoundaryTag::danger);  // neighbors -1, 1, -2, 2
  CHECK(classify_boundary(fm, 2, 4) == BoundaryTag::danger);  // 1, 0, -1(3), -2(4) -> m' = 2
  CHECK(classify_boundary(fm, 2, 2) == BoundaryTag::safe);
}

TEST_CASE("borderline smote only expands from danger rows") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fm = imbalanced_fixture(seed, 2);
    const auto plan = target_sizes(class_distribution(fm), 1.0);
    const auto out = borderline_smote(fm, plan, 5, 5, seed);
    check_common_properties(fm, out, plan);
    check_segments(fm, out);
    std::map<std::size_t, bool> class_has_danger;
    for (std::size_t i = 0; i < fm.rows(); ++i) {
      const auto other = other_label_count(fm, i, 5);
      class_has_danger[fm.labels[i]] |= other < 5 && 2 * other >= 5;
    }
    for (const auto& p : out.provenance) {
      if (!class_has_danger[fm.labels[p.base]]) continue;
      const auto other = other_label_count(fm, p.base, 5);
      CHECK(other < 5);
      CHECK(2 * other >= 5);
    }
  }
}

TEST_CASE("borderline smote falls back to smote without danger rows") {
  FeatureMatrix fm(1, {"a", "b"}, FeatureKind::numeric);
  for (int i = 0; i < 10; ++i) fm.append_row(std::vector<double>{double(i)}, 0);
  for (int i = 0; i < 4; ++i) fm.append_row(std::vector<double>{100.0 + i}, 1);
  const auto plan = target_sizes(class_distribution(fm), 1.0);
  const auto out = borderline_smote(fm, plan, 3, 2, 1);
  REQUIRE(out.warnings.size() == 1);
  CHECK(out.warnings[0].find("no danger rows") != std::string::npos);
  check_common_properties(fm, out, plan);
  check_segments(fm, out);
  CHECK(out.provenance.size() == 6);
}

TEST_CASE("adasyn allocation follows largest remainders") {
  CHECK(adasyn_allocation(std::vector<std::size_t>{2, 3}, 10) == std::vector<std::size_t>{4, 6});
  CHECK(adasyn_allocation(std::vector<std::size_t>{1, 1, 1}, 10) == std::vector<std::size_t>{4, 3, 3});
  CHECK(adasyn_allocation(std::vector<std::size_t>{1, 1, 1, 1}, 2) == std::vector<std::size_t>{1, 1, 0, 0});
  CHECK(adasyn_allocation(std::vector<std::size_t>{0, 5, 0}, 7) == std::vector<std::size_t>{0, 7, 0});
  CHECK(adasyn_allocation(std::vector<std::size_t>{1, 2, 3}, 0) == std::vector<std::size_t>{0, 0, 0});
  CHECK_THROWS_AS(adasyn_allocation(std::vector<std::size_t>{0, 0}, 3), Error);
}

TEST_CASE("adasyn allocation sums to the budget and stays within one of the share") {
  Rng rng(51);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::size_t> w(1 + rng.uniform_index(20));
    for (auto& x : w) x = rng.uniform_index(6);
    w[rng.uniform_index(w.size())] += 1;
    const std::size_t budget = rng.uniform_index(300);
    const auto g = adasyn_allocation(w, budget);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(std::accumulate(g.begin(), g.end(), std::size_t{0}) == budget);
    CHECK(g == testing::largest_remainder(w, budget));
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(std::fabs(static_cast<double>(g[i]) - w[i] * budget / total) <= 1.0);
      if (w[i] == 0) CHECK(g[i] == 0);
    }
  }
}

TEST_CASE("adasyn gives each row the allocation of its hardness") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fm = imbalanced_fixture(seed, 2);
    const auto plan = target_sizes(class_distribution(fm), 1.0);
    const auto out = adasyn(fm, plan, 5, seed);
    check_common_properties(fm, out, plan);
    check_segments(fm, out);
    const auto groups = fm.rows_by_class();
    for (std::size_t c = 0; c < groups.size(); ++c) {
      if (plan.quotas[c] == 0) continue;
      std::vector<std::size_t> hardness;
      for (auto r : groups[c]) hardness.push_back(other_label_count(fm, r, 5));
      if (std::all_of(hardness.begin(), hardness.end(), [](std::size_t h) { return h == 0; })) continue;
      const auto expected = testing::largest_remainder(hardness, plan.quotas[c]);
      std::map<std::size_t, std::size_t> produced;
      for (const auto& p : out.provenance) {
        if (fm.labels[p.base] == c) ++produced[p.base];
      }
      for (std::size_t local = 0; local < groups[c].size(); ++local) {
        CHECK(produced[groups[c][local]] == expected[local]);
      }
    }
  }
}

TEST_CASE("adasyn falls back to smote when no row has other-class neighbors") {
  FeatureMatrix fm(1, {"a", "b"}, FeatureKind::numeric);
  for (int i = 0; i < 10; ++i) fm.append_row(std::vector<double>{double(i)}, 0);
  for (int i = 0; i < 4; ++i) fm.append_row(std::vector<double>{100.0 + i}, 1);
  const auto plan = target_sizes(class_distribution(fm), 0.5);
  const auto out = adasyn(fm, plan, 3, 1);
  REQUIRE(out.warnings.size() == 1);
  CHECK(out.warnings[0].find("falling back") != std::string::npos);
  CHECK(out.provenance.size() == 3);
  check_segments(fm, out);
}

TEST_CASE("resampler argument checks") {
  const auto fm = imbalanced_fixture(7);
  const auto plan = target_sizes(class_distribution(fm), 1.0);
  CHECK_THROWS_AS(smote(fm, plan, 0, 1), Error);
  CHECK_THROWS_AS(borderline_smote(fm, plan, 0, 5, 1), Error);
  CHECK_THROWS_AS(adasyn(fm, plan, 0, 1), Error);
}
