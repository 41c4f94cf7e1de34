#include "imbalance/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbalance/rng.hpp"
#include "imbalance/simd/kernels.hpp"

namespace imbalance::resample {

namespace {

using neighbors::NeighborIndex;

// Quotas aligned with `classes`. A positive quota for a label the data does
// not know is an error, as is a positive quota for an empty class.
std::vector<std::size_t> aligned_quotas(const std::vector<std::string>& classes,
                                        const std::vector<std::size_t>& class_sizes,
                                        const ResamplePlan& plan) {
  std::vector<std::size_t> quotas(classes.size(), 0);
  for (std::size_t p = 0; p < plan.labels.size(); ++p) {
    if (plan.quotas[p] == 0) continue;
    const auto it = std::find(classes.begin(), classes.end(), plan.labels[p]);
    if (it == classes.end()) {
      throw Error("plan assigns quota " + std::to_string(plan.quotas[p]) + " to unknown class '" +
                  plan.labels[p] + "'");
    }
    const auto c = static_cast<std::size_t>(it - classes.begin());
    if (class_sizes[c] == 0) {
      throw Error("class '" + plan.labels[p] + "' has quota " + std::to_string(plan.quotas[p]) +
                  " but no rows to oversample");
    }
    quotas[c] = plan.quotas[p];
  }
  return quotas;
}

std::vector<std::size_t> aligned_quotas(const FeatureMatrix& fm, const ResamplePlan& plan) {
  return aligned_quotas(fm.classes, class_distribution(fm).counts, plan);
}

OversampledMatrix start_output(const FeatureMatrix& fm) {
  fm.validate();
  OversampledMatrix out;
  out.matrix = fm;
  out.synthetic_mask.assign(fm.rows(), false);
  return out;
}

void append_synthetic(OversampledMatrix& out, std::span<const double> row, std::size_t label,
                      Provenance prov) {
  out.matrix.append_row(row, label);
  out.synthetic_mask.push_back(true);
  out.provenance.push_back(prov);
}

// Same-class interpolation machinery for one class. Neighbor lists are
// computed lazily and cached per class row.
class ClassSynthesizer {
 public:
  ClassSynthesizer(const FeatureMatrix& fm, std::vector<std::size_t> rows, std::size_t k_neighbors)
      : fm_(fm), rows_(std::move(rows)), cache_(rows_.size()) {
    k_ = std::min(k_neighbors, rows_.size() - 1);
    if (k_ > 0) index_.emplace(NeighborIndex::from_rows(fm_, rows_));
    scratch_.resize(fm_.cols);
  }

  const std::vector<std::size_t>& rows() const noexcept { return rows_; }
  bool duplicates_only() const noexcept { return k_ == 0; }

  // Emits one synthetic row based on class-local row `local`.
  void emit(std::size_t local, Rng& rng, OversampledMatrix& out) {
    const std::size_t base = rows_[local];
    const std::size_t label = fm_.labels[base];
    if (k_ == 0) {
      append_synthetic(out, fm_.row(base), label, {base, std::nullopt, 0.0});
      return;
    }
    const auto& nb = neighbors_of(local);
    const std::size_t neighbor = nb[rng.uniform_index(nb.size())];
    const double alpha = rng.uniform_closed01();
    simd::lerp(fm_.row(base), fm_.row(neighbor), alpha, scratch_);
    append_synthetic(out, scratch_, label, {base, neighbor, alpha});
  }

  // Emits one synthetic row from a uniformly drawn class row.
  void emit_uniform(Rng& rng, OversampledMatrix& out) { emit(rng.uniform_index(rows_.size()), rng, out); }

 private:
  const std::vector<std::size_t>& neighbors_of(std::size_t local) {
    auto& slot = cache_[local];
    if (!slot) {
      const auto list = index_->query_point(local, k_);
      std::vector<std::size_t> global;
      global.reserve(list.indices.size());
      for (auto i : list.indices) global.push_back(rows_[i]);
      slot = std::move(global);
    }
    return *slot;
  }

  const FeatureMatrix& fm_;
  std::vector<std::size_t> rows_;
  std::size_t k_ = 0;
  std::optional<NeighborIndex> index_;
  std::vector<std::optional<std::vector<std::size_t>>> cache_;
  std::vector<double> scratch_;
};

void note_single_row(const FeatureMatrix& fm, std::size_t cls, OversampledMatrix& out) {
  out.warnings.push_back("class '" + fm.classes[cls] +
                         "' has a single row; synthetic rows duplicate it");
}

void smote_class(ClassSynthesizer& synth, std::size_t quota, Rng& rng, OversampledMatrix& out) {
  for (std::size_t q = 0; q < quota; ++q) synth.emit_uniform(rng, out);
}

std::size_t count_other_label(const NeighborIndex& whole_set, std::size_t row, std::size_t k) {
  const auto list = whole_set.query_point(row, k);
  const auto own = whole_set.labels()[row];
  return static_cast<std::size_t>(std::count_if(list.indices.begin(), list.indices.end(),
                                                [&](std::size_t i) { return whole_set.labels()[i] != own; }));
}

}  // namespace

std::size_t ResamplePlan::quota(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return quotas[i];
  }
  return 0;
}

std::size_t ResamplePlan::total() const noexcept {
  return std::accumulate(quotas.begin(), quotas.end(), std::size_t{0});
}

ResamplePlan target_sizes(const corpus::ClassDistribution& dist, double k_percent) {
  if (dist.total == 0 || dist.counts.empty()) throw Error("target_sizes: empty class distribution");
  if (!(k_percent >= 0.0 && k_percent <= 1.0)) throw Error("target_sizes: k_percent must lie in [0, 1]");
  ResamplePlan plan;
  plan.labels = dist.labels;
  plan.k_percent = k_percent;
  plan.majority_size = *std::max_element(dist.counts.begin(), dist.counts.end());
  plan.quotas.reserve(dist.counts.size());
  for (auto count : dist.counts) {
    const auto gap = static_cast<double>(plan.majority_size - count);
    // The 1e-9 guard keeps products that are integral in exact arithmetic
    // (e.g. 100 * 0.29) from flooring one unit low.
    plan.quotas.push_back(static_cast<std::size_t>(std::floor(gap * k_percent + 1e-9)));
  }
  return plan;
}

std::vector<double> interpolate(const InterpolationDraw& draw) {
  if (draw.base.size() != draw.neighbor.size()) throw Error("interpolate: dimension mismatch");
  if (!(draw.alpha >= 0.0 && draw.alpha <= 1.0)) throw Error("interpolate: alpha must lie in [0, 1]");
  std::vector<double> out(draw.base.size());
  simd::lerp(draw.base, draw.neighbor, draw.alpha, out);
  return out;
}

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::none:
      return "none";
    case Method::random:
      return "random";
    case Method::smote:
      return "smote";
    case Method::borderline_smote:
      return "borderline-smote";
    case Method::adasyn:
      return "adasyn";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::none, Method::random, Method::smote, Method::borderline_smote, Method::adasyn}) {
    if (method_name(m) == name) return m;
  }
  throw Error("unknown resampling method '" + std::string(name) + "'");
}

OversampledMatrix random_oversample(const FeatureMatrix& fm, const ResamplePlan& plan, std::uint64_t seed) {
  auto out = start_output(fm);
  const auto quotas = aligned_quotas(fm, plan);
  const auto groups = fm.rows_by_class();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (quotas[c] == 0) continue;
    Rng rng(mix_seed(seed, c));
    for (std::size_t q = 0; q < quotas[c]; ++q) {
      const std::size_t base = groups[c][rng.uniform_index(groups[c].size())];
      append_synthetic(out, fm.row(base), c, {base, std::nullopt, 0.0});
    }
  }
  return out;
}

corpus::Dataset random_oversample_records(const corpus::Dataset& ds, const ResamplePlan& plan,
                                          std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> groups(ds.classes().size());
  for (std::size_t i = 0; i < ds.size(); ++i) groups[ds.class_index(ds.records()[i].label)].push_back(i);
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) sizes.push_back(g.size());
  const auto quotas = aligned_quotas(ds.classes(), sizes, plan);

  corpus::Dataset out = ds;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (quotas[c] == 0) continue;
    Rng rng(mix_seed(seed, c));
    for (std::size_t q = 0; q < quotas[c]; ++q) {
      out.add(ds.records()[groups[c][rng.uniform_index(groups[c].size())]]);
    }
  }
  return out;
}

OversampledMatrix smote(const FeatureMatrix& fm, const ResamplePlan& plan, std::size_t k_neighbors,
                        std::uint64_t seed) {
  if (k_neighbors == 0) throw Error("smote: k_neighbors must be positive");
  auto out = start_output(fm);
  const auto quotas = aligned_quotas(fm, plan);
  auto groups = fm.rows_by_class();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (quotas[c] == 0) continue;
    ClassSynthesizer synth(fm, std::move(groups[c]), k_neighbors);
    if (synth.duplicates_only()) note_single_row(fm, c, out);
    Rng rng(mix_seed(seed, c));
    smote_class(synth, quotas[c], rng, out);
  }
  return out;
}

std::string_view boundary_tag_name(BoundaryTag tag) noexcept {
  switch (tag) {
    case BoundaryTag::safe:
      return "safe";
    case BoundaryTag::danger:
      return "danger";
    case BoundaryTag::noise:
      return "noise";
  }
  return "unknown";
}

BoundaryTag classify_boundary(const NeighborIndex& whole_set, std::size_t row, std::size_t m_neighbors) {
  if (row >= whole_set.size()) throw Error("classify_boundary: row index out of range");
  if (m_neighbors == 0) throw Error("classify_boundary: m_neighbors must be positive");
  if (m_neighbors > whole_set.size() - 1) {
    throw Error("classify_boundary: m_neighbors exceeds the number of other rows");
  }
  const std::size_t other = count_other_label(whole_set, row, m_neighbors);
  if (other == m_neighbors) return BoundaryTag::noise;
  if (2 * other >= m_neighbors) return BoundaryTag::danger;
  return BoundaryTag::safe;
}

BoundaryTag classify_boundary(const FeatureMatrix& fm, std::size_t row, std::size_t m_neighbors) {
  if (row >= fm.rows()) throw Error("classify_boundary: row index out of range");
  return classify_boundary(NeighborIndex::from_matrix(fm), row, m_neighbors);
}

OversampledMatrix borderline_smote(const FeatureMatrix& fm, const ResamplePlan& plan, std::size_t m_neighbors,
                                   std::size_t k_neighbors, std::uint64_t seed) {
  if (k_neighbors == 0 || m_neighbors == 0) throw Error("borderline_smote: neighbor counts must be positive");
  auto out = start_output(fm);
  const auto quotas = aligned_quotas(fm, plan);
  if (std::all_of(quotas.begin(), quotas.end(), [](std::size_t q) { return q == 0; })) return out;

  const auto whole_set = NeighborIndex::from_matrix(fm);
  const std::size_t m_eff = std::min(m_neighbors, fm.rows() - 1);
  auto groups = fm.rows_by_class();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (quotas[c] == 0) continue;
    std::vector<std::size_t> danger;  // class-local indices
    if (m_eff > 0) {
      for (std::size_t local = 0; local < groups[c].size(); ++local) {
        if (classify_boundary(whole_set, groups[c][local], m_eff) == BoundaryTag::danger) {
          danger.push_back(local);
        }
      }
    }
    ClassSynthesizer synth(fm, std::move(groups[c]), k_neighbors);
    if (synth.duplicates_only()) note_single_row(fm, c, out);
    Rng rng(mix_seed(seed, c));
    if (danger.empty()) {
      out.warnings.push_back("class '" + fm.classes[c] +
                             "' has no danger rows; falling back to plain smote");
      smote_class(synth, quotas[c], rng, out);
      continue;
    }
    for (std::size_t q = 0; q < quotas[c]; ++q) {
      synth.emit(danger[rng.uniform_index(danger.size())], rng, out);
    }
  }
  return out;
}

std::vector<std::size_t> adasyn_allocation(std::span<const std::size_t> weights, std::size_t budget) {
  using Wide = unsigned __int128;
  const Wide total = std::accumulate(weights.begin(), weights.end(), Wide{0});
  if (total == 0) throw Error("adasyn_allocation: all weights are zero");

  const std::size_t n = weights.size();
  std::vector<std::size_t> alloc(n);
  // residual_i = w_i * budget - alloc_i * total, i.e. (share - alloc) scaled by total.
  std::vector<__int128> residual(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Wide scaled = Wide{weights[i]} * budget;
    alloc[i] = static_cast<std::size_t>((2 * scaled + total) / (2 * total));
    residual[i] = static_cast<__int128>(scaled) - static_cast<__int128>(Wide{alloc[i]} * total);
    assigned += alloc[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (assigned < budget) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return residual[a] > residual[b]; });
    for (std::size_t j = 0; assigned < budget; ++j) {
      ++alloc[order[j]];
      ++assigned;
    }
  } else if (assigned > budget) {
    // Equal residuals give up their unit from the higher index first, so
    // the outcome matches plain largest-remainder apportionment.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return residual[a] < residual[b] || (residual[a] == residual[b] && a > b);
    });
    for (std::size_t j = 0; assigned > budget; ++j) {
      if (alloc[order[j]] == 0) continue;
      --alloc[order[j]];
      --assigned;
    }
  }
  return alloc;
}

OversampledMatrix adasyn(const FeatureMatrix& fm, const ResamplePlan& plan, std::size_t k_neighbors,
                         std::uint64_t seed) {
  if (k_neighbors == 0) throw Error("adasyn: k_neighbors must be positive");
  auto out = start_output(fm);
  const auto quotas = aligned_quotas(fm, plan);
  if (std::all_of(quotas.begin(), quotas.end(), [](std::size_t q) { return q == 0; })) return out;

  const auto whole_set = NeighborIndex::from_matrix(fm);
  const std::size_t k_whole = std::min(k_neighbors, fm.rows() - 1);
  auto groups = fm.rows_by_class();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (quotas[c] == 0) continue;
    std::vector<std::size_t> hardness(groups[c].size(), 0);
    if (k_whole > 0) {
      for (std::size_t local = 0; local < groups[c].size(); ++local) {
        hardness[local] = count_other_label(whole_set, groups[c][local], k_whole);
      }
    }
    ClassSynthesizer synth(fm, std::move(groups[c]), k_neighbors);
    if (synth.duplicates_only()) note_single_row(fm, c, out);
    Rng rng(mix_seed(seed, c));
    if (std::all_of(hardness.begin(), hardness.end(), [](std::size_t d) { return d == 0; })) {
      out.warnings.push_back("class '" + fm.classes[c] +
                             "' has no other-class neighbors; falling back to plain smote");
      smote_class(synth, quotas[c], rng, out);
      continue;
    }
    const auto alloc = adasyn_allocation(hardness, quotas[c]);
    for (std::size_t local = 0; local < alloc.size(); ++local) {
      for (std::size_t g = 0; g < alloc[local]; ++g) synth.emit(local, rng, out);
    }
  }
  return out;
}

OversampledMatrix oversample(Method method, const FeatureMatrix& fm, const ResamplePlan& plan,
                             std::uint64_t seed, const ResampleOptions& options) {
  switch (method) {
    case Method::none:
      return start_output(fm);
    case Method::random:
      return random_oversample(fm, plan, seed);
    case Method::smote:
      return smote(fm, plan, options.k_neighbors, seed);
    case Method::borderline_smote:
      return borderline_smote(fm, plan, options.m_neighbors, options.k_neighbors, seed);
    case Method::adasyn:
      return adasyn(fm, plan, options.k_neighbors, seed);
  }
  throw Error("unknown resampling method");
}

}  // namespace imbalance::resample
