// Copyright 2026 The PrivAudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privaudit/nn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace privaudit {

namespace {

// Fixed dimension order on both search paths keeps distances bit-identical.
inline double dist2(const double* a, const double* b, std::size_t dims) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dims; ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

// Bounded best-k collector; max-heap ordered lexicographically on
// (squared distance, reference index), so the kept set is the unique
// k smallest under the documented tie-break.
class BestK {
 public:
  explicit BestK(std::size_t k) : k_(k) { heap_.reserve(k); }

  bool full() const { return heap_.size() == k_; }
  double worst_d2() const { return heap_.front().first; }

  void offer(double d2, std::size_t idx) {
    const std::pair<double, std::size_t> cand{d2, idx};
    if (heap_.size() < k_) {
      heap_.push_back(cand);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (cand < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = cand;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  std::vector<Neighbor> sorted() {
    std::sort(heap_.begin(), heap_.end());
    std::vector<Neighbor> out;
    out.reserve(heap_.size());
    for (const auto& [d2, idx] : heap_) out.push_back({idx, std::sqrt(d2)});
    return out;
  }

 private:
  std::size_t k_;
  std::vector<std::pair<double, std::size_t>> heap_;
};

void check_knn_args(const EncodedMatrix& queries, const EncodedMatrix& reference, std::size_t k,
                    bool exclude_self) {
  if (queries.n_dims != reference.n_dims)
    throw std::invalid_argument("knn: dimension mismatch");
  if (k == 0) throw std::invalid_argument("knn: k must be positive");
  if (exclude_self && queries.n_rows != reference.n_rows)
    throw std::invalid_argument("knn: exclude_self requires a self-query");
  const std::size_t capacity = reference.n_rows - (exclude_self ? 1 : 0);
  if (k > capacity) throw std::invalid_argument("knn: k exceeds available reference rows");
}

struct KdNode {
  std::size_t begin, end;  // range into the index permutation (leaf)
  std::size_t split_dim = 0;
  double split_val = 0.0;
  std::int32_t left = -1, right = -1;
  bool leaf = false;
};

class KdTree {
 public:
  KdTree(const EncodedMatrix& ref, std::size_t leaf_size = 16) : ref_(ref) {
    idx_.resize(ref.n_rows);
    for (std::size_t i = 0; i < idx_.size(); ++i) idx_[i] = i;
    if (!idx_.empty()) root_ = build(0, idx_.size(), leaf_size);
  }

  void search(const double* q, BestK& best, std::size_t skip_index) const {
    if (root_ >= 0) search_node(static_cast<std::size_t>(root_), q, best, skip_index);
  }

 private:
  std::int32_t build(std::size_t begin, std::size_t end, std::size_t leaf_size) {
    KdNode node;
    node.begin = begin;
    node.end = end;
    if (end - begin <= leaf_size) {
      node.leaf = true;
      nodes_.push_back(node);
      return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    // split on the dimension with the widest spread over this range
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < ref_.n_dims; ++d) {
      double lo = ref_.row(idx_[begin])[d], hi = lo;
      for (std::size_t i = begin + 1; i < end; ++i) {
        const double v = ref_.row(idx_[i])[d];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = d;
      }
    }
    if (best_spread <= 0.0) {  // all points identical in every dim
      node.leaf = true;
      nodes_.push_back(node);
      return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                       return ref_.row(a)[best_dim] < ref_.row(b)[best_dim];
                     });
    node.split_dim = best_dim;
    node.split_val = ref_.row(idx_[mid])[best_dim];
    const std::size_t slot = nodes_.size();
    nodes_.push_back(node);
    const std::int32_t left = build(begin, mid, leaf_size);
    const std::int32_t right = build(mid, end, leaf_size);
    nodes_[slot].left = left;
    nodes_[slot].right = right;
    return static_cast<std::int32_t>(slot);
  }

  void search_node(std::size_t ni, const double* q, BestK& best, std::size_t skip_index) const {
    const KdNode& node = nodes_[ni];
    if (node.leaf) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t ri = idx_[i];
        if (ri == skip_index) continue;
        best.offer(dist2(q, ref_.row(ri), ref_.n_dims), ri);
      }
      return;
    }
    const double diff = q[node.split_dim] - node.split_val;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search_node(near, q, best, skip_index);
    // visit the far side on equality too, or equal-distance lower-index
    // candidates behind the plane would be missed
    if (!best.full() || diff * diff <= best.worst_d2())
      search_node(far, q, best, skip_index);
  }

  const EncodedMatrix& ref_;
  std::vector<std::size_t> idx_;
  std::vector<KdNode> nodes_;
  std::int32_t root_ = -1;
};

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

}  // namespace

NeighborResult knn_brute_force(const EncodedMatrix& queries, const EncodedMatrix& reference,
                               std::size_t k, bool exclude_self) {
  check_knn_args(queries, reference, k, exclude_self);
  NeighborResult result;
  result.k = k;
  result.neighbors.resize(queries.n_rows);
  for (std::size_t qi = 0; qi < queries.n_rows; ++qi) {
    BestK best(k);
    const double* q = queries.row(qi);
    for (std::size_t ri = 0; ri < reference.n_rows; ++ri) {
      if (exclude_self && ri == qi) continue;
      best.offer(dist2(q, reference.row(ri), queries.n_dims), ri);
    }
    result.neighbors[qi] = best.sorted();
  }
  return result;
}

NeighborResult knn(const EncodedMatrix& queries, const EncodedMatrix& reference, std::size_t k,
                   bool exclude_self) {
  check_knn_args(queries, reference, k, exclude_self);
  const KdTree tree(reference);
  NeighborResult result;
  result.k = k;
  result.neighbors.resize(queries.n_rows);
  const std::int64_t n = static_cast<std::int64_t>(queries.n_rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t qi = 0; qi < n; ++qi) {
    BestK best(k);
    tree.search(queries.row(static_cast<std::size_t>(qi)), best,
                exclude_self ? static_cast<std::size_t>(qi) : kNoSkip);
    result.neighbors[static_cast<std::size_t>(qi)] = best.sorted();
  }
  return result;
}

std::vector<double> nn_distances(const EncodedMatrix& queries, const EncodedMatrix& reference,
                                 bool exclude_self) {
  NeighborResult r = knn(queries, reference, 1, exclude_self);
  std::vector<double> out;
  out.reserve(r.neighbors.size());
  for (const auto& list : r.neighbors) out.push_back(list[0].distance);
  return out;
}

namespace {

double entropy_bits(const std::map<std::string, std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

ColumnEntropy column_entropy(const Table& table, const std::string& column) {
  const std::size_t c = table.schema.index_of(column);
  ColumnEntropy out;
  out.column = column;

  if (table.schema.columns[c].kind == ColumnKind::Categorical) {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
      if (table.is_missing(r, c)) continue;
      ++counts[table.cat_at(r, c)];
      ++total;
    }
    out.bits = entropy_bits(counts, total);
    return out;
  }

  std::vector<double> values;
  for (std::size_t r = 0; r < table.n_rows(); ++r)
    if (!table.is_missing(r, c)) values.push_back(table.num_at(r, c));
  if (values.size() < 2) return out;
  std::sort(values.begin(), values.end());
  const double lo = values.front(), hi = values.back();
  if (hi <= lo) return out;  // constant column

  // Freedman-Diaconis width, bin count capped at 32
  const double iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
  std::size_t n_bins = 32;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
    n_bins = static_cast<std::size_t>(std::clamp(std::ceil((hi - lo) / width), 1.0, 32.0));
  }
  std::map<std::string, std::size_t> counts;
  for (double v : values) {
    auto bin = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(n_bins));
    bin = std::min(bin, n_bins - 1);
    ++counts[std::to_string(bin)];
  }
  out.bits = entropy_bits(counts, values.size());
  return out;
}

}  // namespace privaudit
