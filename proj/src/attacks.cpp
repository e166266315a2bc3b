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

#include "privaudit/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "privaudit/nn_engine.hpp"
#include "privaudit/rng.hpp"
#include "privaudit/stats.hpp"

namespace privaudit {

const char* to_string(MiaGrade g) {
  switch (g) {
    case MiaGrade::Excellent: return "Excellent";
    case MiaGrade::VeryGood: return "VeryGood";
    case MiaGrade::Good: return "Good";
    case MiaGrade::Moderate: return "Moderate";
    case MiaGrade::Poor: return "Poor";
  }
  return "Unknown";
}

// Band edges: < 0.5 Excellent, then even thirds of [0.5, 0.8), >= 0.8 Poor.
MiaGrade grade_from_composite(double composite) {
  if (composite < 0.5) return MiaGrade::Excellent;
  if (composite < 0.6) return MiaGrade::VeryGood;
  if (composite < 0.7) return MiaGrade::Good;
  if (composite < 0.8) return MiaGrade::Moderate;
  return MiaGrade::Poor;
}

AttackSet mia_build_attack_set(const Table& train, const Table& holdout, double fraction,
                               std::uint64_t seed) {
  if (holdout.n_rows() < 1) throw std::invalid_argument("mia_build_attack_set: empty holdout");
  if (train.n_rows() < 1) throw std::invalid_argument("mia_build_attack_set: insufficient train rows");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("mia_build_attack_set: fraction must lie in (0,1]");

  auto rng = make_rng(seed, 0x317a);
  const std::size_t pool_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(train.n_rows()))));
  std::vector<std::size_t> pool = sample_without_replacement(train.n_rows(), pool_size, rng);
  const std::size_t m = std::min(holdout.n_rows(), pool.size());

  std::vector<std::size_t> member_idx;
  {
    auto pick = sample_without_replacement(pool.size(), m, rng);
    for (std::size_t i : pick) member_idx.push_back(pool[i]);
  }
  std::vector<std::size_t> nonmember_idx = sample_without_replacement(holdout.n_rows(), m, rng);

  // interleave then shuffle deterministically
  const Table members = train.select_rows(member_idx);
  const Table nonmembers = holdout.select_rows(nonmember_idx);
  std::vector<std::size_t> order(2 * m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  AttackSet set;
  set.records.schema = train.schema;
  set.records.cols.resize(train.n_cols());
  set.is_member.reserve(2 * m);
  for (std::size_t pos : order) {
    const bool member = pos < m;
    const Table& src = member ? members : nonmembers;
    const std::size_t r = member ? pos : pos - m;
    set.is_member.push_back(member ? 1 : 0);
    for (std::size_t c = 0; c < train.n_cols(); ++c) {
      auto& dst = set.records.cols[c];
      dst.miss.push_back(src.cols[c].miss[r]);
      if (train.schema.columns[c].kind == ColumnKind::Numeric)
        dst.nums.push_back(src.cols[c].nums[r]);
      else
        dst.cats.push_back(src.cols[c].cats[r]);
    }
  }
  return set;
}

MiaReport mia_run(const Table& train, const Table& holdout, const Table& synth,
                  const MiaConfig& cfg) {
  if (train.schema != holdout.schema || train.schema != synth.schema)
    throw std::invalid_argument("mia_run: schema mismatch");
  if (synth.n_rows() < 2) throw std::invalid_argument("mia_run: synth needs at least 2 rows");
  if (cfg.train_sample_fractions.empty() || cfg.threshold_quantiles.empty() || cfg.n_trials == 0)
    throw std::invalid_argument("mia_run: empty config lists");

  const EncoderStats stats = fit_encoder(train);
  const EncodedMatrix synth_m = encode(synth, stats);

  MiaReport report;
  report.seed = cfg.seed;
  for (std::size_t rep = 0; rep < cfg.n_trials; ++rep) {
    for (std::size_t fi = 0; fi < cfg.train_sample_fractions.size(); ++fi) {
      const double fraction = cfg.train_sample_fractions[fi];
      const std::uint64_t trial_seed =
          mix_seed(cfg.seed, rep * cfg.train_sample_fractions.size() + fi);
      const AttackSet attack = mia_build_attack_set(train, holdout, fraction, trial_seed);
      const EncodedMatrix attack_m = encode(attack.records, stats);
      const std::vector<double> dist = nn_distances(attack_m, synth_m);
      std::vector<double> sorted = dist;
      std::sort(sorted.begin(), sorted.end());

      for (double q : cfg.threshold_quantiles) {
        if (!(q > 0.0 && q < 1.0))
          throw std::invalid_argument("mia_run: threshold quantile must lie in (0,1)");
        MiaTrialResult trial;
        trial.sample_fraction = fraction;
        trial.threshold_quantile = q;
        trial.threshold = quantile_sorted(sorted, q);
        for (std::size_t i = 0; i < dist.size(); ++i) {
          // ties match: a replicated record (distance 0, threshold 0) must
          // count as caught
          const bool match = dist[i] <= trial.threshold;
          if (attack.is_member[i]) {
            match ? ++trial.tp : ++trial.fn;
          } else {
            match ? ++trial.fp : ++trial.tn;
          }
        }
        const std::size_t total = trial.tp + trial.fp + trial.tn + trial.fn;
        trial.precision = (trial.tp + trial.fp) > 0
                              ? static_cast<double>(trial.tp) / static_cast<double>(trial.tp + trial.fp)
                              : 0.0;
        trial.accuracy = static_cast<double>(trial.tp + trial.tn) / static_cast<double>(total);
        report.trials.push_back(trial);
      }
    }
  }

  for (const auto& t : report.trials) {
    report.avg_precision += t.precision;
    report.avg_accuracy += t.accuracy;
  }
  report.avg_precision /= static_cast<double>(report.trials.size());
  report.avg_accuracy /= static_cast<double>(report.trials.size());
  report.composite_score = 0.5 * (report.avg_precision + report.avg_accuracy);
  report.grade = grade_from_composite(report.composite_score);
  return report;
}

Table aia_aggregate_neighbors(const Table& neighbors) {
  if (neighbors.n_rows() == 0) throw std::invalid_argument("aia_aggregate_neighbors: no rows");
  Table out;
  out.schema = neighbors.schema;
  out.cols.resize(neighbors.n_cols());
  for (std::size_t c = 0; c < neighbors.n_cols(); ++c) {
    auto& dst = out.cols[c];
    if (neighbors.schema.columns[c].kind == ColumnKind::Numeric) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < neighbors.n_rows(); ++r) {
        if (neighbors.is_missing(r, c)) continue;
        sum += neighbors.num_at(r, c);
        ++n;
      }
      dst.miss.push_back(n == 0 ? 1 : 0);
      dst.nums.push_back(n == 0 ? 0.0 : sum / static_cast<double>(n));
    } else {
      std::map<std::string, std::size_t> counts;  // ordered: ties resolve lexicographically
      for (std::size_t r = 0; r < neighbors.n_rows(); ++r) {
        if (neighbors.is_missing(r, c)) continue;
        ++counts[neighbors.cat_at(r, c)];
      }
      std::string mode;
      std::size_t best = 0;
      for (const auto& [value, count] : counts) {
        if (count > best) {
          best = count;
          mode = value;
        }
      }
      dst.miss.push_back(counts.empty() ? 1 : 0);
      dst.cats.push_back(mode);
    }
  }
  return out;
}

namespace {

// k nearest synth rows under L2 restricted to `dims`; (d2, index) tie-break
// matches the nn_engine convention.
std::vector<std::size_t> masked_knn(const EncodedMatrix& synth, const double* query,
                                    const std::vector<std::size_t>& dims, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> heap;  // max-heap on (d2, idx)
  heap.reserve(k);
  for (std::size_t ri = 0; ri < synth.n_rows; ++ri) {
    const double* row = synth.row(ri);
    double d2 = 0.0;
    for (std::size_t d : dims) {
      const double diff = query[d] - row[d];
      d2 += diff * diff;
    }
    const std::pair<double, std::size_t> cand{d2, ri};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort(heap.begin(), heap.end());
  std::vector<std::size_t> out;
  out.reserve(heap.size());
  for (const auto& [_, idx] : heap) out.push_back(idx);
  return out;
}

}  // namespace

AiaReport aia_run(const Table& real, const Table& synth, const AiaConfig& cfg) {
  if (real.schema != synth.schema) throw std::invalid_argument("aia_run: schema mismatch");
  if (cfg.k == 0) throw std::invalid_argument("aia_run: k must be >= 1");
  if (synth.n_rows() < cfg.k) throw std::invalid_argument("aia_run: k exceeds synth rows");
  const std::size_t n_cols = real.n_cols();

  std::vector<std::size_t> fixed_qid_idx;
  if (!cfg.random_mode()) {
    for (const auto& name : cfg.fixed_qids) fixed_qid_idx.push_back(real.schema.index_of(name));
    if (fixed_qid_idx.size() >= n_cols)
      throw std::invalid_argument("aia_run: QID set leaves no sensitive column to predict");
  } else {
    if (cfg.random_m == 0 || cfg.random_m >= n_cols)
      throw std::invalid_argument("aia_run: random_m must lie in [1, n_cols)");
  }

  // one shared encoded space fitted on the real table; per-record QID
  // subspaces select dimensions out of it
  const EncoderStats stats = fit_encoder(real);
  const EncodedMatrix synth_m = encode(synth, stats);
  std::vector<std::vector<std::size_t>> col_dims(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const std::size_t begin = stats.dim_offset[c];
    const std::size_t end = (c + 1 < n_cols) ? stats.dim_offset[c + 1] : stats.n_dims;
    for (std::size_t d = begin; d < end; ++d) col_dims[c].push_back(d);
  }

  // per-numeric-column match tolerance: fraction of the real value range
  std::vector<double> numeric_tol(n_cols, 0.0);
  for (std::size_t c = 0; c < n_cols; ++c)
    if (real.schema.columns[c].kind == ColumnKind::Numeric)
      numeric_tol[c] = cfg.numeric_match_tolerance * (stats.numeric[c].max - stats.numeric[c].min);

  std::size_t n_attack = cfg.n_attack_records;
  if (n_attack == 0)
    n_attack = std::min<std::size_t>(
        5000, std::max<std::size_t>(
                  1, static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(real.n_rows())))));
  n_attack = std::min(n_attack, real.n_rows());

  auto sample_rng = make_rng(cfg.seed, 0xa1a0);
  const std::vector<std::size_t> attack_rows =
      sample_without_replacement(real.n_rows(), n_attack, sample_rng);
  const Table attack = real.select_rows(attack_rows);
  const EncodedMatrix attack_m = encode(attack, stats);

  std::vector<std::size_t> correct(n_cols, 0), evaluated(n_cols, 0);
  const std::int64_t n = static_cast<std::int64_t>(n_attack);

  // per-record tallies accumulate into thread-independent buffers keyed by
  // record, reduced serially afterwards
  std::vector<std::vector<std::uint8_t>> rec_sensitive(n_attack), rec_correct(n_attack);

#pragma omp parallel for schedule(static)
  for (std::int64_t ai = 0; ai < n; ++ai) {
    const std::size_t a = static_cast<std::size_t>(ai);
    std::vector<std::size_t> qid_idx;
    if (cfg.random_mode()) {
      auto rng = make_rng(cfg.seed, 0x91d0 + a);  // per-record stream: scheduling-independent
      qid_idx = sample_without_replacement(n_cols, cfg.random_m, rng);
    } else {
      qid_idx = fixed_qid_idx;
    }
    std::vector<std::uint8_t> is_qid(n_cols, 0);
    std::vector<std::size_t> dims;
    for (std::size_t c : qid_idx) {
      is_qid[c] = 1;
      dims.insert(dims.end(), col_dims[c].begin(), col_dims[c].end());
    }

    const std::vector<std::size_t> nn_idx = masked_knn(synth_m, attack_m.row(a), dims, cfg.k);
    const Table predicted = aia_aggregate_neighbors(synth.select_rows(nn_idx));

    auto& sens = rec_sensitive[a];
    auto& corr = rec_correct[a];
    sens.assign(n_cols, 0);
    corr.assign(n_cols, 0);
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (is_qid[c]) continue;
      sens[c] = 1;
      const bool pred_missing = predicted.is_missing(0, c);
      const bool true_missing = attack.is_missing(a, c);
      bool ok;
      if (pred_missing || true_missing) {
        ok = pred_missing && true_missing;
      } else if (real.schema.columns[c].kind == ColumnKind::Numeric) {
        ok = std::abs(predicted.num_at(0, c) - attack.num_at(a, c)) <= numeric_tol[c];
      } else {
        ok = predicted.cat_at(0, c) == attack.cat_at(a, c);
      }
      corr[c] = ok ? 1 : 0;
    }
  }

  for (std::size_t a = 0; a < n_attack; ++a)
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!rec_sensitive[a][c]) continue;
      ++evaluated[c];
      correct[c] += rec_correct[a][c];
    }

  AiaReport report;
  report.seed = cfg.seed;
  double weight_total = 0.0;
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (evaluated[c] == 0) continue;
    AiaColumnResult col;
    col.column = real.schema.columns[c].name;
    col.n_evaluated = evaluated[c];
    col.accuracy = static_cast<double>(correct[c]) / static_cast<double>(evaluated[c]);
    col.entropy_weight = column_entropy(real, col.column).bits;
    weight_total += col.entropy_weight;
    report.per_column.push_back(std::move(col));
  }
  if (report.per_column.empty()) throw std::invalid_argument("aia_run: nothing to predict");

  double acc_sum = 0.0, weighted = 0.0;
  for (auto& col : report.per_column) {
    acc_sum += col.accuracy;
    // all-zero entropies fall back to uniform weights
    col.entropy_weight = weight_total > 0.0
                             ? col.entropy_weight / weight_total
                             : 1.0 / static_cast<double>(report.per_column.size());
    weighted += col.entropy_weight * col.accuracy;
  }
  report.overall_unweighted = acc_sum / static_cast<double>(report.per_column.size());
  report.overall_entropy_weighted = weighted;
  return report;
}

}  // namespace privaudit
