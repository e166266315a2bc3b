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

#include "privaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "privaudit/rng.hpp"
#include "privaudit/stats.hpp"

namespace privaudit {

namespace {
constexpr double kDegenerateEps = 1e-12;
}

DistanceSummary summarize(std::vector<double> values) {
  DistanceSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  // sum after sorting so the mean is invariant to input row order
  std::sort(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.min = values.front();
  s.median = quantile_sorted(values, 0.5);
  s.p5 = quantile_sorted(values, 0.05);
  return s;
}

EncodedMatrix select_rows(const EncodedMatrix& m, std::span<const std::size_t> rows) {
  EncodedMatrix out;
  out.n_rows = rows.size();
  out.n_dims = m.n_dims;
  out.clamp_count = m.clamp_count;
  out.missing_count = m.missing_count;
  out.data.reserve(rows.size() * m.n_dims);
  for (std::size_t r : rows)
    out.data.insert(out.data.end(), m.row(r), m.row(r) + m.n_dims);
  return out;
}

double exact_match_share(const Table& train, const Table& other) {
  if (train.schema != other.schema) throw std::invalid_argument("exact_match_share: schema mismatch");
  if (other.n_rows() == 0) return 0.0;
  std::unordered_set<std::string> keys;
  keys.reserve(train.n_rows() * 2);
  for (std::size_t r = 0; r < train.n_rows(); ++r) keys.insert(train.row_key(r));
  std::size_t hits = 0;
  for (std::size_t r = 0; r < other.n_rows(); ++r)
    if (keys.count(other.row_key(r))) ++hits;
  return static_cast<double>(hits) / static_cast<double>(other.n_rows());
}

ImsResult ims_test(const Table& train, const Table& test, const Table& synth) {
  ImsResult r;
  r.train_synth_share = exact_match_share(train, synth);
  r.train_test_share = exact_match_share(train, test);
  r.pass = r.train_synth_share <= r.train_test_share;
  return r;
}

DistanceSummary dcr(const EncodedMatrix& queries, const EncodedMatrix& reference, bool within) {
  if (within && queries.n_rows < 2)
    throw std::invalid_argument("dcr: within-set needs at least 2 rows");
  return summarize(nn_distances(queries, reference, within));
}

DcrReport dcr_suite(const EncodedMatrix& train, const EncodedMatrix& holdout,
                    const EncodedMatrix& synth, const MetricThresholds& thr) {
  if (train.n_rows < 2 || holdout.n_rows < 2 || synth.n_rows < 2)
    throw std::invalid_argument("dcr_suite: each matrix needs at least 2 rows");
  DcrReport rep;
  std::vector<double> synth_to_train = nn_distances(synth, train);
  std::vector<double> synth_to_holdout = nn_distances(synth, holdout);
  rep.train_synth = summarize(synth_to_train);
  rep.holdout_synth = summarize(synth_to_holdout);
  rep.train_train = dcr(train, train, /*within=*/true);
  rep.within_real = rep.train_train;
  rep.within_synth = dcr(synth, synth, /*within=*/true);

  std::size_t closer = 0;
  for (std::size_t i = 0; i < synth.n_rows; ++i)
    if (synth_to_train[i] < synth_to_holdout[i]) ++closer;  // ties count as holdout
  rep.share_closer_to_train = static_cast<double>(closer) / static_cast<double>(synth.n_rows);

  rep.verdicts.train_further_than_self = rep.train_train.median < rep.train_synth.median;
  rep.verdicts.no_model_collapse = rep.within_synth.median >= rep.within_real.median;
  rep.verdicts.share_closer_ok = rep.share_closer_to_train <= 0.5 + thr.dcr_share_tau;
  return rep;
}

DistanceSummary nndr(const EncodedMatrix& queries, const EncodedMatrix& reference,
                     bool self_mode) {
  const std::size_t needed = self_mode ? 3 : 2;
  if (reference.n_rows < needed) throw std::invalid_argument("nndr: too few reference rows");
  NeighborResult nn = knn(queries, reference, 2, self_mode);
  std::vector<double> ratios;
  ratios.reserve(queries.n_rows);
  for (const auto& list : nn.neighbors) {
    const double d1 = list[0].distance;
    const double d2 = list[1].distance;
    double ratio;
    if (d2 <= kDegenerateEps)
      ratio = 1.0;  // query sits on duplicated reference rows
    else if (d1 <= kDegenerateEps)
      ratio = 0.0;  // exact copy of a unique record: maximal risk
    else
      ratio = d1 / d2;
    ratios.push_back(ratio);
  }
  return summarize(ratios);
}

NndrReport nndr_suite(const EncodedMatrix& train, const EncodedMatrix& holdout,
                      const EncodedMatrix& synth, const MetricThresholds& thr) {
  NndrReport rep;
  rep.tau = thr.nndr_tau;
  rep.train_synth = nndr(synth, train);
  rep.holdout_synth = nndr(synth, holdout);
  rep.train_train = nndr(train, train, /*self_mode=*/true);
  rep.synth_synth = nndr(synth, synth, /*self_mode=*/true);

  const double diff = rep.train_synth.median - rep.holdout_synth.median;
  rep.verdicts.holdout_comparable = std::abs(diff) <= thr.nndr_tau;
  rep.verdicts.leak_flag = diff > thr.nndr_tau;
  rep.verdicts.fidelity_loss_flag = diff < -thr.nndr_tau;
  rep.verdicts.no_model_collapse =
      std::abs(rep.synth_synth.median - rep.train_train.median) <= thr.nndr_tau;
  return rep;
}

namespace {

// mean of 1(a[i] > b[i]); strict inequality, ties count as 0
double indicator_mean(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(a.size());
}

}  // namespace

double nnaa(const EncodedMatrix& target, const EncodedMatrix& source, std::uint64_t seed) {
  if (target.n_dims != source.n_dims) throw std::invalid_argument("nnaa: dimension mismatch");
  const std::size_t n = std::min(target.n_rows, source.n_rows);
  if (n < 2) throw std::invalid_argument("nnaa: needs at least 2 rows per side");

  const EncodedMatrix* t = &target;
  const EncodedMatrix* s = &source;
  EncodedMatrix t_sub, s_sub;
  if (target.n_rows != source.n_rows) {
    auto rng = make_rng(seed, 0xaa);
    if (target.n_rows > n) {
      t_sub = select_rows(target, sample_without_replacement(target.n_rows, n, rng));
      t = &t_sub;
    }
    if (source.n_rows > n) {
      s_sub = select_rows(source, sample_without_replacement(source.n_rows, n, rng));
      s = &s_sub;
    }
  }

  const std::vector<double> d_ts = nn_distances(*t, *s);
  const std::vector<double> d_tt = nn_distances(*t, *t, /*exclude_self=*/true);
  const std::vector<double> d_st = nn_distances(*s, *t);
  const std::vector<double> d_ss = nn_distances(*s, *s, /*exclude_self=*/true);
  return 0.5 * (indicator_mean(d_ts, d_tt) + indicator_mean(d_st, d_ss));
}

NnaaResult nnaa_privacy_loss(const EncodedMatrix& train, const EncodedMatrix& test,
                             const EncodedMatrix& synth, std::size_t n_repetitions,
                             std::uint64_t seed) {
  if (n_repetitions == 0) throw std::invalid_argument("nnaa_privacy_loss: n_repetitions must be >= 1");
  const std::size_t m = std::min({train.n_rows, test.n_rows, synth.n_rows});
  if (m < 2) throw std::invalid_argument("nnaa_privacy_loss: insufficient rows");

  auto subsample = [&](const EncodedMatrix& src, std::uint64_t stream) {
    if (src.n_rows == m) return src;
    auto rng = make_rng(seed, stream);
    return select_rows(src, sample_without_replacement(src.n_rows, m, rng));
  };

  NnaaResult res;
  res.n_repetitions = n_repetitions;
  res.seed = seed;
  double train_sum = 0.0, test_sum = 0.0;
  for (std::size_t rep = 0; rep < n_repetitions; ++rep) {
    // independent synthetic samples A1/A2 for the two expectations
    const EncodedMatrix train_m = subsample(train, 4 * rep + 0);
    const EncodedMatrix test_m = subsample(test, 4 * rep + 1);
    const EncodedMatrix synth_a1 = subsample(synth, 4 * rep + 2);
    const EncodedMatrix synth_a2 = subsample(synth, 4 * rep + 3);
    train_sum += nnaa(train_m, synth_a1);
    test_sum += nnaa(test_m, synth_a2);
  }
  res.train_aa = train_sum / static_cast<double>(n_repetitions);
  res.test_aa = test_sum / static_cast<double>(n_repetitions);
  res.privacy_loss = res.test_aa - res.train_aa;
  return res;
}

}  // namespace privaudit
