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

#include "privaudit/filters.hpp"

#include <algorithm>
#include <stdexcept>

#include "privaudit/nn_engine.hpp"
#include "privaudit/stats.hpp"

namespace privaudit {

namespace {

FilterResult keep_below(const Table& synth, const std::vector<double>& scores, double cutoff,
                        bool remove_below, RemovalReason reason) {
  FilterResult res;
  res.removal_reason = reason;
  res.threshold_used = cutoff;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < synth.n_rows(); ++i) {
    const bool remove = remove_below ? scores[i] < cutoff : scores[i] > cutoff;
    if (remove)
      res.removed_indices.push_back(i);
    else
      keep.push_back(i);
  }
  res.filtered = synth.select_rows(keep);
  return res;
}

}  // namespace

FilterResult similarity_filter(const Table& synth, const Table& train,
                               const SimilarityThreshold& threshold) {
  if (synth.schema != train.schema)
    throw std::invalid_argument("similarity_filter: schema mismatch");
  const EncoderStats stats = fit_encoder(train);
  const EncodedMatrix train_m = encode(train, stats);

  double cutoff;
  if (const auto* abs = std::get_if<AbsoluteThreshold>(&threshold)) {
    if (!(abs->value >= 0.0)) throw std::invalid_argument("similarity_filter: negative threshold");
    cutoff = abs->value;
  } else {
    const double q = std::get<QuantileThreshold>(threshold).q;
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("similarity_filter: quantile must lie in (0,1)");
    if (train.n_rows() < 2)
      throw std::invalid_argument("similarity_filter: quantile threshold needs >= 2 train rows");
    std::vector<double> within = nn_distances(train_m, train_m, /*exclude_self=*/true);
    std::sort(within.begin(), within.end());
    cutoff = quantile_sorted(within, q);
  }

  if (synth.n_rows() == 0)
    return keep_below(synth, {}, cutoff, /*remove_below=*/true, RemovalReason::TooSimilar);
  const EncodedMatrix synth_m = encode(synth, stats);
  const std::vector<double> scores = nn_distances(synth_m, train_m);
  return keep_below(synth, scores, cutoff, /*remove_below=*/true, RemovalReason::TooSimilar);
}

FilterResult outlier_filter(const Table& synth, const Table& train, std::size_t k,
                            double quantile) {
  if (synth.schema != train.schema) throw std::invalid_argument("outlier_filter: schema mismatch");
  if (k == 0) throw std::invalid_argument("outlier_filter: k must be positive");
  if (train.n_rows() < k + 1)
    throw std::invalid_argument("outlier_filter: train needs at least k+1 rows");
  if (!(quantile > 0.0 && quantile < 1.0))
    throw std::invalid_argument("outlier_filter: quantile must lie in (0,1)");

  const EncoderStats stats = fit_encoder(train);
  const EncodedMatrix train_m = encode(train, stats);

  // train rows' own k-th-NN scores define the cutoff
  const NeighborResult train_nn = knn(train_m, train_m, k, /*exclude_self=*/true);
  std::vector<double> train_scores;
  train_scores.reserve(train.n_rows());
  for (const auto& list : train_nn.neighbors) train_scores.push_back(list[k - 1].distance);
  std::sort(train_scores.begin(), train_scores.end());
  const double cutoff = quantile_sorted(train_scores, quantile);

  if (synth.n_rows() == 0)
    return keep_below(synth, {}, cutoff, /*remove_below=*/false, RemovalReason::Outlier);
  const EncodedMatrix synth_m = encode(synth, stats);
  const NeighborResult synth_nn = knn(synth_m, train_m, k);
  std::vector<double> scores;
  scores.reserve(synth.n_rows());
  for (const auto& list : synth_nn.neighbors) scores.push_back(list[k - 1].distance);
  return keep_below(synth, scores, cutoff, /*remove_below=*/false, RemovalReason::Outlier);
}

}  // namespace privaudit
