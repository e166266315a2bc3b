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

#ifndef PRIVAUDIT_METRICS_HPP
#define PRIVAUDIT_METRICS_HPP

#include <cstdint>
#include <vector>

#include "privaudit/dataset.hpp"
#include "privaudit/nn_engine.hpp"

namespace privaudit {

struct DistanceSummary {
  double median = 0.0;
  double p5 = 0.0;
  double mean = 0.0;
  double min = 0.0;
  std::size_t n = 0;
};

DistanceSummary summarize(std::vector<double> values);

/// Row subset of an already encoded matrix (clamp/missing counters carried over).
EncodedMatrix select_rows(const EncodedMatrix& m, std::span<const std::size_t> rows);

// Comparison thresholds for the suite verdicts; the underlying comparisons
// have no canonical cut-offs, so these are configurable and echoed in reports.
struct MetricThresholds {
  double nndr_tau = 0.05;       // absolute median-difference tolerance
  double dcr_share_tau = 0.0;   // slack above the 0.5 share-closer bound
};

// ---- Identical Match Share -------------------------------------------------

/// Fraction of `other` rows whose canonical full-row tuple appears in `train`.
double exact_match_share(const Table& train, const Table& other);

struct ImsResult {
  double train_synth_share = 0.0;
  double train_test_share = 0.0;
  bool pass = false;  // train_synth_share <= train_test_share
};

ImsResult ims_test(const Table& train, const Table& test, const Table& synth);

// ---- Distance to Closest Record ---------------------------------------------

// Nearest-neighbor distance of each `queries` row against `reference`,
// summarized. `within` treats the call as a self-comparison (same matrix on
// both sides, self excluded).
DistanceSummary dcr(const EncodedMatrix& queries, const EncodedMatrix& reference,
                    bool within = false);

struct DcrVerdicts {
  bool train_further_than_self = false;  // train-train median < train-synth median
  bool no_model_collapse = false;        // within-synth median >= within-real median
  bool share_closer_ok = false;          // share_closer_to_train <= 0.5 (+ tau)
};

struct DcrReport {
  DistanceSummary train_synth;
  DistanceSummary train_train;
  DistanceSummary within_real;
  DistanceSummary within_synth;
  DistanceSummary holdout_synth;
  double share_closer_to_train = 0.0;  // strictly closer; ties count as holdout
  DcrVerdicts verdicts;
};

DcrReport dcr_suite(const EncodedMatrix& train, const EncodedMatrix& holdout,
                    const EncodedMatrix& synth, const MetricThresholds& thr = {});

// ---- Nearest Neighbor Distance Ratio ----------------------------------------

// Per query, ratio of nearest to second-nearest reference distance, in [0,1].
// Degenerate cases: second distance ~0 -> 1.0 (duplicated reference rows);
// first ~0 with distinct second -> 0.0 (exact hit on a lone record).
DistanceSummary nndr(const EncodedMatrix& queries, const EncodedMatrix& reference,
                     bool self_mode = false);

struct NndrVerdicts {
  bool holdout_comparable = false;  // |train-synth - holdout-synth| median diff <= tau
  bool leak_flag = false;           // train side significantly higher
  bool fidelity_loss_flag = false;  // train side significantly lower
  bool no_model_collapse = false;   // synth-synth median within tau of train-train
};

struct NndrReport {
  DistanceSummary train_synth;
  DistanceSummary holdout_synth;
  DistanceSummary train_train;
  DistanceSummary synth_synth;
  NndrVerdicts verdicts;
  double tau = 0.05;
};

NndrReport nndr_suite(const EncodedMatrix& train, const EncodedMatrix& holdout,
                      const EncodedMatrix& synth, const MetricThresholds& thr = {});

// ---- Nearest Neighbor Adversarial Accuracy ----------------------------------

// AA = 1/2 (mean 1(d_TS > d_TT) + mean 1(d_ST > d_SS)), within-set distances
// self-excluded, ties count as 0. Unequal sizes are subsampled to the
// smaller side with `seed`.
double nnaa(const EncodedMatrix& target, const EncodedMatrix& source, std::uint64_t seed = 0);

struct NnaaResult {
  double train_aa = 0.0;
  double test_aa = 0.0;
  double privacy_loss = 0.0;  // test_aa - train_aa
  std::size_t n_repetitions = 0;
  std::uint64_t seed = 0;
};

NnaaResult nnaa_privacy_loss(const EncodedMatrix& train, const EncodedMatrix& test,
                             const EncodedMatrix& synth, std::size_t n_repetitions,
                             std::uint64_t seed);

}  // namespace privaudit

#endif  // PRIVAUDIT_METRICS_HPP
