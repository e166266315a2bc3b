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

#ifndef PRIVAUDIT_ATTACKS_HPP
#define PRIVAUDIT_ATTACKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "privaudit/dataset.hpp"

namespace privaudit {

// ---- Distance-based membership inference (no-box) ---------------------------

struct MiaConfig {
  double holdout_fraction = 0.05;  // used when the caller still has to split
  std::vector<double> train_sample_fractions{1.0, 0.5};
  // Thresholds are quantiles of each trial's own attack-distance
  // distribution, so they adapt to data scale.
  std::vector<double> threshold_quantiles{0.05, 0.1, 0.25};
  std::size_t n_trials = 5;  // per (fraction, quantile) combination
  std::uint64_t seed = 0;
};

enum class MiaGrade { Excellent, VeryGood, Good, Moderate, Poor };

const char* to_string(MiaGrade g);
MiaGrade grade_from_composite(double composite);

struct MiaTrialResult {
  double sample_fraction = 0.0;
  double threshold_quantile = 0.0;
  double threshold = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;  // 0 when tp+fp == 0
  double accuracy = 0.0;
};

struct MiaReport {
  std::vector<MiaTrialResult> trials;
  double avg_precision = 0.0;
  double avg_accuracy = 0.0;
  double composite_score = 0.0;  // (avg_precision + avg_accuracy) / 2
  MiaGrade grade = MiaGrade::Excellent;
  std::uint64_t seed = 0;
};

struct AttackSet {
  Table records;
  std::vector<std::uint8_t> is_member;  // parallel to records' rows
};

// Balanced attack set: a seeded holdout sample (non-members) plus an
// equal-sized seeded sample drawn from a `fraction`-sized training pool
// (members), deterministically shuffled.
AttackSet mia_build_attack_set(const Table& train, const Table& holdout, double fraction,
                               std::uint64_t seed);

MiaReport mia_run(const Table& train, const Table& holdout, const Table& synth,
                  const MiaConfig& cfg);

// ---- KNN-based attribute inference -------------------------------------------

struct AiaConfig {
  // Fixed mode: these columns are the quasi-identifiers. Empty list selects
  // random mode, where every attack record draws `random_m` QID columns.
  std::vector<std::string> fixed_qids;
  std::size_t random_m = 0;
  std::size_t k = 5;
  double numeric_match_tolerance = 0.1;  // fraction of the real column range
  std::size_t n_attack_records = 0;      // 0: 20% of real rows, capped at 5000
  std::uint64_t seed = 0;

  bool random_mode() const { return fixed_qids.empty(); }
};

// Per column: mode for categoricals (ties toward the lexicographically
// smallest value), mean for numerics; missing cells excluded, all-missing
// predicts missing. Returns a one-row table.
Table aia_aggregate_neighbors(const Table& neighbors);

struct AiaColumnResult {
  std::string column;
  double accuracy = 0.0;
  double entropy_weight = 0.0;
  std::size_t n_evaluated = 0;
};

struct AiaReport {
  std::vector<AiaColumnResult> per_column;
  double overall_unweighted = 0.0;
  double overall_entropy_weighted = 0.0;
  std::uint64_t seed = 0;
};

AiaReport aia_run(const Table& real, const Table& synth, const AiaConfig& cfg);

}  // namespace privaudit

#endif  // PRIVAUDIT_ATTACKS_HPP
