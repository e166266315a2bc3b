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

#ifndef PRIVAUDIT_FILTERS_HPP
#define PRIVAUDIT_FILTERS_HPP

#include <string>
#include <variant>
#include <vector>

#include "privaudit/dataset.hpp"

namespace privaudit {

enum class RemovalReason { TooSimilar, Outlier };

struct FilterResult {
  Table filtered;
  std::vector<std::size_t> removed_indices;  // sorted, indices into the input
  RemovalReason removal_reason;
  double threshold_used = 0.0;
};

struct AbsoluteThreshold {
  double value;
};
struct QuantileThreshold {
  double q;  // resolved against the train-train within-set NN distances
};
using SimilarityThreshold = std::variant<AbsoluteThreshold, QuantileThreshold>;

// Removes synthetic rows whose nearest-train distance is strictly below the
// threshold. Default: the 0.01 quantile of train's own within-set NN
// distances. Both filters share the encoder fitted on `train`.
FilterResult similarity_filter(const Table& synth, const Table& train,
                               const SimilarityThreshold& threshold = QuantileThreshold{0.01});

// Outlier score = distance to the k-th nearest train row; removes synthetic
// rows scoring above the `quantile` of train rows' own (self-excluded)
// k-th-NN scores.
FilterResult outlier_filter(const Table& synth, const Table& train, std::size_t k = 5,
                            double quantile = 0.99);

// Filters use training records directly; any DP guarantee on the generator
// does not survive them. Surfaced as a report warning.
inline constexpr const char* kFilterDpWarning =
    "privacy filters use training records and void any differential-privacy guarantee";

}  // namespace privaudit

#endif  // PRIVAUDIT_FILTERS_HPP
