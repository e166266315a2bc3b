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

#ifndef PRIVAUDIT_BASELINES_HPP
#define PRIVAUDIT_BASELINES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "privaudit/dataset.hpp"

namespace privaudit {

// Gaussian-mixture population over numeric columns plus independent
// multinomial categorical columns. Drives the regime fixtures (copier,
// ideal, overfit, underfit) used by tests and demos.
struct MixtureComponent {
  std::vector<double> mean;    // one entry per numeric column
  std::vector<double> stddev;  // diagonal; one entry per numeric column
  double weight = 1.0;
};

struct CategoricalSpec {
  std::string name;
  std::vector<std::string> vocabulary;
  std::vector<double> probabilities;
};

struct PopulationSpec {
  std::vector<std::string> numeric_names;
  std::vector<MixtureComponent> components;
  std::vector<CategoricalSpec> categoricals;
  std::size_t n_rows = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

Table sample_population(const PopulationSpec& spec);

/// Maximal-leak baseline: the synthetic table is the training table.
Table gen_copy(const Table& train);

// Numeric cells get Gaussian noise of sigma * column std; categorical cells
// are resampled from the train marginals with probability min(1, sigma).
// sigma = 0 reproduces the input exactly.
Table gen_perturb(const Table& train, double sigma, std::uint64_t seed);

// Column-independent bootstrap: marginals preserved, cross-column structure
// destroyed.
Table gen_independent(const Table& train, std::uint64_t seed);

}  // namespace privaudit

#endif  // PRIVAUDIT_BASELINES_HPP
