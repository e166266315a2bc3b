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

#ifndef PRIVAUDIT_TESTS_FIXTURES_HPP
#define PRIVAUDIT_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "privaudit/baselines.hpp"
#include "privaudit/dataset.hpp"

namespace privaudit::testing {

inline Table table_from_csv(const std::string& csv, const CsvOptions& opts = {}) {
  return parse_csv(csv, std::nullopt, opts);
}

// Two-component Gaussian mixture with one categorical column; the standard
// fixture for regime checks.
inline PopulationSpec mixture_spec(std::size_t n_rows, std::uint64_t seed) {
  PopulationSpec spec;
  spec.numeric_names = {"x", "y", "z"};
  spec.components = {
      {{0.0, 0.0, 1.0}, {1.0, 0.5, 0.25}, 0.5},
      {{4.0, 2.0, -1.0}, {0.5, 1.0, 0.5}, 0.5},
  };
  spec.categoricals = {{"color", {"red", "green", "blue"}, {0.5, 0.3, 0.2}}};
  spec.n_rows = n_rows;
  spec.seed = seed;
  return spec;
}

inline EncodedMatrix random_encoded(std::size_t rows, std::size_t dims, std::uint64_t seed) {
  EncodedMatrix m;
  m.n_rows = rows;
  m.n_dims = dims;
  m.data.resize(rows * dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& v : m.data) v = unit(rng);
  return m;
}

}  // namespace privaudit::testing

#endif  // PRIVAUDIT_TESTS_FIXTURES_HPP
