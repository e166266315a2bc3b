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

#include "privaudit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "privaudit/rng.hpp"

namespace privaudit {

namespace {

bool sums_to_one(const std::vector<double>& v) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  return std::abs(s - 1.0) <= 1e-9;
}

std::size_t pick_weighted(const std::vector<double>& weights, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u <= 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace

void PopulationSpec::validate() const {
  if (numeric_names.empty() && categoricals.empty())
    throw std::invalid_argument("population spec: no columns");
  if (!numeric_names.empty() && components.empty())
    throw std::invalid_argument("population spec: numeric columns need mixture components");
  std::vector<double> weights;
  for (const auto& comp : components) {
    if (comp.mean.size() != numeric_names.size() || comp.stddev.size() != numeric_names.size())
      throw std::invalid_argument("population spec: component dimension mismatch");
    for (double s : comp.stddev)
      if (s < 0.0) throw std::invalid_argument("population spec: negative stddev");
    weights.push_back(comp.weight);
  }
  if (!components.empty() && !sums_to_one(weights))
    throw std::invalid_argument("population spec: component weights must sum to 1");
  for (const auto& cat : categoricals) {
    if (cat.name.empty()) throw std::invalid_argument("population spec: unnamed categorical");
    if (cat.vocabulary.empty() || cat.vocabulary.size() != cat.probabilities.size())
      throw std::invalid_argument("population spec: categorical vocabulary/probability mismatch");
    if (!sums_to_one(cat.probabilities))
      throw std::invalid_argument("population spec: categorical probabilities must sum to 1");
  }
}

Table sample_population(const PopulationSpec& spec) {
  spec.validate();
  Table t;
  for (const auto& name : spec.numeric_names) t.schema.columns.push_back({name, ColumnKind::Numeric});
  for (const auto& cat : spec.categoricals)
    t.schema.columns.push_back({cat.name, ColumnKind::Categorical});
  t.schema.validate();
  t.cols.resize(t.schema.size());

  std::vector<double> weights;
  for (const auto& comp : spec.components) weights.push_back(comp.weight);

  auto rng = make_rng(spec.seed, 0x9075);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n_num = spec.numeric_names.size();
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    if (n_num > 0) {
      const auto& comp = spec.components[pick_weighted(weights, rng)];
      for (std::size_t c = 0; c < n_num; ++c) {
        t.cols[c].nums.push_back(comp.mean[c] + comp.stddev[c] * gauss(rng));
        t.cols[c].miss.push_back(0);
      }
    }
    for (std::size_t i = 0; i < spec.categoricals.size(); ++i) {
      const auto& cat = spec.categoricals[i];
      auto& col = t.cols[n_num + i];
      col.cats.push_back(cat.vocabulary[pick_weighted(cat.probabilities, rng)]);
      col.miss.push_back(0);
    }
  }
  // n_rows == 0 still needs the miss vectors sized consistently (they are:
  // empty), schema intact
  return t;
}

Table gen_copy(const Table& train) { return train; }

Table gen_perturb(const Table& train, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("gen_perturb: sigma must be nonnegative");
  Table out = train;
  if (sigma == 0.0) return out;

  auto rng = make_rng(seed, 0x9e27);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double resample_p = std::min(1.0, sigma);

  for (std::size_t c = 0; c < train.n_cols(); ++c) {
    auto& col = out.cols[c];
    if (train.schema.columns[c].kind == ColumnKind::Numeric) {
      // noise scale: sigma * empirical column std over non-missing cells
      double sum = 0.0, sum2 = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < train.n_rows(); ++r) {
        if (train.is_missing(r, c)) continue;
        sum += train.num_at(r, c);
        sum2 += train.num_at(r, c) * train.num_at(r, c);
        ++n;
      }
      const double mean = n ? sum / static_cast<double>(n) : 0.0;
      const double var = n ? std::max(0.0, sum2 / static_cast<double>(n) - mean * mean) : 0.0;
      const double scale = sigma * std::sqrt(var);
      for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (!col.miss[r]) col.nums[r] += scale * gauss(rng);
    } else {
      // marginal pool of non-missing values
      std::vector<const std::string*> pool;
      for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (!train.is_missing(r, c)) pool.push_back(&train.cat_at(r, c));
      if (pool.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (std::size_t r = 0; r < train.n_rows(); ++r)
        if (!col.miss[r] && unit(rng) < resample_p) col.cats[r] = *pool[pick(rng)];
    }
  }
  return out;
}

Table gen_independent(const Table& train, std::uint64_t seed) {
  if (train.n_rows() == 0) throw std::invalid_argument("gen_independent: empty table");
  Table out;
  out.schema = train.schema;
  out.cols.resize(train.n_cols());
  auto rng = make_rng(seed, 0x1d0b);
  std::uniform_int_distribution<std::size_t> pick(0, train.n_rows() - 1);
  for (std::size_t c = 0; c < train.n_cols(); ++c) {
    const bool numeric = train.schema.columns[c].kind == ColumnKind::Numeric;
    auto& col = out.cols[c];
    for (std::size_t r = 0; r < train.n_rows(); ++r) {
      const std::size_t src = pick(rng);
      col.miss.push_back(train.cols[c].miss[src]);
      if (numeric)
        col.nums.push_back(train.cols[c].nums[src]);
      else
        col.cats.push_back(train.cols[c].cats[src]);
    }
  }
  return out;
}

}  // namespace privaudit
