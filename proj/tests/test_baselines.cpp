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

#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "privaudit/baselines.hpp"
#include "privaudit/metrics.hpp"

using namespace privaudit;
using privaudit::testing::mixture_spec;

namespace {

bool tables_equal(const Table& a, const Table& b) {
  if (a.schema != b.schema || a.n_rows() != b.n_rows()) return false;
  for (std::size_t r = 0; r < a.n_rows(); ++r)
    if (a.row_key(r) != b.row_key(r)) return false;
  return true;
}

}  // namespace

TEST_CASE("sample_population is deterministic and honors the schema") {
  auto spec = mixture_spec(200, 5);
  Table a = sample_population(spec);
  Table b = sample_population(spec);
  CHECK(tables_equal(a, b));
  CHECK(a.n_rows() == 200);
  CHECK(a.schema.columns.size() == 4);
  CHECK(a.schema.columns[0].name == "x");
  CHECK(a.schema.columns[0].kind == ColumnKind::Numeric);
  CHECK(a.schema.columns[3].name == "color");
  CHECK(a.schema.columns[3].kind == ColumnKind::Categorical);

  Table c = sample_population(mixture_spec(200, 6));
  CHECK_FALSE(tables_equal(a, c));
}

TEST_CASE("sample_population n = 0 keeps the schema") {
  auto spec = mixture_spec(0, 1);
  Table t = sample_population(spec);
  CHECK(t.n_rows() == 0);
  CHECK(t.n_cols() == 4);
}

TEST_CASE("zero-stddev component collapses to its mean") {
  PopulationSpec spec;
  spec.numeric_names = {"x", "y"};
  spec.components = {{{3.0, -1.0}, {0.0, 0.0}, 1.0}};
  spec.n_rows = 50;
  spec.seed = 9;
  Table t = sample_population(spec);
  for (std::size_t r = 0; r < t.n_rows(); ++r) {
    CHECK(t.num_at(r, 0) == 3.0);
    CHECK(t.num_at(r, 1) == -1.0);
  }
}

TEST_CASE("component weights hold on a large draw") {
  PopulationSpec spec;
  spec.numeric_names = {"x"};
  // well-separated components so membership is readable off the sample
  spec.components = {{{0.0}, {0.01}, 0.5}, {{100.0}, {0.01}, 0.5}};
  spec.n_rows = 10000;
  spec.seed = 17;
  Table t = sample_population(spec);
  std::size_t low = 0;
  for (std::size_t r = 0; r < t.n_rows(); ++r)
    if (t.num_at(r, 0) < 50.0) ++low;
  const double share = static_cast<double>(low) / 10000.0;
  CHECK(share > 0.48);
  CHECK(share < 0.52);
}

TEST_CASE("categorical marginals hold on a large draw") {
  Table t = sample_population(mixture_spec(10000, 23));
  const std::size_t c = t.schema.index_of("color");
  std::map<std::string, std::size_t> counts;
  for (std::size_t r = 0; r < t.n_rows(); ++r) ++counts[t.cat_at(r, c)];
  CHECK(counts["red"] > 4800);
  CHECK(counts["red"] < 5200);
  CHECK(counts["green"] > 2800);
  CHECK(counts["green"] < 3200);
  CHECK(counts["blue"] > 1800);
  CHECK(counts["blue"] < 2200);
}

TEST_CASE("population spec validation") {
  PopulationSpec bad_weights = mixture_spec(10, 1);
  bad_weights.components[0].weight = 0.9;  // sums to 1.4
  CHECK_THROWS(sample_population(bad_weights));

  PopulationSpec bad_probs = mixture_spec(10, 1);
  bad_probs.categoricals[0].probabilities = {0.5, 0.5, 0.5};
  CHECK_THROWS(sample_population(bad_probs));

  PopulationSpec ragged = mixture_spec(10, 1);
  ragged.components[0].mean.pop_back();
  CHECK_THROWS(sample_population(ragged));
}

TEST_CASE("gen_copy returns the training table verbatim") {
  Table train = sample_population(mixture_spec(100, 31));
  CHECK(tables_equal(gen_copy(train), train));
  CHECK(exact_match_share(train, gen_copy(train)) == 1.0);
}

TEST_CASE("gen_perturb sigma 0 is the identity") {
  Table train = sample_population(mixture_spec(100, 37));
  CHECK(tables_equal(gen_perturb(train, 0.0, 1), train));
}

TEST_CASE("gen_perturb small sigma stays close, large sigma drifts") {
  Table train = sample_population(mixture_spec(500, 41));
  EncoderStats stats = fit_encoder(train);
  EncodedMatrix enc_train = encode(train, stats);

  Table near = gen_perturb(train, 0.001, 2);
  Table far = gen_perturb(train, 10.0, 3);
  CHECK(tables_equal(gen_perturb(train, 0.001, 2), near));  // deterministic

  const double near_med = dcr(encode(near, stats), enc_train).median;
  const double far_med = dcr(encode(far, stats), enc_train).median;
  CHECK(near_med < 0.05);
  CHECK(far_med > near_med * 10.0);
}

TEST_CASE("gen_independent preserves marginals and breaks joints") {
  auto spec = mixture_spec(5000, 47);
  Table train = sample_population(spec);
  Table synth = gen_independent(train, 7);
  REQUIRE(synth.n_rows() == train.n_rows());

  // each column of synth is a multiset drawn from the train column: the
  // categorical shares must land near the train shares
  const std::size_t c = train.schema.index_of("color");
  std::map<std::string, double> train_share, synth_share;
  for (std::size_t r = 0; r < train.n_rows(); ++r) {
    train_share[train.cat_at(r, c)] += 1.0;
    synth_share[synth.cat_at(r, c)] += 1.0;
  }
  for (const auto& [value, count] : train_share)
    CHECK(std::abs(synth_share[value] - count) / train.n_rows() < 0.03);

  // x and y are correlated through the mixture; the bootstrap must break it
  auto corr = [](const Table& t, std::size_t a, std::size_t b) {
    double ma = 0, mb = 0;
    const double n = static_cast<double>(t.n_rows());
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
      ma += t.num_at(r, a);
      mb += t.num_at(r, b);
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t r = 0; r < t.n_rows(); ++r) {
      const double da = t.num_at(r, a) - ma;
      const double db = t.num_at(r, b) - mb;
      cov += da * db;
      va += da * da;
      vb += db * db;
    }
    return cov / std::sqrt(va * vb);
  };
  CHECK(corr(train, 0, 1) > 0.5);
  CHECK(std::abs(corr(synth, 0, 1)) < 0.1);
}

TEST_CASE("independent baseline converges toward adversarial accuracy 0.5") {
  // same population, fresh draw: the ideal generator regime
  for (std::size_t n : {std::size_t{200}, std::size_t{1000}}) {
    Table train = sample_population(mixture_spec(n, 53));
    Table synth = sample_population(mixture_spec(n, 54));
    EncoderStats stats = fit_encoder(train);
    const double aa = nnaa(encode(train, stats), encode(synth, stats), 55);
    const double slack = (n == 200) ? 0.12 : 0.06;
    CHECK(std::abs(aa - 0.5) < slack);
  }
}
