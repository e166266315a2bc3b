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

#include <algorithm>

#include "fixtures.hpp"
#include "privaudit/baselines.hpp"
#include "privaudit/filters.hpp"
#include "privaudit/metrics.hpp"
#include "privaudit/rng.hpp"

using namespace privaudit;
using privaudit::testing::mixture_spec;

TEST_CASE("similarity_filter removes exact train copies") {
  Table train = sample_population(mixture_spec(300, 1));
  Table synth = sample_population(mixture_spec(290, 2));
  // plant ten exact train copies
  std::vector<std::size_t> copies{0, 5, 10, 15, 20, 25, 30, 35, 40, 45};
  Table planted = train.select_rows(copies);
  for (std::size_t c = 0; c < synth.n_cols(); ++c) {
    auto& dst = synth.cols[c];
    const auto& src = planted.cols[c];
    dst.nums.insert(dst.nums.end(), src.nums.begin(), src.nums.end());
    dst.cats.insert(dst.cats.end(), src.cats.begin(), src.cats.end());
    dst.miss.insert(dst.miss.end(), src.miss.begin(), src.miss.end());
  }

  FilterResult res = similarity_filter(synth, train);
  CHECK(res.threshold_used > 0.0);
  CHECK(res.removed_indices.size() >= 10);
  CHECK(exact_match_share(train, res.filtered) == 0.0);
  CHECK(std::is_sorted(res.removed_indices.begin(), res.removed_indices.end()));

  // post-filter min train-synth distance respects the resolved threshold
  EncoderStats stats = fit_encoder(train);
  DistanceSummary after = dcr(encode(res.filtered, stats), encode(train, stats));
  CHECK(after.min >= res.threshold_used);
}

TEST_CASE("similarity_filter threshold 0 removes nothing") {
  Table train = sample_population(mixture_spec(100, 3));
  FilterResult res = similarity_filter(gen_copy(train), train, AbsoluteThreshold{0.0});
  CHECK(res.removed_indices.empty());  // strict inequality at the boundary
  CHECK(res.filtered.n_rows() == train.n_rows());
}

TEST_CASE("similarity_filter is idempotent at the resolved threshold") {
  Table train = sample_population(mixture_spec(300, 4));
  Table synth = sample_population(mixture_spec(300, 5));
  FilterResult first = similarity_filter(synth, train);
  FilterResult second =
      similarity_filter(first.filtered, train, AbsoluteThreshold{first.threshold_used});
  CHECK(second.removed_indices.empty());
}

TEST_CASE("filters preserve surviving row order") {
  Table train = sample_population(mixture_spec(200, 6));
  Table synth = sample_population(mixture_spec(200, 7));
  FilterResult res = outlier_filter(synth, train, 5, 0.9);
  std::size_t prev = 0;
  bool first = true;
  std::size_t removed_ptr = 0;
  for (std::size_t i = 0; i < synth.n_rows(); ++i) {
    if (removed_ptr < res.removed_indices.size() && res.removed_indices[removed_ptr] == i) {
      ++removed_ptr;
      continue;
    }
    const std::size_t out_row = i - removed_ptr;
    CHECK(res.filtered.row_key(out_row) == synth.row_key(i));
    if (!first) CHECK(i > prev);
    prev = i;
    first = false;
  }
}

TEST_CASE("outlier_filter removes a far-out synthetic row") {
  Table train = sample_population(mixture_spec(300, 8));
  Table synth = sample_population(mixture_spec(50, 9));
  // push one synthetic row far outside the train hull on every numeric column
  for (std::size_t c = 0; c < 3; ++c) synth.cols[c].nums[0] = 1e6;
  FilterResult res = outlier_filter(synth, train, 5, 0.99);
  CHECK(std::find(res.removed_indices.begin(), res.removed_indices.end(), 0) !=
        res.removed_indices.end());
}

TEST_CASE("outlier_filter on a train subsample removes about 1 - q") {
  Table train = sample_population(mixture_spec(2000, 10));
  auto rng = make_rng(11, 0);
  Table synth = train.select_rows(sample_without_replacement(train.n_rows(), 1000, rng));
  FilterResult res = outlier_filter(synth, train, 5, 0.99);
  const double removed_share =
      static_cast<double>(res.removed_indices.size()) / static_cast<double>(synth.n_rows());
  CHECK(removed_share <= 0.02);
}

TEST_CASE("outlier_filter empty synth is a no-op") {
  Table train = sample_population(mixture_spec(100, 12));
  Table empty = train.select_rows(std::vector<std::size_t>{});
  FilterResult res = outlier_filter(empty, train);
  CHECK(res.filtered.n_rows() == 0);
  CHECK(res.removed_indices.empty());
}

TEST_CASE("filter validation") {
  Table train = sample_population(mixture_spec(10, 13));
  CHECK_THROWS(outlier_filter(train, train, 10, 0.99));  // k too large
  CHECK_THROWS(similarity_filter(train, train, QuantileThreshold{1.5}));
  Table other = privaudit::testing::table_from_csv("zz\n1\n");
  CHECK_THROWS(similarity_filter(other, train));
}
