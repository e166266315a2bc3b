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

#include <random>

#include "fixtures.hpp"
#include "privaudit/nn_engine.hpp"

using namespace privaudit;
using privaudit::testing::random_encoded;

namespace {

EncodedMatrix matrix_1d(std::vector<double> values) {
  EncodedMatrix m;
  m.n_rows = values.size();
  m.n_dims = 1;
  m.data = std::move(values);
  return m;
}

}  // namespace

TEST_CASE("knn hand-computed 1-D") {
  EncodedMatrix q = matrix_1d({0.0});
  EncodedMatrix ref = matrix_1d({0.0, 3.0});
  NeighborResult r = knn(q, ref, 2);
  CHECK(r.neighbors[0][0].index == 0);
  CHECK(r.neighbors[0][0].distance == 0.0);
  CHECK(r.neighbors[0][1].index == 1);
  CHECK(r.neighbors[0][1].distance == 3.0);
}

TEST_CASE("knn self-query with exclusion") {
  EncodedMatrix m = matrix_1d({0.0, 1.0, 5.0});
  NeighborResult r = knn(m, m, 1, /*exclude_self=*/true);
  CHECK(r.neighbors[0][0].distance == 1.0);
  CHECK(r.neighbors[1][0].distance == 1.0);
  CHECK(r.neighbors[2][0].distance == 4.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.neighbors[i][0].index != i);
}

TEST_CASE("knn self-query without exclusion returns self at distance 0") {
  EncodedMatrix m = random_encoded(50, 4, 9);
  NeighborResult r = knn(m, m, 1);
  for (std::size_t i = 0; i < m.n_rows; ++i) {
    CHECK(r.neighbors[i][0].index == i);
    CHECK(r.neighbors[i][0].distance == 0.0);
  }
}

TEST_CASE("knn errors") {
  EncodedMatrix a = matrix_1d({0.0, 1.0});
  EncodedMatrix b = random_encoded(2, 2, 1);
  CHECK_THROWS(knn(a, b, 1));                       // dim mismatch
  CHECK_THROWS(knn(a, a, 3));                       // k too large
  CHECK_THROWS(knn(a, a, 2, /*exclude_self=*/true));  // k too large after exclusion
}

TEST_CASE("tree path equals brute force on randomized instances") {
  std::mt19937_64 seeds(123);
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 20 + seeds() % 200;
    const std::size_t dims = 1 + seeds() % 8;
    const std::size_t k = 1 + seeds() % 3;
    EncodedMatrix ref = random_encoded(n, dims, seeds());
    EncodedMatrix q = random_encoded(30, dims, seeds());
    NeighborResult tree = knn(q, ref, k);
    NeighborResult brute = knn_brute_force(q, ref, k);
    for (std::size_t i = 0; i < q.n_rows; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(tree.neighbors[i][j].distance == brute.neighbors[i][j].distance);
        CHECK(tree.neighbors[i][j].index == brute.neighbors[i][j].index);
      }
  }
}

TEST_CASE("tie-break goes to the lower reference index") {
  // duplicated reference rows: both paths must return index 0 first
  EncodedMatrix ref = matrix_1d({2.0, 2.0, 2.0});
  EncodedMatrix q = matrix_1d({0.0});
  for (const NeighborResult& r : {knn(q, ref, 3), knn_brute_force(q, ref, 3)}) {
    CHECK(r.neighbors[0][0].index == 0);
    CHECK(r.neighbors[0][1].index == 1);
    CHECK(r.neighbors[0][2].index == 2);
  }
}

TEST_CASE("singleton symmetry") {
  std::mt19937_64 seeds(77);
  for (int iter = 0; iter < 30; ++iter) {
    EncodedMatrix a = random_encoded(1, 5, seeds());
    EncodedMatrix b = random_encoded(1, 5, seeds());
    CHECK(knn(a, b, 1).neighbors[0][0].distance == knn(b, a, 1).neighbors[0][0].distance);
  }
}

TEST_CASE("appending the query to the reference yields distance 0") {
  std::mt19937_64 seeds(31);
  EncodedMatrix ref = random_encoded(40, 3, seeds());
  EncodedMatrix q = random_encoded(1, 3, seeds());
  EncodedMatrix extended = ref;
  extended.n_rows += 1;
  extended.data.insert(extended.data.end(), q.data.begin(), q.data.end());
  CHECK(knn(q, extended, 1).neighbors[0][0].distance == 0.0);
}

TEST_CASE("column entropy") {
  Table t = privaudit::testing::table_from_csv("c,d,q\na,u,1\na,v,2\na,u,3\na,v,4\n");
  CHECK(column_entropy(t, "c").bits == 0.0);                     // constant
  CHECK(column_entropy(t, "d").bits == doctest::Approx(1.0));    // 50/50 binary
  CHECK_THROWS(column_entropy(t, "nope"));

  Table four = privaudit::testing::table_from_csv("c\na\nb\nc\nd\n");
  CHECK(column_entropy(four, "c").bits == doctest::Approx(2.0));  // 4 equal categories
}

TEST_CASE("numeric entropy is binned and bounded") {
  auto spec = privaudit::testing::mixture_spec(500, 21);
  Table t = sample_population(spec);
  const double bits = column_entropy(t, "x").bits;
  CHECK(bits > 0.0);
  CHECK(bits <= 5.0);  // at most 32 bins
}
