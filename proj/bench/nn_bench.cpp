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

// Compares the serial brute-force reference against the parallel kd-tree
// path and checks that they agree exactly while timing both.

#include <chrono>
#include <cstdio>
#include <random>

#include "privaudit/nn_engine.hpp"

using namespace privaudit;

namespace {

EncodedMatrix random_matrix(std::size_t rows, std::size_t dims, std::uint64_t seed) {
  EncodedMatrix m;
  m.n_rows = rows;
  m.n_dims = dims;
  m.data.resize(rows * dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& v : m.data) v = unit(rng);
  return m;
}

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::stoul(argv[1]) : 20000;
  std::size_t dims = argc > 2 ? std::stoul(argv[2]) : 8;
  std::size_t k = argc > 3 ? std::stoul(argv[3]) : 5;

  const EncodedMatrix reference = random_matrix(n, dims, 1);
  const EncodedMatrix queries = random_matrix(n / 4, dims, 2);

  std::printf("rows=%zu queries=%zu dims=%zu k=%zu\n", n, queries.n_rows, dims, k);

  NeighborResult brute, tree;
  const double t_brute = time_ms([&] { brute = knn_brute_force(queries, reference, k); });
  const double t_tree = time_ms([&] { tree = knn(queries, reference, k); });

  bool equal = true;
  for (std::size_t q = 0; q < queries.n_rows && equal; ++q)
    for (std::size_t i = 0; i < k; ++i)
      if (brute.neighbors[q][i].index != tree.neighbors[q][i].index ||
          brute.neighbors[q][i].distance != tree.neighbors[q][i].distance) {
        equal = false;
        break;
      }

  std::printf("brute force (serial):   %9.2f ms\n", t_brute);
  std::printf("kd-tree (parallel):     %9.2f ms\n", t_tree);
  std::printf("speedup: %.2fx, results %s\n", t_brute / t_tree,
              equal ? "identical" : "DIFFER (bug)");
  return equal ? 0 : 1;
}
