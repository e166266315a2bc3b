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

#include "privaudit/anonymity.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace privaudit {

void QuasiIdentifierSet::validate(const Schema& schema) const {
  if (qid_columns.empty())
    throw std::invalid_argument("quasi-identifier set must name at least one column");
  std::unordered_set<std::string> qid_set;
  for (const auto& q : qid_columns) {
    schema.index_of(q);  // throws on unknown column
    if (!qid_set.insert(q).second) throw std::invalid_argument("duplicate QID column: " + q);
  }
  for (const auto& s : sensitive_columns) {
    schema.index_of(s);
    if (qid_set.count(s))
      throw std::invalid_argument("column '" + s + "' is both QID and sensitive");
  }
}

namespace {

std::vector<std::size_t> column_indices(const Schema& schema,
                                        const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(schema.index_of(n));
  return idx;
}

// row index lists per QID equivalence class
std::unordered_map<std::string, std::vector<std::size_t>> group_by_qid(
    const Table& table, const std::vector<std::size_t>& qid_idx) {
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < table.n_rows(); ++r)
    groups[table.row_key(r, qid_idx)].push_back(r);
  return groups;
}

}  // namespace

AnonymityResult k_anonymity(const Table& table, const QuasiIdentifierSet& qids) {
  if (table.n_rows() == 0) throw std::invalid_argument("k_anonymity: empty table");
  qids.validate(table.schema);
  const auto qid_idx = column_indices(table.schema, qids.qid_columns);
  const auto groups = group_by_qid(table, qid_idx);

  AnonymityResult res;
  res.k = table.n_rows();
  for (const auto& [_, rows] : groups) {
    res.k = std::min(res.k, rows.size());
    ++res.class_size_histogram[rows.size()];
  }
  for (const auto& s : qids.sensitive_columns) res.l[s] = l_diversity(table, qids, s);
  return res;
}

std::size_t l_diversity(const Table& table, const QuasiIdentifierSet& qids,
                        const std::string& sensitive) {
  if (table.n_rows() == 0) throw std::invalid_argument("l_diversity: empty table");
  qids.validate(table.schema);
  for (const auto& q : qids.qid_columns)
    if (q == sensitive)
      throw std::invalid_argument("sensitive column '" + sensitive + "' is a QID");
  const std::size_t s_idx = table.schema.index_of(sensitive);
  const auto qid_idx = column_indices(table.schema, qids.qid_columns);
  const auto groups = group_by_qid(table, qid_idx);

  std::size_t l = table.n_rows();
  for (const auto& [_, rows] : groups) {
    std::unordered_set<std::string> distinct;
    for (std::size_t r : rows) distinct.insert(table.cell_canonical(r, s_idx));
    l = std::min(l, distinct.size());
  }
  return l;
}

}  // namespace privaudit
