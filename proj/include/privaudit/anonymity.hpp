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

#ifndef PRIVAUDIT_ANONYMITY_HPP
#define PRIVAUDIT_ANONYMITY_HPP

#include <map>
#include <string>
#include <vector>

#include "privaudit/dataset.hpp"

namespace privaudit {

struct QuasiIdentifierSet {
  std::vector<std::string> qid_columns;
  std::vector<std::string> sensitive_columns;

  // qid non-empty, both subsets of schema, disjoint
  void validate(const Schema& schema) const;
};

struct AnonymityResult {
  std::size_t k = 0;                                // min equivalence-class size
  std::map<std::size_t, std::size_t> class_size_histogram;  // size -> #classes
  std::map<std::string, std::size_t> l;             // per sensitive column: l-diversity
};

// Rows grouped by canonical QID tuple; k = smallest group. Numeric QIDs
// compare by canonical rendering, no binning or generalization.
AnonymityResult k_anonymity(const Table& table, const QuasiIdentifierSet& qids);

// Minimum over QID classes of distinct sensitive values in the class.
std::size_t l_diversity(const Table& table, const QuasiIdentifierSet& qids,
                        const std::string& sensitive);

}  // namespace privaudit

#endif  // PRIVAUDIT_ANONYMITY_HPP
