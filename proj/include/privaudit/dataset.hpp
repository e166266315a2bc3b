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

#ifndef PRIVAUDIT_DATASET_HPP
#define PRIVAUDIT_DATASET_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace privaudit {

enum class ColumnKind { Numeric, Categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind;
  bool operator==(const ColumnSpec&) const = default;
};

/// Ordered column layout shared by a Table and the encoder fitted on it.
struct Schema {
  std::vector<ColumnSpec> columns;

  bool operator==(const Schema&) const = default;
  std::size_t size() const { return columns.size(); }
  // Throws std::out_of_range if the column does not exist.
  std::size_t index_of(const std::string& name) const;
  std::optional<std::size_t> find(const std::string& name) const;
  void validate() const;  // unique non-empty names, >= 1 column
};

// Columnar cell storage. Numeric columns fill `nums`, categorical fill
// `cats`; `miss` is always n_rows long.
struct ColumnData {
  std::vector<double> nums;
  std::vector<std::string> cats;
  std::vector<std::uint8_t> miss;
};

// Shortest round-trip decimal rendering, so 1.0 and 1.00 compare equal
// after canonicalization.
std::string canonical_numeric(double v);

class Table {
 public:
  Schema schema;
  std::vector<ColumnData> cols;

  std::size_t n_rows() const { return cols.empty() ? 0 : cols[0].miss.size(); }
  std::size_t n_cols() const { return schema.size(); }

  bool is_missing(std::size_t row, std::size_t col) const { return cols[col].miss[row] != 0; }
  double num_at(std::size_t row, std::size_t col) const { return cols[col].nums[row]; }
  const std::string& cat_at(std::size_t row, std::size_t col) const { return cols[col].cats[row]; }

  /// Canonical string form of one cell ("" marks missing via a sentinel).
  std::string cell_canonical(std::size_t row, std::size_t col) const;
  /// Canonical full-row tuple key usable for exact-match hashing.
  std::string row_key(std::size_t row) const;
  /// Canonical tuple key over a subset of columns.
  std::string row_key(std::size_t row, std::span<const std::size_t> col_idx) const;

  Table select_rows(std::span<const std::size_t> rows) const;
};

struct CsvOptions {
  char delimiter = ',';
  std::string missing_marker;  // default: empty cell is missing
};

Table load_csv(const std::string& path, const std::optional<Schema>& schema_hint = std::nullopt,
               const CsvOptions& opts = {});
Table parse_csv(const std::string& text, const std::optional<Schema>& schema_hint = std::nullopt,
                const CsvOptions& opts = {});
void write_csv(const Table& table, const std::string& path, const CsvOptions& opts = {});

struct SplitConfig {
  double holdout_fraction = 0.05;
  std::uint64_t seed = 0;
};

// Disjoint seeded partition; |holdout| = round(fraction * n) clamped to [1, n-1].
std::pair<Table, Table> split_holdout(const Table& table, const SplitConfig& cfg);

struct NumericStats {
  double min = 0.0;
  double max = 0.0;
};

struct EncoderStats {
  Schema schema;
  std::vector<NumericStats> numeric;             // indexed by column, valid for numeric cols
  std::vector<std::vector<std::string>> vocab;   // indexed by column, valid for categorical cols
  std::vector<std::size_t> dim_offset;           // first encoded dimension of each column
  std::size_t n_dims = 0;
};

struct EncodedMatrix {
  std::size_t n_rows = 0;
  std::size_t n_dims = 0;
  std::vector<double> data;  // row-major
  std::size_t clamp_count = 0;
  std::size_t missing_count = 0;

  const double* row(std::size_t r) const { return data.data() + r * n_dims; }
};

// Min-max stats per numeric column and sorted vocabularies per categorical
// column, fitted on `train`. `column_subset` restricts the encoder to those
// columns (used for quasi-identifier subspaces).
EncoderStats fit_encoder(const Table& train);
EncoderStats fit_encoder(const Table& train, std::span<const std::size_t> column_subset);

// Encodes rows into the shared metric space: scaled numerics in [0,1]
// (out-of-fit values clamped to [-0.5, 1.5] and counted), one-hot
// categoricals scaled by 1/sqrt(2). Columns are matched by name, so stats
// fitted on a column subset apply to any table carrying those columns.
EncodedMatrix encode(const Table& table, const EncoderStats& stats);

// Keeps the first occurrence of each canonical full-row tuple.
std::pair<Table, std::size_t> dedup_exact(const Table& table);

}  // namespace privaudit

#endif  // PRIVAUDIT_DATASET_HPP
