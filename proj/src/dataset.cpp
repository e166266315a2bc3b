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

#include "privaudit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "privaudit/rng.hpp"

namespace privaudit {

namespace {

constexpr double kCatScale = 0.70710678118654752440;  // 1/sqrt(2)
constexpr char kFieldSep = '\x1f';
constexpr char kMissingSentinel = '\x01';

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_numeric(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;  // from_chars rejects a leading '+'
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

std::string canonical_numeric(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::size_t Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  throw std::out_of_range("unknown column: " + name);
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  return std::nullopt;
}

void Schema::validate() const {
  if (columns.empty()) throw std::invalid_argument("schema must have at least one column");
  std::unordered_set<std::string> seen;
  for (const auto& c : columns) {
    if (c.name.empty()) throw std::invalid_argument("schema column name must be non-empty");
    if (!seen.insert(c.name).second)
      throw std::invalid_argument("duplicate schema column name: " + c.name);
  }
}

std::string Table::cell_canonical(std::size_t row, std::size_t col) const {
  if (is_missing(row, col)) return std::string(1, kMissingSentinel);
  if (schema.columns[col].kind == ColumnKind::Numeric) return canonical_numeric(num_at(row, col));
  return cat_at(row, col);
}

std::string Table::row_key(std::size_t row) const {
  std::string key;
  for (std::size_t c = 0; c < n_cols(); ++c) {
    if (c) key += kFieldSep;
    key += cell_canonical(row, c);
  }
  return key;
}

std::string Table::row_key(std::size_t row, std::span<const std::size_t> col_idx) const {
  std::string key;
  bool first = true;
  for (std::size_t c : col_idx) {
    if (!first) key += kFieldSep;
    first = false;
    key += cell_canonical(row, c);
  }
  return key;
}

Table Table::select_rows(std::span<const std::size_t> rows) const {
  Table out;
  out.schema = schema;
  out.cols.resize(n_cols());
  for (std::size_t c = 0; c < n_cols(); ++c) {
    auto& dst = out.cols[c];
    const auto& src = cols[c];
    dst.miss.reserve(rows.size());
    const bool numeric = schema.columns[c].kind == ColumnKind::Numeric;
    for (std::size_t r : rows) {
      dst.miss.push_back(src.miss[r]);
      if (numeric)
        dst.nums.push_back(src.nums[r]);
      else
        dst.cats.push_back(src.cats[r]);
    }
  }
  return out;
}

namespace {

// RFC-4180-style tokenizer: quoted fields may contain the delimiter,
// doubled quotes and newlines.
std::vector<std::vector<std::string>> tokenize_csv(const std::string& text, char delim) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (ch == delim) {
      end_field();
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_record();
    } else {
      field += ch;
      field_started = true;
    }
  }
  if (in_quotes) throw std::runtime_error("unterminated quoted field");
  if (!field.empty() || !record.empty()) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    end_record();
  }
  return records;
}

}  // namespace

Table parse_csv(const std::string& text, const std::optional<Schema>& schema_hint,
                const CsvOptions& opts) {
  auto records = tokenize_csv(text, opts.delimiter);
  if (records.empty()) throw std::runtime_error("empty table: no header row");
  const auto& header = records[0];
  const std::size_t n_cols = header.size();

  std::vector<std::string> names;
  names.reserve(n_cols);
  for (const auto& h : header) names.push_back(trim(h));

  if (schema_hint) {
    if (schema_hint->size() != n_cols) throw std::runtime_error("schema hint column count mismatch");
    for (std::size_t c = 0; c < n_cols; ++c)
      if (schema_hint->columns[c].name != names[c])
        throw std::runtime_error("schema hint name mismatch at column " + std::to_string(c + 1) +
                                 ": expected '" + schema_hint->columns[c].name + "', got '" +
                                 names[c] + "'");
  }
  if (records.size() == 1) throw std::runtime_error("empty table: header only");

  const std::size_t n_rows = records.size() - 1;
  // Cells are trimmed once; numeric parse operates on the trimmed form.
  std::vector<std::vector<std::string>> cells(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    auto& rec = records[r + 1];
    if (rec.size() != n_cols)
      throw std::runtime_error("ragged row at line " + std::to_string(r + 2));
    cells[r].reserve(n_cols);
    for (auto& f : rec) cells[r].push_back(trim(f));
  }

  Schema schema;
  if (schema_hint) {
    schema = *schema_hint;
  } else {
    // A column is numeric iff every non-missing cell parses as a finite real.
    for (std::size_t c = 0; c < n_cols; ++c) {
      bool numeric = true;
      bool any_value = false;
      for (std::size_t r = 0; r < n_rows && numeric; ++r) {
        const std::string& v = cells[r][c];
        if (v == opts.missing_marker) continue;
        any_value = true;
        double d;
        if (!parse_numeric(v, d)) numeric = false;
      }
      schema.columns.push_back({names[c], (numeric && any_value) ? ColumnKind::Numeric
                                                                 : ColumnKind::Categorical});
    }
  }
  schema.validate();

  Table table;
  table.schema = schema;
  table.cols.resize(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const bool numeric = schema.columns[c].kind == ColumnKind::Numeric;
    auto& col = table.cols[c];
    col.miss.reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const std::string& v = cells[r][c];
      if (v == opts.missing_marker) {
        col.miss.push_back(1);
        if (numeric)
          col.nums.push_back(0.0);
        else
          col.cats.push_back("");
        continue;
      }
      col.miss.push_back(0);
      if (numeric) {
        double d;
        if (!parse_numeric(v, d))
          throw std::runtime_error("cell '" + v + "' in column '" + names[c] +
                                   "' does not parse as numeric (line " + std::to_string(r + 2) +
                                   ")");
        col.nums.push_back(d);
      } else {
        col.cats.push_back(v);
      }
    }
  }
  return table;
}

Table load_csv(const std::string& path, const std::optional<Schema>& schema_hint,
               const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema_hint, opts);
}

namespace {

std::string csv_escape(const std::string& field, char delim) {
  if (field.find_first_of(std::string("\"\n") + delim) == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const Table& table, const std::string& path, const CsvOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c) out << opts.delimiter;
    out << csv_escape(table.schema.columns[c].name, opts.delimiter);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      if (c) out << opts.delimiter;
      if (table.is_missing(r, c)) {
        out << csv_escape(opts.missing_marker, opts.delimiter);
      } else if (table.schema.columns[c].kind == ColumnKind::Numeric) {
        out << canonical_numeric(table.num_at(r, c));
      } else {
        out << csv_escape(table.cat_at(r, c), opts.delimiter);
      }
    }
    out << '\n';
  }
}

std::pair<Table, Table> split_holdout(const Table& table, const SplitConfig& cfg) {
  const std::size_t n = table.n_rows();
  if (n < 2) throw std::invalid_argument("split_holdout needs at least 2 rows");
  if (!(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0))
    throw std::invalid_argument("holdout_fraction must lie in (0,1)");
  auto h = static_cast<std::size_t>(std::llround(cfg.holdout_fraction * static_cast<double>(n)));
  h = std::clamp<std::size_t>(h, 1, n - 1);
  auto rng = make_rng(cfg.seed, /*stream=*/0x5b17);
  std::vector<std::size_t> holdout_idx = sample_without_replacement(n, h, rng);
  std::vector<std::uint8_t> is_holdout(n, 0);
  for (std::size_t i : holdout_idx) is_holdout[i] = 1;
  std::vector<std::size_t> train_idx;
  train_idx.reserve(n - h);
  for (std::size_t i = 0; i < n; ++i)
    if (!is_holdout[i]) train_idx.push_back(i);
  return {table.select_rows(train_idx), table.select_rows(holdout_idx)};
}

EncoderStats fit_encoder(const Table& train) {
  std::vector<std::size_t> all(train.n_cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return fit_encoder(train, all);
}

EncoderStats fit_encoder(const Table& train, std::span<const std::size_t> column_subset) {
  if (train.n_rows() == 0) throw std::invalid_argument("fit_encoder: empty table");
  if (column_subset.empty()) throw std::invalid_argument("fit_encoder: empty column subset");
  EncoderStats stats;
  for (std::size_t c : column_subset) stats.schema.columns.push_back(train.schema.columns[c]);
  stats.numeric.resize(column_subset.size());
  stats.vocab.resize(column_subset.size());
  stats.dim_offset.resize(column_subset.size());
  std::size_t dim = 0;
  for (std::size_t i = 0; i < column_subset.size(); ++i) {
    const std::size_t c = column_subset[i];
    stats.dim_offset[i] = dim;
    if (train.schema.columns[c].kind == ColumnKind::Numeric) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < train.n_rows(); ++r) {
        if (train.is_missing(r, c)) continue;
        lo = std::min(lo, train.num_at(r, c));
        hi = std::max(hi, train.num_at(r, c));
      }
      if (!std::isfinite(lo)) {  // all missing: treat as degenerate
        lo = hi = 0.0;
      }
      stats.numeric[i] = {lo, hi};
      dim += 1;
    } else {
      std::unordered_set<std::string> seen;
      for (std::size_t r = 0; r < train.n_rows(); ++r) {
        if (train.is_missing(r, c)) continue;
        seen.insert(train.cat_at(r, c));
      }
      std::vector<std::string> vocab(seen.begin(), seen.end());
      std::sort(vocab.begin(), vocab.end());
      dim += vocab.size();
      stats.vocab[i] = std::move(vocab);
    }
  }
  stats.n_dims = dim;
  return stats;
}

EncodedMatrix encode(const Table& table, const EncoderStats& stats) {
  // Columns are matched by name so subset encoders work on full tables.
  std::vector<std::size_t> src_col(stats.schema.size());
  for (std::size_t i = 0; i < stats.schema.size(); ++i) {
    const auto& want = stats.schema.columns[i];
    auto found = table.schema.find(want.name);
    if (!found || table.schema.columns[*found].kind != want.kind)
      throw std::invalid_argument("encode: table schema does not carry column '" + want.name + "'");
    src_col[i] = *found;
  }

  EncodedMatrix m;
  m.n_rows = table.n_rows();
  m.n_dims = stats.n_dims;
  m.data.assign(m.n_rows * m.n_dims, 0.0);
  for (std::size_t r = 0; r < m.n_rows; ++r) {
    double* row = m.data.data() + r * m.n_dims;
    for (std::size_t i = 0; i < stats.schema.size(); ++i) {
      const std::size_t c = src_col[i];
      const std::size_t off = stats.dim_offset[i];
      if (stats.schema.columns[i].kind == ColumnKind::Numeric) {
        if (table.is_missing(r, c)) {
          row[off] = 0.5;
          ++m.missing_count;
          continue;
        }
        const auto [lo, hi] = stats.numeric[i];
        double z = (hi > lo) ? (table.num_at(r, c) - lo) / (hi - lo) : 0.5;
        if (z < -0.5) {
          z = -0.5;
          ++m.clamp_count;
        } else if (z > 1.5) {
          z = 1.5;
          ++m.clamp_count;
        }
        row[off] = z;
      } else {
        if (table.is_missing(r, c)) {
          ++m.missing_count;
          continue;  // zero block
        }
        const auto& vocab = stats.vocab[i];
        auto it = std::lower_bound(vocab.begin(), vocab.end(), table.cat_at(r, c));
        if (it != vocab.end() && *it == table.cat_at(r, c))
          row[off + static_cast<std::size_t>(it - vocab.begin())] = kCatScale;
        // unseen category: zero block
      }
    }
  }
  return m;
}

std::pair<Table, std::size_t> dedup_exact(const Table& table) {
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < table.n_rows(); ++r)
    if (seen.insert(table.row_key(r)).second) keep.push_back(r);
  const std::size_t removed = table.n_rows() - keep.size();
  return {table.select_rows(keep), removed};
}

}  // namespace privaudit
