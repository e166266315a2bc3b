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

#ifndef PRIVAUDIT_REPORT_HPP
#define PRIVAUDIT_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "privaudit/anonymity.hpp"
#include "privaudit/attacks.hpp"
#include "privaudit/dataset.hpp"
#include "privaudit/filters.hpp"
#include "privaudit/metrics.hpp"

namespace privaudit {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct AuditConfig {
  std::string train_path;
  std::string synth_path;
  std::string holdout_path;  // empty: split holdout_fraction off the train table
  double holdout_fraction = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> qid_columns;
  std::vector<std::string> sensitive_columns;
  MiaConfig mia;
  AiaConfig aia;
  MetricThresholds thresholds;
  std::size_t nnaa_repetitions = 5;
  // subset of {ims, dcr, nndr, nnaa, mia, aia, kanon}
  std::vector<std::string> enabled{"ims", "dcr", "nndr", "nnaa", "mia", "aia"};
  CsvOptions csv;

  bool metric_enabled(const std::string& name) const;
  void validate() const;
};

struct FilterSummary {
  std::string kind;  // "similarity" | "outlier"
  std::size_t removed = 0;
  std::size_t kept = 0;
  double threshold_used = 0.0;
};

struct PrivacyReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config_echo;
  std::optional<ImsResult> ims;
  std::optional<DcrReport> dcr;
  std::optional<NndrReport> nndr;
  std::optional<NnaaResult> nnaa;
  std::optional<MiaReport> mia;
  std::optional<AiaReport> aia;
  std::optional<AnonymityResult> kanon_real;
  std::optional<AnonymityResult> kanon_synth;
  std::optional<FilterSummary> filter;
  std::vector<std::string> warnings;
};

PrivacyReport run_audit(const AuditConfig& cfg);

enum class ReportFormat { Structured, Human };

// Structured output is stable-key-ordered JSON; render(parse(x)) is
// byte-identical for structured reports.
std::string render_report(const PrivacyReport& report, ReportFormat format);
PrivacyReport parse_report(const std::string& structured);

struct ExitPolicy {
  std::optional<MiaGrade> min_grade;
  // dotted verdict names, e.g. "ims.pass", "dcr.share_closer_ok",
  // "nndr.holdout_comparable"
  std::vector<std::string> required_verdicts;
};

// 0: policy satisfied; 2: policy failure. (1 is reserved for runtime errors
// and never returned here.) Throws if the policy references a metric the
// report does not carry.
int exit_code(const PrivacyReport& report, const ExitPolicy& policy);

}  // namespace privaudit

#endif  // PRIVAUDIT_REPORT_HPP
