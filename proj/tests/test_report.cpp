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

#include <filesystem>

#include "fixtures.hpp"
#include "privaudit/baselines.hpp"
#include "privaudit/report.hpp"

using namespace privaudit;
using privaudit::testing::mixture_spec;

namespace {

// small audit fixture written once per process
struct AuditFiles {
  std::string train, holdout, synth_copy, synth_indep;

  AuditFiles() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "privaudit_report_test";
    fs::create_directories(dir);
    Table tr = sample_population(mixture_spec(400, 101));
    Table ho = sample_population(mixture_spec(400, 102));
    Table ind = sample_population(mixture_spec(400, 103));
    train = (dir / "train.csv").string();
    holdout = (dir / "holdout.csv").string();
    synth_copy = (dir / "copy.csv").string();
    synth_indep = (dir / "indep.csv").string();
    write_csv(tr, train);
    write_csv(ho, holdout);
    write_csv(gen_copy(tr), synth_copy);
    write_csv(ind, synth_indep);
  }
};

const AuditFiles& files() {
  static AuditFiles f;
  return f;
}

AuditConfig base_config() {
  AuditConfig cfg;
  cfg.train_path = files().train;
  cfg.holdout_path = files().holdout;
  cfg.synth_path = files().synth_indep;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  AuditConfig cfg = base_config();
  cfg.synth_path.clear();
  CHECK_THROWS_WITH_AS(cfg.validate(), "synthetic table required", std::invalid_argument);

  AuditConfig bad_metric = base_config();
  bad_metric.enabled = {"ims", "nope"};
  CHECK_THROWS(bad_metric.validate());

  AuditConfig kanon_no_qid = base_config();
  kanon_no_qid.enabled = {"kanon"};
  CHECK_THROWS(kanon_no_qid.validate());
}

TEST_CASE("structured render parses back byte-identically") {
  AuditConfig cfg = base_config();
  cfg.enabled = {"ims", "dcr", "nndr", "nnaa", "mia", "aia"};
  PrivacyReport rep = run_audit(cfg);
  const std::string first = render_report(rep, ReportFormat::Structured);
  const std::string second = render_report(parse_report(first), ReportFormat::Structured);
  CHECK(first == second);
  CHECK(first.back() == '\n');

  auto j = nlohmann::json::parse(first);
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.contains("tool_version"));
  CHECK(j.contains("config"));
}

TEST_CASE("identical runs yield byte-identical reports") {
  AuditConfig cfg = base_config();
  cfg.enabled = {"ims", "dcr", "mia"};
  const std::string a = render_report(run_audit(cfg), ReportFormat::Structured);
  const std::string b = render_report(run_audit(cfg), ReportFormat::Structured);
  CHECK(a == b);
}

TEST_CASE("enabled set controls which blocks appear") {
  AuditConfig cfg = base_config();
  cfg.enabled = {"kanon"};
  cfg.qid_columns = {"color"};
  cfg.sensitive_columns = {"x"};
  PrivacyReport rep = run_audit(cfg);
  CHECK(rep.kanon_real.has_value());
  CHECK(rep.kanon_synth.has_value());
  CHECK_FALSE(rep.ims.has_value());
  CHECK_FALSE(rep.dcr.has_value());
  CHECK_FALSE(rep.nndr.has_value());
  CHECK_FALSE(rep.nnaa.has_value());
  CHECK_FALSE(rep.mia.has_value());
  CHECK_FALSE(rep.aia.has_value());

  auto j = nlohmann::json::parse(render_report(rep, ReportFormat::Structured));
  CHECK(j.at("metrics").contains("kanon"));
  CHECK_FALSE(j.at("metrics").contains("mia"));
}

TEST_CASE("human format names the grade and the verdicts") {
  AuditConfig cfg = base_config();
  cfg.enabled = {"ims", "mia"};
  PrivacyReport rep = run_audit(cfg);
  const std::string text = render_report(rep, ReportFormat::Human);
  CHECK(text.find("MIA grade: ") != std::string::npos);
  const bool has_verdict =
      text.find("PASS") != std::string::npos || text.find("FAIL") != std::string::npos;
  CHECK(has_verdict);
}

TEST_CASE("exit codes") {
  AuditConfig cfg = base_config();
  cfg.enabled = {"ims", "mia"};
  PrivacyReport rep = run_audit(cfg);  // independent synth: should be clean
  REQUIRE(rep.mia.has_value());
  REQUIRE(rep.mia->grade == MiaGrade::Excellent);

  ExitPolicy none;
  CHECK(exit_code(rep, none) == 0);

  ExitPolicy want_good;
  want_good.min_grade = MiaGrade::Good;
  CHECK(exit_code(rep, want_good) == 0);

  ExitPolicy want_ims;
  want_ims.required_verdicts = {"ims.pass"};
  CHECK(exit_code(rep, want_ims) == (rep.ims->pass ? 0 : 2));

  // copier synth fails the grade policy
  AuditConfig leaky = base_config();
  leaky.synth_path = files().synth_copy;
  leaky.enabled = {"mia"};
  PrivacyReport bad = run_audit(leaky);
  REQUIRE(bad.mia.has_value());
  CHECK(exit_code(bad, want_good) == 2);

  // policy referencing a disabled metric is a usage error, not a failure
  ExitPolicy want_dcr;
  want_dcr.required_verdicts = {"dcr.share_closer_ok"};
  CHECK_THROWS(exit_code(rep, want_dcr));
  ExitPolicy grade_on_graderless;
  grade_on_graderless.min_grade = MiaGrade::Good;
  PrivacyReport no_mia = rep;
  no_mia.mia.reset();
  CHECK_THROWS(exit_code(no_mia, grade_on_graderless));
}

TEST_CASE("audit without a holdout path splits one off") {
  AuditConfig cfg = base_config();
  cfg.holdout_path.clear();
  cfg.holdout_fraction = 0.1;
  cfg.enabled = {"ims", "dcr"};
  PrivacyReport rep = run_audit(cfg);
  CHECK(rep.ims.has_value());
  CHECK(rep.dcr.has_value());
  CHECK(rep.dcr->holdout_synth.n > 0);
}
