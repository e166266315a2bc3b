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

#include "privaudit/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace privaudit {

using nlohmann::ordered_json;

bool AuditConfig::metric_enabled(const std::string& name) const {
  return std::find(enabled.begin(), enabled.end(), name) != enabled.end();
}

void AuditConfig::validate() const {
  if (synth_path.empty()) throw std::invalid_argument("synthetic table required");
  if (train_path.empty()) throw std::invalid_argument("training table required");
  if (enabled.empty()) throw std::invalid_argument("enabled metric set must be non-empty");
  static const std::vector<std::string> known{"ims", "dcr", "nndr", "nnaa", "mia", "aia", "kanon"};
  for (const auto& m : enabled)
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw std::invalid_argument("unknown metric: " + m);
  if (holdout_path.empty() && !(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("holdout_fraction must lie in (0,1)");
  if (metric_enabled("kanon") && qid_columns.empty())
    throw std::invalid_argument("kanon requires quasi-identifier columns (--qid)");
}

// ---- JSON (de)serialization --------------------------------------------------

namespace {

ordered_json to_json(const DistanceSummary& s) {
  return {{"median", s.median}, {"p5", s.p5}, {"mean", s.mean}, {"min", s.min}, {"n", s.n}};
}

DistanceSummary summary_from_json(const ordered_json& j) {
  DistanceSummary s;
  s.median = j.at("median");
  s.p5 = j.at("p5");
  s.mean = j.at("mean");
  s.min = j.at("min");
  s.n = j.at("n");
  return s;
}

ordered_json to_json(const ImsResult& r) {
  return {{"train_synth_share", r.train_synth_share},
          {"train_test_share", r.train_test_share},
          {"pass", r.pass}};
}

ordered_json to_json(const DcrReport& r) {
  return {{"train_synth", to_json(r.train_synth)},
          {"train_train", to_json(r.train_train)},
          {"within_real", to_json(r.within_real)},
          {"within_synth", to_json(r.within_synth)},
          {"holdout_synth", to_json(r.holdout_synth)},
          {"share_closer_to_train", r.share_closer_to_train},
          {"verdicts",
           {{"train_further_than_self", r.verdicts.train_further_than_self},
            {"no_model_collapse", r.verdicts.no_model_collapse},
            {"share_closer_ok", r.verdicts.share_closer_ok}}}};
}

ordered_json to_json(const NndrReport& r) {
  return {{"train_synth", to_json(r.train_synth)},
          {"holdout_synth", to_json(r.holdout_synth)},
          {"train_train", to_json(r.train_train)},
          {"synth_synth", to_json(r.synth_synth)},
          {"tau", r.tau},
          {"verdicts",
           {{"holdout_comparable", r.verdicts.holdout_comparable},
            {"leak_flag", r.verdicts.leak_flag},
            {"fidelity_loss_flag", r.verdicts.fidelity_loss_flag},
            {"no_model_collapse", r.verdicts.no_model_collapse}}}};
}

ordered_json to_json(const NnaaResult& r) {
  return {{"train_aa", r.train_aa},
          {"test_aa", r.test_aa},
          {"privacy_loss", r.privacy_loss},
          {"n_repetitions", r.n_repetitions},
          {"seed", r.seed}};
}

ordered_json to_json(const MiaReport& r) {
  ordered_json trials = ordered_json::array();
  for (const auto& t : r.trials)
    trials.push_back({{"sample_fraction", t.sample_fraction},
                      {"threshold_quantile", t.threshold_quantile},
                      {"threshold", t.threshold},
                      {"tp", t.tp},
                      {"fp", t.fp},
                      {"tn", t.tn},
                      {"fn", t.fn},
                      {"precision", t.precision},
                      {"accuracy", t.accuracy}});
  return {{"trials", trials},
          {"avg_precision", r.avg_precision},
          {"avg_accuracy", r.avg_accuracy},
          {"composite_score", r.composite_score},
          {"grade", to_string(r.grade)},
          {"seed", r.seed}};
}

MiaGrade grade_from_string(const std::string& s) {
  for (MiaGrade g : {MiaGrade::Excellent, MiaGrade::VeryGood, MiaGrade::Good, MiaGrade::Moderate,
                     MiaGrade::Poor})
    if (s == to_string(g)) return g;
  throw std::invalid_argument("unknown grade: " + s);
}

ordered_json to_json(const AiaReport& r) {
  ordered_json cols = ordered_json::array();
  for (const auto& c : r.per_column)
    cols.push_back({{"column", c.column},
                    {"accuracy", c.accuracy},
                    {"entropy_weight", c.entropy_weight},
                    {"n_evaluated", c.n_evaluated}});
  return {{"per_column", cols},
          {"overall_unweighted", r.overall_unweighted},
          {"overall_entropy_weighted", r.overall_entropy_weighted},
          {"seed", r.seed}};
}

ordered_json to_json(const AnonymityResult& r) {
  ordered_json hist = ordered_json::object();
  for (const auto& [size, count] : r.class_size_histogram) hist[std::to_string(size)] = count;
  ordered_json l = ordered_json::object();
  for (const auto& [col, val] : r.l) l[col] = val;
  return {{"k", r.k}, {"class_size_histogram", hist}, {"l_diversity", l}};
}

AnonymityResult anonymity_from_json(const ordered_json& j) {
  AnonymityResult r;
  r.k = j.at("k");
  for (const auto& [size, count] : j.at("class_size_histogram").items())
    r.class_size_histogram[std::stoull(size)] = count;
  for (const auto& [col, val] : j.at("l_diversity").items()) r.l[col] = val;
  return r;
}

ordered_json to_json(const FilterSummary& f) {
  return {{"kind", f.kind},
          {"removed", f.removed},
          {"kept", f.kept},
          {"threshold_used", f.threshold_used}};
}

ordered_json report_to_json(const PrivacyReport& r) {
  ordered_json metrics = ordered_json::object();
  if (r.ims) metrics["ims"] = to_json(*r.ims);
  if (r.dcr) metrics["dcr"] = to_json(*r.dcr);
  if (r.nndr) metrics["nndr"] = to_json(*r.nndr);
  if (r.nnaa) metrics["nnaa"] = to_json(*r.nnaa);
  if (r.mia) metrics["mia"] = to_json(*r.mia);
  if (r.aia) metrics["aia"] = to_json(*r.aia);
  if (r.kanon_real || r.kanon_synth) {
    ordered_json k = ordered_json::object();
    if (r.kanon_real) k["real"] = to_json(*r.kanon_real);
    if (r.kanon_synth) k["synthetic"] = to_json(*r.kanon_synth);
    metrics["kanon"] = k;
  }
  ordered_json j{{"schema_version", r.schema_version},
                 {"tool_version", r.tool_version},
                 {"seed", r.seed},
                 {"config", r.config_echo},
                 {"metrics", metrics},
                 {"warnings", r.warnings}};
  if (r.filter) j["filter"] = to_json(*r.filter);
  return j;
}

}  // namespace

PrivacyReport parse_report(const std::string& structured) {
  const ordered_json j = ordered_json::parse(structured);
  PrivacyReport r;
  r.schema_version = j.at("schema_version");
  if (r.schema_version != kReportSchemaVersion)
    throw std::invalid_argument("unsupported report schema_version");
  r.tool_version = j.at("tool_version");
  r.seed = j.at("seed");
  r.config_echo = j.at("config");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  const auto& m = j.at("metrics");
  if (m.contains("ims")) {
    ImsResult v;
    v.train_synth_share = m["ims"].at("train_synth_share");
    v.train_test_share = m["ims"].at("train_test_share");
    v.pass = m["ims"].at("pass");
    r.ims = v;
  }
  if (m.contains("dcr")) {
    const auto& d = m["dcr"];
    DcrReport v;
    v.train_synth = summary_from_json(d.at("train_synth"));
    v.train_train = summary_from_json(d.at("train_train"));
    v.within_real = summary_from_json(d.at("within_real"));
    v.within_synth = summary_from_json(d.at("within_synth"));
    v.holdout_synth = summary_from_json(d.at("holdout_synth"));
    v.share_closer_to_train = d.at("share_closer_to_train");
    v.verdicts.train_further_than_self = d.at("verdicts").at("train_further_than_self");
    v.verdicts.no_model_collapse = d.at("verdicts").at("no_model_collapse");
    v.verdicts.share_closer_ok = d.at("verdicts").at("share_closer_ok");
    r.dcr = v;
  }
  if (m.contains("nndr")) {
    const auto& d = m["nndr"];
    NndrReport v;
    v.train_synth = summary_from_json(d.at("train_synth"));
    v.holdout_synth = summary_from_json(d.at("holdout_synth"));
    v.train_train = summary_from_json(d.at("train_train"));
    v.synth_synth = summary_from_json(d.at("synth_synth"));
    v.tau = d.at("tau");
    v.verdicts.holdout_comparable = d.at("verdicts").at("holdout_comparable");
    v.verdicts.leak_flag = d.at("verdicts").at("leak_flag");
    v.verdicts.fidelity_loss_flag = d.at("verdicts").at("fidelity_loss_flag");
    v.verdicts.no_model_collapse = d.at("verdicts").at("no_model_collapse");
    r.nndr = v;
  }
  if (m.contains("nnaa")) {
    const auto& d = m["nnaa"];
    NnaaResult v;
    v.train_aa = d.at("train_aa");
    v.test_aa = d.at("test_aa");
    v.privacy_loss = d.at("privacy_loss");
    v.n_repetitions = d.at("n_repetitions");
    v.seed = d.at("seed");
    r.nnaa = v;
  }
  if (m.contains("mia")) {
    const auto& d = m["mia"];
    MiaReport v;
    for (const auto& tj : d.at("trials")) {
      MiaTrialResult t;
      t.sample_fraction = tj.at("sample_fraction");
      t.threshold_quantile = tj.at("threshold_quantile");
      t.threshold = tj.at("threshold");
      t.tp = tj.at("tp");
      t.fp = tj.at("fp");
      t.tn = tj.at("tn");
      t.fn = tj.at("fn");
      t.precision = tj.at("precision");
      t.accuracy = tj.at("accuracy");
      v.trials.push_back(t);
    }
    v.avg_precision = d.at("avg_precision");
    v.avg_accuracy = d.at("avg_accuracy");
    v.composite_score = d.at("composite_score");
    v.grade = grade_from_string(d.at("grade"));
    v.seed = d.at("seed");
    r.mia = v;
  }
  if (m.contains("aia")) {
    const auto& d = m["aia"];
    AiaReport v;
    for (const auto& cj : d.at("per_column")) {
      AiaColumnResult c;
      c.column = cj.at("column");
      c.accuracy = cj.at("accuracy");
      c.entropy_weight = cj.at("entropy_weight");
      c.n_evaluated = cj.at("n_evaluated");
      v.per_column.push_back(std::move(c));
    }
    v.overall_unweighted = d.at("overall_unweighted");
    v.overall_entropy_weighted = d.at("overall_entropy_weighted");
    v.seed = d.at("seed");
    r.aia = v;
  }
  if (m.contains("kanon")) {
    if (m["kanon"].contains("real")) r.kanon_real = anonymity_from_json(m["kanon"]["real"]);
    if (m["kanon"].contains("synthetic"))
      r.kanon_synth = anonymity_from_json(m["kanon"]["synthetic"]);
  }
  if (j.contains("filter")) {
    FilterSummary f;
    f.kind = j["filter"].at("kind");
    f.removed = j["filter"].at("removed");
    f.kept = j["filter"].at("kept");
    f.threshold_used = j["filter"].at("threshold_used");
    r.filter = f;
  }
  return r;
}

// ---- Human rendering ---------------------------------------------------------

namespace {

const char* pass_fail(bool b) { return b ? "PASS" : "FAIL"; }

void render_summary_line(std::ostream& os, const char* label, const DistanceSummary& s) {
  os << "  " << label << ": median " << s.median << ", p5 " << s.p5 << ", mean " << s.mean
     << ", min " << s.min << " (n=" << s.n << ")\n";
}

std::string render_human(const PrivacyReport& r) {
  std::ostringstream os;
  os << "privaudit report (tool " << r.tool_version << ", seed " << r.seed << ")\n";
  if (r.ims) {
    os << "\n== Identical Match Share ==\n";
    os << "  train-synth share: " << r.ims->train_synth_share << "\n";
    os << "  train-test share:  " << r.ims->train_test_share << "\n";
    os << "  ims verdict: " << pass_fail(r.ims->pass) << "\n";
  }
  if (r.dcr) {
    os << "\n== Distance to Closest Record ==\n";
    render_summary_line(os, "train-synth", r.dcr->train_synth);
    render_summary_line(os, "train-train", r.dcr->train_train);
    render_summary_line(os, "within-real", r.dcr->within_real);
    render_summary_line(os, "within-synth", r.dcr->within_synth);
    render_summary_line(os, "holdout-synth", r.dcr->holdout_synth);
    os << "  share closer to train: " << r.dcr->share_closer_to_train << "\n";
    os << "  train further than self: " << pass_fail(r.dcr->verdicts.train_further_than_self) << "\n";
    os << "  no model collapse: " << pass_fail(r.dcr->verdicts.no_model_collapse) << "\n";
    os << "  share closer ok: " << pass_fail(r.dcr->verdicts.share_closer_ok) << "\n";
  }
  if (r.nndr) {
    os << "\n== Nearest Neighbor Distance Ratio ==\n";
    render_summary_line(os, "train-synth", r.nndr->train_synth);
    render_summary_line(os, "holdout-synth", r.nndr->holdout_synth);
    render_summary_line(os, "train-train", r.nndr->train_train);
    render_summary_line(os, "synth-synth", r.nndr->synth_synth);
    os << "  holdout comparable: " << pass_fail(r.nndr->verdicts.holdout_comparable) << "\n";
    if (r.nndr->verdicts.leak_flag) os << "  flag: train-side leak\n";
    if (r.nndr->verdicts.fidelity_loss_flag) os << "  flag: fidelity loss\n";
    os << "  no model collapse: " << pass_fail(r.nndr->verdicts.no_model_collapse) << "\n";
  }
  if (r.nnaa) {
    os << "\n== Nearest Neighbor Adversarial Accuracy ==\n";
    os << "  train AA: " << r.nnaa->train_aa << "\n";
    os << "  test AA:  " << r.nnaa->test_aa << "\n";
    os << "  privacy loss: " << r.nnaa->privacy_loss << " (" << r.nnaa->n_repetitions
       << " repetitions)\n";
  }
  if (r.mia) {
    os << "\n== Membership Inference (distance-based) ==\n";
    os << "  trials: " << r.mia->trials.size() << "\n";
    os << "  avg precision: " << r.mia->avg_precision << "\n";
    os << "  avg accuracy:  " << r.mia->avg_accuracy << "\n";
    os << "  composite: " << r.mia->composite_score << "\n";
    os << "MIA grade: " << to_string(r.mia->grade) << "\n";
  }
  if (r.aia) {
    os << "\n== Attribute Inference (KNN) ==\n";
    for (const auto& c : r.aia->per_column)
      os << "  " << c.column << ": accuracy " << c.accuracy << " (weight " << c.entropy_weight
         << ", n=" << c.n_evaluated << ")\n";
    os << "  overall (unweighted): " << r.aia->overall_unweighted << "\n";
    os << "  overall (entropy-weighted): " << r.aia->overall_entropy_weighted << "\n";
  }
  auto render_anon = [&](const char* which, const AnonymityResult& a) {
    os << "\n== k-anonymity (" << which << ") ==\n";
    os << "  k: " << a.k << "\n";
    for (const auto& [col, l] : a.l) os << "  l-diversity(" << col << "): " << l << "\n";
  };
  if (r.kanon_real) render_anon("real", *r.kanon_real);
  if (r.kanon_synth) render_anon("synthetic", *r.kanon_synth);
  if (r.filter) {
    os << "\n== Filter ==\n";
    os << "  kind: " << r.filter->kind << ", removed " << r.filter->removed << ", kept "
       << r.filter->kept << ", threshold " << r.filter->threshold_used << "\n";
  }
  if (!r.warnings.empty()) {
    os << "\n== Warnings ==\n";
    for (const auto& w : r.warnings) os << "  - " << w << "\n";
  }
  return os.str();
}

}  // namespace

std::string render_report(const PrivacyReport& report, ReportFormat format) {
  if (format == ReportFormat::Human) return render_human(report);
  return report_to_json(report).dump(2) + "\n";
}

// ---- Audit orchestration -----------------------------------------------------

namespace {

ordered_json config_echo_json(const AuditConfig& cfg) {
  return {{"train", cfg.train_path},
          {"synth", cfg.synth_path},
          {"holdout", cfg.holdout_path},
          {"holdout_fraction", cfg.holdout_fraction},
          {"seed", cfg.seed},
          {"qid_columns", cfg.qid_columns},
          {"sensitive_columns", cfg.sensitive_columns},
          {"enabled", cfg.enabled},
          {"nnaa_repetitions", cfg.nnaa_repetitions},
          {"thresholds", {{"nndr_tau", cfg.thresholds.nndr_tau}, {"dcr_share_tau", cfg.thresholds.dcr_share_tau}}},
          {"mia",
           {{"train_sample_fractions", cfg.mia.train_sample_fractions},
            {"threshold_quantiles", cfg.mia.threshold_quantiles},
            {"n_trials", cfg.mia.n_trials}}},
          {"aia",
           {{"fixed_qids", cfg.aia.fixed_qids},
            {"random_m", cfg.aia.random_m},
            {"k", cfg.aia.k},
            {"numeric_match_tolerance", cfg.aia.numeric_match_tolerance},
            {"n_attack_records", cfg.aia.n_attack_records}}}};
}

[[noreturn]] void stage_error(const std::string& stage, const std::exception& e) {
  throw std::runtime_error("audit stage '" + stage + "' failed: " + e.what());
}

}  // namespace

PrivacyReport run_audit(const AuditConfig& cfg) {
  cfg.validate();
  PrivacyReport report;
  report.seed = cfg.seed;
  report.config_echo = config_echo_json(cfg);

  Table train, holdout, synth;
  try {
    Table real = load_csv(cfg.train_path, std::nullopt, cfg.csv);
    synth = load_csv(cfg.synth_path, real.schema, cfg.csv);
    if (!cfg.holdout_path.empty()) {
      train = std::move(real);
      holdout = load_csv(cfg.holdout_path, train.schema, cfg.csv);
    } else {
      std::tie(train, holdout) = split_holdout(real, {cfg.holdout_fraction, cfg.seed});
    }
  } catch (const std::exception& e) {
    stage_error("load", e);
  }

  EncoderStats stats;
  EncodedMatrix train_m, holdout_m, synth_m;
  try {
    stats = fit_encoder(train);
    train_m = encode(train, stats);
    holdout_m = encode(holdout, stats);
    synth_m = encode(synth, stats);
  } catch (const std::exception& e) {
    stage_error("encode", e);
  }
  if (synth_m.clamp_count > 0)
    report.warnings.push_back(std::to_string(synth_m.clamp_count) +
                              " synthetic numeric cells fell outside the train range and were "
                              "clamped to [-0.5, 1.5] in the encoded space");
  report.warnings.push_back(
      "mixed-type distances use min-max scaled numerics and 1/sqrt(2)-scaled one-hot "
      "categoricals; all distance metrics share this encoding");

  try {
    if (cfg.metric_enabled("ims")) report.ims = ims_test(train, holdout, synth);
  } catch (const std::exception& e) {
    stage_error("ims", e);
  }
  try {
    if (cfg.metric_enabled("dcr")) report.dcr = dcr_suite(train_m, holdout_m, synth_m, cfg.thresholds);
  } catch (const std::exception& e) {
    stage_error("dcr", e);
  }
  try {
    if (cfg.metric_enabled("nndr"))
      report.nndr = nndr_suite(train_m, holdout_m, synth_m, cfg.thresholds);
  } catch (const std::exception& e) {
    stage_error("nndr", e);
  }
  try {
    if (cfg.metric_enabled("nnaa"))
      report.nnaa = nnaa_privacy_loss(train_m, holdout_m, synth_m, cfg.nnaa_repetitions, cfg.seed);
  } catch (const std::exception& e) {
    stage_error("nnaa", e);
  }
  try {
    if (cfg.metric_enabled("mia")) {
      MiaConfig mia_cfg = cfg.mia;
      mia_cfg.seed = cfg.seed;
      report.mia = mia_run(train, holdout, synth, mia_cfg);
    }
  } catch (const std::exception& e) {
    stage_error("mia", e);
  }
  try {
    if (cfg.metric_enabled("aia")) {
      AiaConfig aia_cfg = cfg.aia;
      aia_cfg.seed = cfg.seed;
      if (aia_cfg.fixed_qids.empty() && !cfg.qid_columns.empty()) aia_cfg.fixed_qids = cfg.qid_columns;
      if (aia_cfg.random_mode() && aia_cfg.random_m == 0)
        aia_cfg.random_m = std::max<std::size_t>(1, train.n_cols() / 2);
      report.aia = aia_run(train, synth, aia_cfg);
    }
  } catch (const std::exception& e) {
    stage_error("aia", e);
  }
  try {
    if (cfg.metric_enabled("kanon")) {
      if (cfg.qid_columns.empty())
        throw std::invalid_argument("kanon requires quasi-identifier columns (--qid)");
      QuasiIdentifierSet qids{cfg.qid_columns, cfg.sensitive_columns};
      report.kanon_real = k_anonymity(train, qids);
      report.kanon_synth = k_anonymity(synth, qids);
      report.warnings.push_back(
          "k-anonymity depends on the declared quasi-identifier set; almost any column can act "
          "as a quasi-identifier when linked to external data");
    }
  } catch (const std::exception& e) {
    stage_error("kanon", e);
  }
  return report;
}

namespace {

int grade_rank(MiaGrade g) {
  switch (g) {
    case MiaGrade::Excellent: return 0;
    case MiaGrade::VeryGood: return 1;
    case MiaGrade::Good: return 2;
    case MiaGrade::Moderate: return 3;
    case MiaGrade::Poor: return 4;
  }
  return 4;
}

bool lookup_verdict(const PrivacyReport& r, const std::string& name) {
  if (name == "ims.pass") {
    if (!r.ims) throw std::invalid_argument("policy requires ims, but ims is disabled");
    return r.ims->pass;
  }
  if (name.rfind("dcr.", 0) == 0) {
    if (!r.dcr) throw std::invalid_argument("policy requires dcr, but dcr is disabled");
    if (name == "dcr.train_further_than_self") return r.dcr->verdicts.train_further_than_self;
    if (name == "dcr.no_model_collapse") return r.dcr->verdicts.no_model_collapse;
    if (name == "dcr.share_closer_ok") return r.dcr->verdicts.share_closer_ok;
  }
  if (name.rfind("nndr.", 0) == 0) {
    if (!r.nndr) throw std::invalid_argument("policy requires nndr, but nndr is disabled");
    if (name == "nndr.holdout_comparable") return r.nndr->verdicts.holdout_comparable;
    if (name == "nndr.no_model_collapse") return r.nndr->verdicts.no_model_collapse;
  }
  throw std::invalid_argument("unknown verdict in policy: " + name);
}

}  // namespace

int exit_code(const PrivacyReport& report, const ExitPolicy& policy) {
  bool ok = true;
  if (policy.min_grade) {
    if (!report.mia)
      throw std::invalid_argument("policy requires an MIA grade, but mia is disabled");
    if (grade_rank(report.mia->grade) > grade_rank(*policy.min_grade)) ok = false;
  }
  for (const auto& v : policy.required_verdicts)
    if (!lookup_verdict(report, v)) ok = false;
  return ok ? 0 : 2;
}

}  // namespace privaudit
