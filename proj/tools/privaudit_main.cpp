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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "privaudit/baselines.hpp"
#include "privaudit/report.hpp"

namespace {

using nlohmann::json;
using namespace privaudit;

std::optional<MiaGrade> parse_grade(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (MiaGrade g : {MiaGrade::Excellent, MiaGrade::VeryGood, MiaGrade::Good, MiaGrade::Moderate,
                     MiaGrade::Poor})
    if (s == to_string(g)) return g;
  throw CLI::ValidationError("--min-grade", "unknown grade: " + s);
}

// Flat JSON config file; any key may be overridden by the matching CLI flag.
void apply_config_file(const std::string& path, AuditConfig& cfg, std::string& min_grade,
                       std::string& report_path, std::string& format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  if (j.contains("train")) cfg.train_path = j["train"];
  if (j.contains("synth")) cfg.synth_path = j["synth"];
  if (j.contains("holdout")) cfg.holdout_path = j["holdout"];
  if (j.contains("holdout_fraction")) cfg.holdout_fraction = j["holdout_fraction"];
  if (j.contains("seed")) cfg.seed = j["seed"];
  if (j.contains("qid")) cfg.qid_columns = j["qid"].get<std::vector<std::string>>();
  if (j.contains("sensitive")) cfg.sensitive_columns = j["sensitive"].get<std::vector<std::string>>();
  if (j.contains("enabled")) cfg.enabled = j["enabled"].get<std::vector<std::string>>();
  if (j.contains("nnaa_repetitions")) cfg.nnaa_repetitions = j["nnaa_repetitions"];
  if (j.contains("nndr_tau")) cfg.thresholds.nndr_tau = j["nndr_tau"];
  if (j.contains("dcr_share_tau")) cfg.thresholds.dcr_share_tau = j["dcr_share_tau"];
  if (j.contains("mia_train_sample_fractions"))
    cfg.mia.train_sample_fractions = j["mia_train_sample_fractions"].get<std::vector<double>>();
  if (j.contains("mia_threshold_quantiles"))
    cfg.mia.threshold_quantiles = j["mia_threshold_quantiles"].get<std::vector<double>>();
  if (j.contains("mia_n_trials")) cfg.mia.n_trials = j["mia_n_trials"];
  if (j.contains("aia_k")) cfg.aia.k = j["aia_k"];
  if (j.contains("aia_random_m")) cfg.aia.random_m = j["aia_random_m"];
  if (j.contains("aia_numeric_match_tolerance"))
    cfg.aia.numeric_match_tolerance = j["aia_numeric_match_tolerance"];
  if (j.contains("aia_n_attack_records")) cfg.aia.n_attack_records = j["aia_n_attack_records"];
  if (j.contains("delimiter")) cfg.csv.delimiter = j["delimiter"].get<std::string>().at(0);
  if (j.contains("missing_marker")) cfg.csv.missing_marker = j["missing_marker"];
  if (j.contains("min_grade")) min_grade = j["min_grade"];
  if (j.contains("report")) report_path = j["report"];
  if (j.contains("format")) format = j["format"];
}

void emit(const std::string& text, const std::string& report_path) {
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + report_path);
    out << text;
  }
}

PopulationSpec population_from_json(const json& j) {
  PopulationSpec spec;
  if (j.contains("numeric")) spec.numeric_names = j["numeric"].get<std::vector<std::string>>();
  for (const auto& cj : j.value("components", json::array())) {
    MixtureComponent comp;
    comp.mean = cj.at("mean").get<std::vector<double>>();
    comp.stddev = cj.at("stddev").get<std::vector<double>>();
    comp.weight = cj.value("weight", 1.0);
    spec.components.push_back(std::move(comp));
  }
  for (const auto& cj : j.value("categoricals", json::array())) {
    CategoricalSpec cat;
    cat.name = cj.at("name");
    cat.vocabulary = cj.at("vocabulary").get<std::vector<std::string>>();
    cat.probabilities = cj.at("probabilities").get<std::vector<double>>();
    spec.categoricals.push_back(std::move(cat));
  }
  spec.n_rows = j.at("n_rows");
  spec.seed = j.value("seed", 0);
  return spec;
}

struct CliState {
  AuditConfig cfg;
  std::string config_path;
  std::string min_grade;
  std::string report_path;
  std::string format = "structured";
  std::string delimiter = ",";
  int threads = 0;
};

void add_common_options(CLI::App* cmd, CliState& st) {
  cmd->add_option("--train", st.cfg.train_path, "training table CSV");
  cmd->add_option("--synth", st.cfg.synth_path, "synthetic table CSV");
  cmd->add_option("--holdout", st.cfg.holdout_path, "holdout table CSV (optional)");
  cmd->add_option("--holdout-fraction", st.cfg.holdout_fraction,
                  "fraction split off the train table when no holdout file is given");
  cmd->add_option("--seed", st.cfg.seed, "seed for every randomized step");
  cmd->add_option("--qid", st.cfg.qid_columns, "quasi-identifier columns")->delimiter(',');
  cmd->add_option("--sensitive", st.cfg.sensitive_columns, "sensitive columns")->delimiter(',');
  cmd->add_option("--config", st.config_path, "flat JSON config file (flags win over file)");
  cmd->add_option("--report", st.report_path, "report output path (default stdout)");
  cmd->add_option("--format", st.format, "report format: structured|human")
      ->check(CLI::IsMember({"structured", "human"}));
  cmd->add_option("--min-grade", st.min_grade, "minimum acceptable MIA grade (CI gate)");
  cmd->add_option("--threads", st.threads, "worker thread count (0 = library default)");
  cmd->add_option("--delimiter", st.delimiter, "CSV delimiter");
  cmd->add_option("--missing-marker", st.cfg.csv.missing_marker, "CSV missing-value marker");
  cmd->add_option("--nnaa-repetitions", st.cfg.nnaa_repetitions, "NNAA repetition count");
  cmd->add_option("--nndr-tau", st.cfg.thresholds.nndr_tau, "NNDR median-difference tolerance");
  cmd->add_option("--dcr-share-tau", st.cfg.thresholds.dcr_share_tau,
                  "slack above the 0.5 share-closer bound");
  cmd->add_option("--mia-trials", st.cfg.mia.n_trials, "MIA trial repetitions");
  cmd->add_option("--mia-quantiles", st.cfg.mia.threshold_quantiles, "MIA threshold quantiles")
      ->delimiter(',');
  cmd->add_option("--mia-fractions", st.cfg.mia.train_sample_fractions,
                  "MIA training sample fractions")
      ->delimiter(',');
  cmd->add_option("--aia-k", st.cfg.aia.k, "AIA neighbor count");
  cmd->add_option("--aia-random-m", st.cfg.aia.random_m, "AIA random QID count per record");
  cmd->add_option("--aia-tolerance", st.cfg.aia.numeric_match_tolerance,
                  "AIA numeric match tolerance (fraction of column range)");
  cmd->add_option("--aia-attack-records", st.cfg.aia.n_attack_records,
                  "AIA attack record count (0 = 20% of real rows, capped at 5000)");
}

// Config-file values fill in only what the command line left untouched.
void finalize_state(const CLI::App* cmd, CliState& st) {
  if (!st.config_path.empty()) {
    CliState file_state;
    apply_config_file(st.config_path, file_state.cfg, file_state.min_grade,
                      file_state.report_path, file_state.format);
    auto overridden = [&](const std::string& flag) {
      const auto* opt = cmd->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    if (!overridden("--train")) st.cfg.train_path = file_state.cfg.train_path.empty() ? st.cfg.train_path : file_state.cfg.train_path;
    if (!overridden("--synth")) st.cfg.synth_path = file_state.cfg.synth_path.empty() ? st.cfg.synth_path : file_state.cfg.synth_path;
    if (!overridden("--holdout") && !file_state.cfg.holdout_path.empty())
      st.cfg.holdout_path = file_state.cfg.holdout_path;
    if (!overridden("--holdout-fraction")) st.cfg.holdout_fraction = file_state.cfg.holdout_fraction;
    if (!overridden("--seed")) st.cfg.seed = file_state.cfg.seed;
    if (!overridden("--qid") && !file_state.cfg.qid_columns.empty())
      st.cfg.qid_columns = file_state.cfg.qid_columns;
    if (!overridden("--sensitive") && !file_state.cfg.sensitive_columns.empty())
      st.cfg.sensitive_columns = file_state.cfg.sensitive_columns;
    if (!overridden("--nnaa-repetitions")) st.cfg.nnaa_repetitions = file_state.cfg.nnaa_repetitions;
    if (!overridden("--nndr-tau")) st.cfg.thresholds.nndr_tau = file_state.cfg.thresholds.nndr_tau;
    if (!overridden("--dcr-share-tau"))
      st.cfg.thresholds.dcr_share_tau = file_state.cfg.thresholds.dcr_share_tau;
    if (!overridden("--mia-trials")) st.cfg.mia.n_trials = file_state.cfg.mia.n_trials;
    if (!overridden("--mia-quantiles"))
      st.cfg.mia.threshold_quantiles = file_state.cfg.mia.threshold_quantiles;
    if (!overridden("--mia-fractions"))
      st.cfg.mia.train_sample_fractions = file_state.cfg.mia.train_sample_fractions;
    if (!overridden("--aia-k")) st.cfg.aia.k = file_state.cfg.aia.k;
    if (!overridden("--aia-random-m")) st.cfg.aia.random_m = file_state.cfg.aia.random_m;
    if (!overridden("--aia-tolerance"))
      st.cfg.aia.numeric_match_tolerance = file_state.cfg.aia.numeric_match_tolerance;
    if (!overridden("--aia-attack-records"))
      st.cfg.aia.n_attack_records = file_state.cfg.aia.n_attack_records;
    if (!overridden("--missing-marker")) st.cfg.csv.missing_marker = file_state.cfg.csv.missing_marker;
    if (!overridden("--min-grade") && !file_state.min_grade.empty())
      st.min_grade = file_state.min_grade;
    if (!overridden("--report") && !file_state.report_path.empty())
      st.report_path = file_state.report_path;
    if (!overridden("--format")) st.format = file_state.format;
  }
  if (st.delimiter.size() != 1) throw std::runtime_error("--delimiter must be a single character");
  st.cfg.csv.delimiter = st.delimiter[0];
#ifdef _OPENMP
  if (st.threads > 0) omp_set_num_threads(st.threads);
#endif
}

int run_audit_command(const CLI::App* cmd, CliState& st, std::vector<std::string> enabled) {
  finalize_state(cmd, st);
  if (!enabled.empty()) st.cfg.enabled = std::move(enabled);
  const PrivacyReport report = run_audit(st.cfg);
  emit(render_report(report,
                     st.format == "human" ? ReportFormat::Human : ReportFormat::Structured),
       st.report_path);
  ExitPolicy policy;
  policy.min_grade = parse_grade(st.min_grade);
  if (!policy.min_grade) return 0;
  return exit_code(report, policy);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privaudit: empirical privacy audit of tabular synthetic data"};
  app.require_subcommand(1);

  CliState st;

  auto* audit = app.add_subcommand("audit", "run every enabled metric and assemble a report");
  add_common_options(audit, st);
  std::vector<std::string> enabled_flag;
  audit->add_option("--enable", enabled_flag, "metrics to run (default: all except kanon)")
      ->delimiter(',');

  struct Single {
    CLI::App* cmd;
    std::string metric;
  };
  std::vector<Single> singles;
  for (const auto& [name, desc] :
       std::vector<std::pair<std::string, std::string>>{
           {"ims", "identical match share train-test baseline"},
           {"dcr", "distance-to-closest-record suite"},
           {"nndr", "nearest-neighbor distance ratio suite"},
           {"nnaa", "nearest-neighbor adversarial accuracy and privacy loss"},
           {"mia", "distance-based membership inference simulation"},
           {"aia", "KNN attribute inference simulation"},
           {"kanon", "k-anonymity / l-diversity"}}) {
    auto* cmd = app.add_subcommand(name, desc);
    add_common_options(cmd, st);
    singles.push_back({cmd, name});
  }

  auto* filter = app.add_subcommand("filter", "remove privacy-risky synthetic records");
  add_common_options(filter, st);
  std::string filter_kind = "similarity";
  std::string filter_out;
  double filter_threshold = -1.0;
  double filter_quantile = -1.0;
  std::size_t filter_k = 5;
  filter->add_option("--kind", filter_kind, "similarity|outlier")
      ->check(CLI::IsMember({"similarity", "outlier"}));
  filter->add_option("--out", filter_out, "filtered CSV output path")->required();
  filter->add_option("--threshold", filter_threshold, "absolute similarity threshold");
  filter->add_option("--quantile", filter_quantile,
                     "quantile threshold (similarity: of train-train NN distances, default 0.01; "
                     "outlier: of train k-th-NN scores, default 0.99)");
  filter->add_option("--k", filter_k, "outlier filter neighbor count");

  auto* generate = app.add_subcommand("generate", "baseline generators for demos and tests");
  add_common_options(generate, st);
  std::string gen_spec, gen_out, gen_mode = "population";
  double gen_sigma = 0.0;
  generate->add_option("--spec", gen_spec, "population spec JSON (population mode)");
  generate->add_option("--out", gen_out, "output CSV path")->required();
  generate->add_option("--mode", gen_mode, "population|copy|perturb|independent")
      ->check(CLI::IsMember({"population", "copy", "perturb", "independent"}));
  generate->add_option("--sigma", gen_sigma, "perturbation scale (perturb mode)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) return run_audit_command(audit, st, enabled_flag);
    for (const auto& single : singles)
      if (single.cmd->parsed()) return run_audit_command(single.cmd, st, {single.metric});

    if (filter->parsed()) {
      finalize_state(filter, st);
      if (st.cfg.train_path.empty() || st.cfg.synth_path.empty())
        throw std::runtime_error("filter requires --train and --synth");
      const Table train = load_csv(st.cfg.train_path, std::nullopt, st.cfg.csv);
      const Table synth = load_csv(st.cfg.synth_path, train.schema, st.cfg.csv);
      FilterResult res;
      if (filter_kind == "similarity") {
        SimilarityThreshold thr = QuantileThreshold{filter_quantile > 0 ? filter_quantile : 0.01};
        if (filter_threshold >= 0.0) thr = AbsoluteThreshold{filter_threshold};
        res = similarity_filter(synth, train, thr);
      } else {
        res = outlier_filter(synth, train, filter_k, filter_quantile > 0 ? filter_quantile : 0.99);
      }
      write_csv(res.filtered, filter_out, st.cfg.csv);
      PrivacyReport report;
      report.seed = st.cfg.seed;
      report.config_echo = {{"train", st.cfg.train_path},
                            {"synth", st.cfg.synth_path},
                            {"kind", filter_kind},
                            {"out", filter_out}};
      report.filter = FilterSummary{filter_kind, res.removed_indices.size(),
                                    res.filtered.n_rows(), res.threshold_used};
      report.warnings.push_back(kFilterDpWarning);
      emit(render_report(report, st.format == "human" ? ReportFormat::Human
                                                      : ReportFormat::Structured),
           st.report_path);
      return 0;
    }

    if (generate->parsed()) {
      finalize_state(generate, st);
      Table out;
      if (gen_mode == "population") {
        if (gen_spec.empty()) throw std::runtime_error("generate --mode population needs --spec");
        std::ifstream in(gen_spec);
        if (!in) throw std::runtime_error("cannot open spec: " + gen_spec);
        json j;
        in >> j;
        PopulationSpec spec = population_from_json(j);
        if (st.cfg.seed != 0) spec.seed = st.cfg.seed;
        out = sample_population(spec);
      } else {
        if (st.cfg.train_path.empty()) throw std::runtime_error("generate needs --train");
        const Table train = load_csv(st.cfg.train_path, std::nullopt, st.cfg.csv);
        if (gen_mode == "copy")
          out = gen_copy(train);
        else if (gen_mode == "perturb")
          out = gen_perturb(train, gen_sigma, st.cfg.seed);
        else
          out = gen_independent(train, st.cfg.seed);
      }
      write_csv(out, gen_out, st.cfg.csv);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
