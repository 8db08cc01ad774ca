// Copyright 2026 The f0vote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// f0vote: ensemble aggregation of fundamental-frequency tracks.
//
// Subcommands:
//   align     estimate and apply per-estimator time/frequency corrections
//   vote      align (optionally) and aggregate a manifest into one track
//   eval      score every member and the voted ensembles against ground truth
//   select    greedily pick a compact estimator subset
//   simulate  emit a synthetic ensemble (tracks + manifest) from a spec
//   theory    majority-vote and median-variance validation reports
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 degenerate input.
// Every run is deterministic given its flags and seeds.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "f0vote/align.hpp"
#include "f0vote/error.hpp"
#include "f0vote/metrics.hpp"
#include "f0vote/pipeline.hpp"
#include "f0vote/select.hpp"
#include "f0vote/theory.hpp"
#include "f0vote/track.hpp"
#include "f0vote/vote.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

struct AlignArgs {
  std::string manifest;
  std::string out_dir;
  int search_range = f0vote::kDefaultSearchRange;
  double epsilon_cents = f0vote::kDefaultEpsilonCents;
};

struct VoteArgs {
  std::string manifest;
  std::string out;
  std::string report;
  std::string tie_rule = "voiced";
  std::string median_domain = "hz";
  bool no_align = false;
  bool align_time_only = false;
  bool align_full = false;
  int search_range = f0vote::kDefaultSearchRange;
  double epsilon_cents = f0vote::kDefaultEpsilonCents;
};

struct EvalArgs {
  std::string manifest;
  std::string out;
  std::vector<double> thresholds = f0vote::kDefaultRpaThresholds;
  int search_range = f0vote::kDefaultSearchRange;
  double epsilon_cents = f0vote::kDefaultEpsilonCents;
};

struct SelectArgs {
  std::string manifest;
  std::string out;
  std::string criterion = "accuracy";
  std::string seed;  // defaults to the manifest reference
  std::size_t max_size = 5;
  std::string reference = "ground-truth";
  double rpa_threshold = f0vote::kDefaultRpaThresholdCents;
  int search_range = f0vote::kDefaultSearchRange;
  double epsilon_cents = f0vote::kDefaultEpsilonCents;
};

struct SimulateArgs {
  std::string out_dir;
  std::string spec_path;
  int members = 5;
  std::size_t frames = 600;
  double error_scale = 30.0;
  std::string error_dist = "gaussian";
  double sign_correlation = 0.0;
  double octave_error_rate = 0.0;
  double vuv_accuracy = 1.0;
  std::vector<int> time_shifts;
  std::vector<double> cent_biases;
  std::uint64_t rng_seed = 0;
};

struct CondorcetArgs {
  std::vector<double> p = {0.55, 0.6, 0.7, 0.9};
  std::vector<int> n = {1, 3, 5, 7, 9, 11, 13, 15};
  std::size_t trials = 100000;
  std::uint64_t rng_seed = 0;
  std::string out;
};

struct VarianceArgs {
  std::vector<int> n = {9, 15, 25};
  std::vector<double> rho = {0.0, 0.3, 0.6};
  double error_scale = 30.0;
  std::string error_dist = "gaussian";
  std::size_t trials = 10000;
  std::size_t pilot_frames = 20000;
  std::uint64_t rng_seed = 0;
  std::string out;
};

f0vote::ErrorDist parse_dist(const std::string& name) {
  if (name == "gaussian") return f0vote::ErrorDist::kGaussian;
  if (name == "laplace") return f0vote::ErrorDist::kLaplace;
  throw std::invalid_argument("unknown error distribution: " + name);
}

f0vote::VoteConfig make_vote_config(const std::string& tie_rule,
                                    const std::string& median_domain) {
  f0vote::VoteConfig config;
  config.tie_rule = tie_rule == "unvoiced" ? f0vote::TieRule::kFavorUnvoiced
                                           : f0vote::TieRule::kFavorVoiced;
  config.median_domain = median_domain == "log-hz"
                             ? f0vote::MedianDomain::kLogHz
                             : f0vote::MedianDomain::kHz;
  return config;
}

void emit_error_record(const std::string& type, const std::string& message) {
  ordered_json record;
  record["error"] = {{"type", type}, {"message", message}};
  std::cerr << record.dump() << '\n';
}

int run_align(const AlignArgs& args) {
  const f0vote::TrackSet ts = f0vote::load_manifest(args.manifest);
  const f0vote::AlignedSet aligned =
      f0vote::align_set(ts, args.search_range, args.epsilon_cents);

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);
  for (const auto& [name, track] : aligned.tracks.members) {
    f0vote::emit_track(track, (dir / (name + ".csv")).string());
  }
  ordered_json doc;
  doc["config"] = {{"manifest", args.manifest},
                   {"search_range", args.search_range},
                   {"epsilon_cents", args.epsilon_cents}};
  doc["reference"] = ts.reference_name;
  doc["corrections"] = f0vote::corrections_json(aligned.corrections);
  f0vote::write_json(doc, (dir / "corrections.json").string());

  for (const auto& [name, corr] : aligned.corrections) {
    std::printf("%-12s k=%+d frames  f=%+.3f cents  rpa=%.4f%s\n",
                name.c_str(), corr.k_align, corr.f_align_cents,
                corr.rpa_at_best, corr.degenerate ? "  (uncorrected)" : "");
  }
  return 0;
}

int run_vote(const VoteArgs& args) {
  const f0vote::TrackSet ts = f0vote::load_manifest(args.manifest);
  f0vote::AlignMode mode = f0vote::AlignMode::kFull;
  if (args.no_align) mode = f0vote::AlignMode::kNone;
  if (args.align_time_only) mode = f0vote::AlignMode::kTimeOnly;

  const f0vote::VoteConfig config =
      make_vote_config(args.tie_rule, args.median_domain);
  const f0vote::PipelineResult result = f0vote::run_pipeline(
      ts, mode, config, args.search_range, args.epsilon_cents);
  f0vote::emit_track(result.voted, args.out);

  if (!args.report.empty()) {
    ordered_json doc;
    doc["config"] = {{"manifest", args.manifest},
                     {"align", args.no_align ? "none"
                               : args.align_time_only ? "time-only"
                                                      : "full"},
                     {"tie_rule", args.tie_rule},
                     {"median_domain", args.median_domain},
                     {"search_range", args.search_range},
                     {"epsilon_cents", args.epsilon_cents}};
    doc["members"] = static_cast<int>(ts.members.size());
    doc["frames"] = result.voted.size();
    doc["voiced_frames"] = result.voted.voiced_count();
    doc["corrections"] = f0vote::corrections_json(result.corrections);
    f0vote::write_json(doc, args.report);
  }
  std::printf("voted %zu frames (%zu voiced) from %zu members -> %s\n",
              result.voted.size(), result.voted.voiced_count(),
              ts.members.size(), args.out.c_str());
  return 0;
}

int run_eval_cmd(const EvalArgs& args) {
  const f0vote::TrackSet ts = f0vote::load_manifest(args.manifest);
  const f0vote::EvalRunResult result = f0vote::run_eval(
      ts, args.thresholds, args.search_range, args.epsilon_cents);

  for (const auto& [name, report] : result.members) {
    std::printf("%-18s %s\n", name.c_str(),
                f0vote::summary_line(report).c_str());
  }
  std::printf("%-18s %s\n", "vote(full)",
              f0vote::summary_line(result.vote_full).c_str());
  std::printf("%-18s %s\n", "vote(time-only)",
              f0vote::summary_line(result.vote_time_only).c_str());
  std::printf("%-18s %s\n", "vote(none)",
              f0vote::summary_line(result.vote_none).c_str());

  if (!args.out.empty()) {
    ordered_json doc;
    doc["config"] = {{"manifest", args.manifest},
                     {"thresholds", args.thresholds},
                     {"search_range", args.search_range},
                     {"epsilon_cents", args.epsilon_cents}};
    ordered_json members = ordered_json::object();
    for (const auto& [name, report] : result.members) {
      members[name] = f0vote::to_json(report);
    }
    doc["members"] = members;
    doc["voting"] = {{"full", f0vote::to_json(result.vote_full)},
                     {"time_only", f0vote::to_json(result.vote_time_only)},
                     {"none", f0vote::to_json(result.vote_none)}};
    doc["corrections"] = f0vote::corrections_json(result.corrections);
    f0vote::write_json(doc, args.out);
  }
  return 0;
}

int run_select(const SelectArgs& args) {
  const f0vote::TrackSet ts = f0vote::load_manifest(args.manifest);
  f0vote::SelectOptions options;
  options.criterion = args.criterion == "correlation"
                          ? f0vote::SelectionCriterion::kCorrelation
                          : f0vote::SelectionCriterion::kAccuracy;
  options.max_size = args.max_size;
  options.reference_mode = args.reference == "ensemble-median"
                               ? f0vote::ReferenceMode::kEnsembleMedian
                               : f0vote::ReferenceMode::kGroundTruth;
  options.rpa_threshold_cents = args.rpa_threshold;
  options.search_range = args.search_range;
  options.epsilon_cents = args.epsilon_cents;
  const std::string seed = args.seed.empty() ? ts.reference_name : args.seed;

  const f0vote::SelectionResult result =
      f0vote::greedy_select(ts, seed, options);

  std::printf("chosen:");
  for (const std::string& name : result.chosen) std::printf(" %s", name.c_str());
  std::printf("  (%s)\n",
              result.stop_reason == f0vote::StopReason::kNoImprovement
                  ? "stopped: no improvement"
                  : "stopped: max size");

  if (!args.out.empty()) {
    ordered_json doc;
    doc["config"] = {{"manifest", args.manifest},
                     {"criterion", args.criterion},
                     {"seed", seed},
                     {"max_size", args.max_size},
                     {"reference", args.reference},
                     {"rpa_threshold_cents", args.rpa_threshold},
                     {"search_range", args.search_range},
                     {"epsilon_cents", args.epsilon_cents}};
    doc.update(f0vote::to_json(result));
    f0vote::write_json(doc, args.out);
  }
  return 0;
}

f0vote::EnsembleSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw f0vote::DataError("cannot open spec file: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw f0vote::DataError(path + ": " + e.what());
  }
  f0vote::EnsembleSpec spec;
  if (doc.contains("n")) spec.n = doc["n"].get<int>();
  if (doc.contains("error_scale_cents")) {
    spec.error_scale_cents = doc["error_scale_cents"].get<double>();
  }
  if (doc.contains("error_dist")) {
    spec.error_dist = parse_dist(doc["error_dist"].get<std::string>());
  }
  if (doc.contains("sign_correlation")) {
    spec.sign_correlation = doc["sign_correlation"].get<double>();
  }
  if (doc.contains("octave_error_rate")) {
    spec.octave_error_rate = doc["octave_error_rate"].get<double>();
  }
  if (doc.contains("vuv_accuracy")) {
    spec.vuv_accuracy = doc["vuv_accuracy"].get<double>();
  }
  if (doc.contains("member_time_shifts")) {
    spec.member_time_shifts =
        doc["member_time_shifts"].get<std::vector<int>>();
  }
  if (doc.contains("member_cent_biases")) {
    spec.member_cent_biases =
        doc["member_cent_biases"].get<std::vector<double>>();
  }
  if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  return spec;
}

int run_simulate(const SimulateArgs& args, const CLI::App* cmd) {
  f0vote::EnsembleSpec spec;
  const bool from_file = !args.spec_path.empty();
  if (from_file) spec = load_spec_file(args.spec_path);
  // Explicit flags override the spec file; without one the flags (and
  // their defaults) define the spec outright.
  auto flag = [&](const char* name) {
    return !from_file || cmd->count(name) > 0;
  };
  if (flag("--members")) spec.n = args.members;
  if (flag("--error-scale")) spec.error_scale_cents = args.error_scale;
  if (flag("--error-dist")) spec.error_dist = parse_dist(args.error_dist);
  if (flag("--sign-correlation")) spec.sign_correlation = args.sign_correlation;
  if (flag("--octave-error-rate")) {
    spec.octave_error_rate = args.octave_error_rate;
  }
  if (flag("--vuv-accuracy")) spec.vuv_accuracy = args.vuv_accuracy;
  if (cmd->count("--time-shifts")) spec.member_time_shifts = args.time_shifts;
  if (cmd->count("--cent-biases")) spec.member_cent_biases = args.cent_biases;
  if (flag("--rng-seed")) spec.seed = args.rng_seed;

  const f0vote::TrackSet ts = f0vote::simulate_ensemble(spec, args.frames);

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);
  f0vote::emit_track(*ts.ground_truth, (dir / "truth.csv").string());
  std::map<std::string, std::string> member_paths;
  for (const auto& [name, track] : ts.members) {
    f0vote::emit_track(track, (dir / (name + ".csv")).string());
    member_paths[name] = name + ".csv";
  }
  f0vote::emit_manifest((dir / "manifest.json").string(), ts.reference_name,
                        member_paths, "truth.csv");
  std::printf("wrote %d member tracks + truth (%zu frames) to %s\n", spec.n,
              args.frames, args.out_dir.c_str());
  return 0;
}

int run_condorcet(const CondorcetArgs& args) {
  ordered_json entries = ordered_json::array();
  for (double p : args.p) {
    for (int n : args.n) {
      const f0vote::CondorcetValidation v =
          f0vote::validate_condorcet(p, n, args.trials, args.rng_seed);
      std::printf("p=%.3f n=%2d exact=%.6f empirical=%.6f\n", p, n, v.exact,
                  v.empirical);
      entries.push_back({{"p", p},
                         {"n", n},
                         {"exact", v.exact},
                         {"empirical", v.empirical}});
    }
  }
  if (!args.out.empty()) {
    ordered_json doc;
    doc["config"] = {{"p", args.p},
                     {"n", args.n},
                     {"trials", args.trials},
                     {"rng_seed", args.rng_seed}};
    doc["entries"] = entries;
    f0vote::write_json(doc, args.out);
  }
  return 0;
}

int run_variance(const VarianceArgs& args) {
  ordered_json entries = ordered_json::array();
  for (int n : args.n) {
    for (double rho : args.rho) {
      f0vote::EnsembleSpec spec;
      spec.n = n;
      spec.error_scale_cents = args.error_scale;
      spec.error_dist = parse_dist(args.error_dist);
      spec.sign_correlation = rho;
      spec.seed = args.rng_seed;
      const f0vote::VariancePrediction v =
          f0vote::validate_variance(spec, args.pilot_frames, args.trials);
      std::printf(
          "n=%2d rho=%.2f predicted=%9.3f empirical=%9.3f ratio=%.4f "
          "(rho_used=%.4f)\n",
          n, rho, v.predicted, v.empirical, v.empirical / v.predicted,
          v.rho_bar_used);
      entries.push_back({{"n", n},
                         {"rho_target", rho},
                         {"rho_used", v.rho_bar_used},
                         {"h_bar", v.h_bar_used},
                         {"predicted", v.predicted},
                         {"empirical", v.empirical},
                         {"ratio", v.empirical / v.predicted}});
    }
  }
  if (!args.out.empty()) {
    ordered_json doc;
    doc["config"] = {{"n", args.n},
                     {"rho", args.rho},
                     {"error_scale", args.error_scale},
                     {"error_dist", args.error_dist},
                     {"trials", args.trials},
                     {"pilot_frames", args.pilot_frames},
                     {"rng_seed", args.rng_seed}};
    doc["entries"] = entries;
    f0vote::write_json(doc, args.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f0vote: ensemble voting for fundamental-frequency tracks"};
  app.require_subcommand(1);

  AlignArgs align_args;
  auto* align_cmd = app.add_subcommand(
      "align", "Correct per-estimator temporal/frequency offsets");
  align_cmd->add_option("--manifest", align_args.manifest, "Manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  align_cmd->add_option("--out-dir", align_args.out_dir,
                        "Directory for corrected tracks + corrections.json")
      ->required();
  align_cmd->add_option("--search-range", align_args.search_range,
                        "Temporal search range H in frames")
      ->capture_default_str();
  align_cmd->add_option("--epsilon-cents", align_args.epsilon_cents,
                        "Alignment tolerance in cents")
      ->capture_default_str();

  VoteArgs vote_args;
  auto* vote_cmd =
      app.add_subcommand("vote", "Aggregate a manifest into one voted track");
  vote_cmd->add_option("--manifest", vote_args.manifest, "Manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  vote_cmd->add_option("--out", vote_args.out, "Voted track file")->required();
  vote_cmd->add_option("--report", vote_args.report, "Optional report JSON");
  vote_cmd->add_option("--tie-rule", vote_args.tie_rule, "Even-split V/UV rule")
      ->check(CLI::IsMember({"voiced", "unvoiced"}))
      ->capture_default_str();
  vote_cmd
      ->add_option("--median-domain", vote_args.median_domain,
                   "Domain of the even-count median")
      ->check(CLI::IsMember({"hz", "log-hz"}))
      ->capture_default_str();
  auto* no_align = vote_cmd->add_flag("--no-align", vote_args.no_align,
                                      "Vote the raw tracks");
  auto* time_only = vote_cmd->add_flag("--align-time-only",
                                       vote_args.align_time_only,
                                       "Correct temporal offsets only");
  auto* full = vote_cmd->add_flag("--align-full", vote_args.align_full,
                                  "Correct time and frequency (default)");
  no_align->excludes(time_only)->excludes(full);
  time_only->excludes(full);
  vote_cmd->add_option("--search-range", vote_args.search_range, "H in frames")
      ->capture_default_str();
  vote_cmd->add_option("--epsilon-cents", vote_args.epsilon_cents,
                       "Alignment tolerance in cents")
      ->capture_default_str();

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Score members and voted ensembles against ground truth");
  eval_cmd->add_option("--manifest", eval_args.manifest, "Manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_args.out, "Report JSON path");
  eval_cmd
      ->add_option("--thresholds", eval_args.thresholds,
                   "RPA thresholds in cents (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--search-range", eval_args.search_range, "H in frames")
      ->capture_default_str();
  eval_cmd->add_option("--epsilon-cents", eval_args.epsilon_cents,
                       "Alignment tolerance in cents")
      ->capture_default_str();

  SelectArgs select_args;
  auto* select_cmd =
      app.add_subcommand("select", "Greedy estimator subset selection");
  select_cmd->add_option("--manifest", select_args.manifest, "Manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  select_cmd->add_option("--out", select_args.out, "Report JSON path");
  select_cmd
      ->add_option("--criterion", select_args.criterion, "Selection criterion")
      ->check(CLI::IsMember({"accuracy", "correlation"}))
      ->capture_default_str();
  select_cmd->add_option("--seed", select_args.seed,
                         "Seed estimator name (default: manifest reference)");
  select_cmd->add_option("--max-size", select_args.max_size, "Stop size")
      ->capture_default_str();
  select_cmd
      ->add_option("--reference", select_args.reference, "Scoring reference")
      ->check(CLI::IsMember({"ground-truth", "ensemble-median"}))
      ->capture_default_str();
  select_cmd
      ->add_option("--rpa-threshold", select_args.rpa_threshold,
                   "Accuracy criterion threshold in cents")
      ->capture_default_str();
  select_cmd
      ->add_option("--search-range", select_args.search_range, "H in frames")
      ->capture_default_str();
  select_cmd->add_option("--epsilon-cents", select_args.epsilon_cents,
                         "Alignment tolerance in cents")
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Generate a synthetic ensemble (tracks + manifest)");
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "Output directory")
      ->required();
  sim_cmd->add_option("--spec", sim_args.spec_path,
                      "Ensemble spec JSON (flags override)")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--members", sim_args.members, "Number of estimators")
      ->capture_default_str();
  sim_cmd->add_option("--frames", sim_args.frames, "Track length in frames")
      ->capture_default_str();
  sim_cmd
      ->add_option("--error-scale", sim_args.error_scale,
                   "Error scale in cents (sigma or b)")
      ->capture_default_str();
  sim_cmd->add_option("--error-dist", sim_args.error_dist, "Error distribution")
      ->check(CLI::IsMember({"gaussian", "laplace"}))
      ->capture_default_str();
  sim_cmd
      ->add_option("--sign-correlation", sim_args.sign_correlation,
                   "Target pairwise error-sign correlation in [0,1)")
      ->capture_default_str();
  sim_cmd
      ->add_option("--octave-error-rate", sim_args.octave_error_rate,
                   "Per-frame probability of a +-1200 cent jump")
      ->capture_default_str();
  sim_cmd
      ->add_option("--vuv-accuracy", sim_args.vuv_accuracy,
                   "Per-frame probability the V/UV flag is correct")
      ->capture_default_str();
  sim_cmd->add_option("--time-shifts", sim_args.time_shifts,
                      "Per-member frame shifts, comma separated (1 value "
                      "broadcasts)")
      ->delimiter(',');
  sim_cmd->add_option("--cent-biases", sim_args.cent_biases,
                      "Per-member cent biases, comma separated (1 value "
                      "broadcasts)")
      ->delimiter(',');
  sim_cmd->add_option("--rng-seed", sim_args.rng_seed, "RNG seed")
      ->capture_default_str();

  auto* theory_cmd =
      app.add_subcommand("theory", "Numerical validation reports");
  theory_cmd->require_subcommand(1);

  CondorcetArgs cond_args;
  auto* cond_cmd = theory_cmd->add_subcommand(
      "condorcet", "Exact vs empirical majority-vote accuracy");
  cond_cmd->add_option("--p", cond_args.p, "Per-voter accuracies")
      ->delimiter(',')
      ->capture_default_str();
  cond_cmd->add_option("--n", cond_args.n, "Odd ensemble sizes")
      ->delimiter(',')
      ->capture_default_str();
  cond_cmd->add_option("--trials", cond_args.trials, "Monte-Carlo trials")
      ->capture_default_str();
  cond_cmd->add_option("--rng-seed", cond_args.rng_seed, "RNG seed")
      ->capture_default_str();
  cond_cmd->add_option("--out", cond_args.out, "Report JSON path");

  VarianceArgs var_args;
  auto* var_cmd = theory_cmd->add_subcommand(
      "variance", "Median-error variance: formula vs Monte Carlo");
  var_cmd->add_option("--n", var_args.n, "Ensemble sizes")
      ->delimiter(',')
      ->capture_default_str();
  var_cmd->add_option("--rho", var_args.rho, "Target sign correlations")
      ->delimiter(',')
      ->capture_default_str();
  var_cmd->add_option("--error-scale", var_args.error_scale, "Scale in cents")
      ->capture_default_str();
  var_cmd->add_option("--error-dist", var_args.error_dist, "Distribution")
      ->check(CLI::IsMember({"gaussian", "laplace"}))
      ->capture_default_str();
  var_cmd->add_option("--trials", var_args.trials, "Monte-Carlo trials")
      ->capture_default_str();
  var_cmd
      ->add_option("--pilot-frames", var_args.pilot_frames,
                   "Calibration pilot sample size")
      ->capture_default_str();
  var_cmd->add_option("--rng-seed", var_args.rng_seed, "RNG seed")
      ->capture_default_str();
  var_cmd->add_option("--out", var_args.out, "Report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*align_cmd) return run_align(align_args);
    if (*vote_cmd) return run_vote(vote_args);
    if (*eval_cmd) return run_eval_cmd(eval_args);
    if (*select_cmd) return run_select(select_args);
    if (*sim_cmd) return run_simulate(sim_args, sim_cmd);
    if (*cond_cmd) return run_condorcet(cond_args);
    if (*var_cmd) return run_variance(var_args);
  } catch (const f0vote::DegenerateInput& e) {
    emit_error_record("degenerate_input", e.what());
    return kExitDegenerate;
  } catch (const f0vote::DataError& e) {
    emit_error_record("data", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    emit_error_record("usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error_record("internal", e.what());
    return 1;
  }
  return 0;
}
