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

#include "f0vote/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "f0vote/error.hpp"

namespace f0vote {

PipelineResult run_pipeline(const TrackSet& ts, AlignMode mode,
                            const VoteConfig& config, int search_range,
                            double epsilon_cents) {
  if (mode == AlignMode::kNone) {
    return PipelineResult{vote_set(ts, config), {}};
  }
  AlignedSet aligned = align_set(ts, search_range, epsilon_cents);
  if (mode == AlignMode::kTimeOnly) {
    // Redo the application with the frequency component zeroed; the shift
    // estimate itself is unchanged.
    AlignedSet time_only;
    time_only.tracks.reference_name = ts.reference_name;
    time_only.tracks.ground_truth = ts.ground_truth;
    for (auto& [name, corr] : aligned.corrections) {
      AlignmentCorrection c = corr;
      c.f_align_cents = 0.0;
      time_only.corrections.emplace(name, c);
      const PitchTrack& raw = ts.members.at(name);
      time_only.tracks.members.emplace(
          name, c.degenerate || name == ts.reference_name
                    ? raw
                    : apply_correction(raw, c));
    }
    aligned = std::move(time_only);
  }
  return PipelineResult{vote_set(aligned.tracks, config),
                        std::move(aligned.corrections)};
}

EvalRunResult run_eval(const TrackSet& ts,
                       const std::vector<double>& thresholds, int search_range,
                       double epsilon_cents, const VoteConfig& config) {
  if (!ts.ground_truth) {
    throw DataError("run_eval: manifest has no ground truth");
  }
  const PitchTrack& truth = *ts.ground_truth;

  EvalRunResult out;
  for (const auto& [name, track] : ts.members) {
    out.members.emplace(name, evaluate(track, truth, thresholds));
  }
  PipelineResult full =
      run_pipeline(ts, AlignMode::kFull, config, search_range, epsilon_cents);
  out.vote_full = evaluate(full.voted, truth, thresholds);
  out.corrections = std::move(full.corrections);
  out.vote_time_only = evaluate(
      run_pipeline(ts, AlignMode::kTimeOnly, config, search_range, epsilon_cents)
          .voted,
      truth, thresholds);
  out.vote_none =
      evaluate(run_pipeline(ts, AlignMode::kNone, config).voted, truth,
               thresholds);
  return out;
}

namespace {

std::string threshold_key(double thr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", thr);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["delta_cent_mean"] = report.delta_cent_mean;
  doc["delta_cent_std"] = report.delta_cent_std;
  nlohmann::ordered_json rpa_doc = nlohmann::ordered_json::object();
  for (const auto& [thr, value] : report.rpa) rpa_doc[threshold_key(thr)] = value;
  doc["rpa"] = rpa_doc;
  doc["vuv_recall"] = report.vuv_recall;
  doc["vuv_false_alarm"] = report.vuv_false_alarm;
  doc["counted_frames"] = {{"total", report.counted_frames.total},
                           {"ref_voiced", report.counted_frames.ref_voiced},
                           {"ref_unvoiced", report.counted_frames.ref_unvoiced},
                           {"joint_voiced", report.counted_frames.joint_voiced}};
  return doc;
}

nlohmann::ordered_json to_json(const AlignmentCorrection& corr) {
  nlohmann::ordered_json doc;
  doc["k_frames"] = corr.k_align;
  doc["f_cents"] = corr.f_align_cents;
  doc["rpa"] = corr.rpa_at_best;
  if (corr.degenerate) doc["uncorrected"] = true;
  return doc;
}

nlohmann::ordered_json to_json(const SelectionResult& result) {
  nlohmann::ordered_json doc;
  doc["criterion"] = result.criterion == SelectionCriterion::kAccuracy
                         ? "accuracy"
                         : "correlation";
  doc["chosen"] = result.chosen;
  doc["stop_reason"] = result.stop_reason == StopReason::kNoImprovement
                           ? "no_improvement"
                           : "max_size";
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const SelectionStep& step : result.trace) {
    nlohmann::ordered_json entry;
    entry["chosen"] = step.chosen;
    entry["score"] = step.score;
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (const auto& [name, s] : step.candidate_scores) scores[name] = s;
    entry["candidate_scores"] = scores;
    trace.push_back(entry);
  }
  doc["trace"] = trace;
  return doc;
}

nlohmann::ordered_json corrections_json(
    const std::map<std::string, AlignmentCorrection>& corrections) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [name, corr] : corrections) doc[name] = to_json(corr);
  return doc;
}

void write_json(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace f0vote
