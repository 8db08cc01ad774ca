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

// Greedy construction of a compact estimator subset, scored either by the
// raw pitch accuracy of the aligned-and-voted ensemble (accuracy criterion)
// or by the average pairwise correlation of per-frame error signs
// (correlation criterion, negated so that higher is better).

#ifndef F0VOTE_SELECT_HPP_
#define F0VOTE_SELECT_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "f0vote/align.hpp"
#include "f0vote/metrics.hpp"
#include "f0vote/track.hpp"
#include "f0vote/vote.hpp"

namespace f0vote {

// Per-estimator error signs against a reference track.  psi is sign(cents)
// where both tracks are voiced and 0 elsewhere; valid distinguishes a
// genuine zero error from an unevaluable (unvoiced) frame.
struct SignMatrix {
  std::vector<std::string> names;                // row order
  std::vector<std::vector<std::int8_t>> rows;    // psi in {-1, 0, +1}
  std::vector<std::vector<std::uint8_t>> valid;  // member and ref both voiced
  std::vector<std::uint8_t> frame_mask;          // reference voiced

  std::size_t row_index(const std::string& name) const;
};

SignMatrix sign_matrix(const TrackSet& ts, const PitchTrack& reference);

// Mean over all pairs i<j in the subset of the Pearson correlation of the
// sign rows, population (1/N) moments, restricted per pair to frames where
// both rows are valid.  Zero-error frames on jointly voiced pairs stay in
// as 0 values.  Throws DegenerateInput on a zero-variance row (named) or a
// pair with no common evaluable frame.
double avg_sign_correlation(const SignMatrix& m,
                            std::span<const std::string> subset);

enum class SelectionCriterion { kAccuracy, kCorrelation };
enum class ReferenceMode { kGroundTruth, kEnsembleMedian };
enum class StopReason { kNoImprovement, kMaxSize };

struct SelectionStep {
  std::map<std::string, double> candidate_scores;
  std::string chosen;  // empty for the final non-improving step
  double score = 0.0;
};

struct SelectionResult {
  std::vector<std::string> chosen;  // first element is the seed
  std::vector<SelectionStep> trace;
  SelectionCriterion criterion = SelectionCriterion::kAccuracy;
  StopReason stop_reason = StopReason::kMaxSize;
};

struct SelectOptions {
  SelectionCriterion criterion = SelectionCriterion::kAccuracy;
  std::size_t max_size = 5;
  ReferenceMode reference_mode = ReferenceMode::kGroundTruth;
  double rpa_threshold_cents = kDefaultRpaThresholdCents;
  int search_range = kDefaultSearchRange;
  double epsilon_cents = kDefaultEpsilonCents;
  VoteConfig vote_config;
};

// Starting from {seed}, repeatedly adds the candidate whose tentative
// addition scores best (ties broken by name, ascending) until no strict
// improvement or max_size.  Candidate ensembles are aligned to the seed and
// voted before scoring.  kGroundTruth scores against ts.ground_truth;
// kEnsembleMedian scores against the aligned vote over the full pool,
// computed once, which needs no ground truth.
SelectionResult greedy_select(const TrackSet& ts, const std::string& seed,
                              const SelectOptions& options);

}  // namespace f0vote

#endif  // F0VOTE_SELECT_HPP_
