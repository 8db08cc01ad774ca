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

#include "f0vote/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "f0vote/error.hpp"
#include "f0vote/vote.hpp"

namespace f0vote {

std::size_t SignMatrix::row_index(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw std::invalid_argument("SignMatrix: unknown estimator '" + name +
                                "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

SignMatrix sign_matrix(const TrackSet& ts, const PitchTrack& reference) {
  const std::size_t n_frames = reference.size();
  SignMatrix m;
  m.frame_mask.resize(n_frames);
  for (std::size_t l = 0; l < n_frames; ++l) {
    m.frame_mask[l] = reference.voiced(l) ? 1 : 0;
  }
  for (const auto& [name, track] : ts.members) {
    if (!same_grid(track, reference)) {
      throw DataError("sign_matrix: member '" + name +
                      "' is not on the reference grid");
    }
    std::vector<std::int8_t> row(n_frames, 0);
    std::vector<std::uint8_t> valid(n_frames, 0);
    for (std::size_t l = 0; l < n_frames; ++l) {
      if (!reference.voiced(l) || !track.voiced(l)) continue;
      valid[l] = 1;
      const double err = cents(track.freq(l), reference.freq(l));
      row[l] = err > 0.0 ? 1 : (err < 0.0 ? -1 : 0);
    }
    m.names.push_back(name);
    m.rows.push_back(std::move(row));
    m.valid.push_back(std::move(valid));
  }
  return m;
}

namespace {

double pair_sign_correlation(const SignMatrix& m, std::size_t i,
                             std::size_t j) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t l = 0; l < m.frame_mask.size(); ++l) {
    if (!m.valid[i][l] || !m.valid[j][l]) continue;
    const double x = m.rows[i][l];
    const double y = m.rows[j][l];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++count;
  }
  if (count == 0) {
    throw DegenerateInput("avg_sign_correlation: '" + m.names[i] + "' and '" +
                          m.names[j] + "' share no evaluable frame");
  }
  const double nf = static_cast<double>(count);
  const double var_x = sxx / nf - (sx / nf) * (sx / nf);
  const double var_y = syy / nf - (sy / nf) * (sy / nf);
  if (!(var_x > 0.0)) {
    throw DegenerateInput("avg_sign_correlation: constant error sign for '" +
                          m.names[i] + "'");
  }
  if (!(var_y > 0.0)) {
    throw DegenerateInput("avg_sign_correlation: constant error sign for '" +
                          m.names[j] + "'");
  }
  const double cov = sxy / nf - (sx / nf) * (sy / nf);
  return cov / std::sqrt(var_x * var_y);
}

}  // namespace

double avg_sign_correlation(const SignMatrix& m,
                            std::span<const std::string> subset) {
  if (subset.size() < 2) {
    throw std::invalid_argument(
        "avg_sign_correlation: subset needs at least two estimators");
  }
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const std::string& name : subset) idx.push_back(m.row_index(name));
  // Fixed accumulation order keeps the mean exactly symmetric in the
  // subset ordering.
  std::sort(idx.begin(), idx.end());

  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      total += pair_sign_correlation(m, idx[a], idx[b]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

namespace {

// Aligned-and-voted track for a candidate subset.  The seed is the
// alignment reference: it is the only member guaranteed to be present in
// every subset the greedy loop forms.
PitchTrack subset_vote(const TrackSet& ts, std::span<const std::string> subset,
                       const std::string& seed, const SelectOptions& opt) {
  TrackSet sub;
  sub.reference_name = seed;
  for (const std::string& name : subset) {
    sub.members.emplace(name, ts.members.at(name));
  }
  const AlignedSet aligned =
      align_set(sub, opt.search_range, opt.epsilon_cents);
  return vote_set(aligned.tracks, opt.vote_config);
}

double score_subset(const TrackSet& ts, std::span<const std::string> subset,
                    const std::string& seed, const PitchTrack& reference,
                    const SignMatrix& signs, const SelectOptions& opt) {
  if (opt.criterion == SelectionCriterion::kAccuracy) {
    const PitchTrack voted = subset_vote(ts, subset, seed, opt);
    return rpa(voted, reference, opt.rpa_threshold_cents);
  }
  return -avg_sign_correlation(signs, subset);
}

}  // namespace

SelectionResult greedy_select(const TrackSet& ts, const std::string& seed,
                              const SelectOptions& options) {
  if (ts.members.find(seed) == ts.members.end()) {
    throw DataError("greedy_select: seed '" + seed + "' is not a member");
  }
  if (options.max_size < 1) {
    throw std::invalid_argument("greedy_select: max_size must be >= 1");
  }

  PitchTrack reference = [&]() -> PitchTrack {
    if (options.reference_mode == ReferenceMode::kGroundTruth) {
      if (!ts.ground_truth) {
        throw DataError("greedy_select: ground-truth mode needs ground truth");
      }
      return *ts.ground_truth;
    }
    // Ground-truth-free mode: the aligned vote over the full pool stands in
    // for the reference.
    const AlignedSet aligned =
        align_set(ts, options.search_range, options.epsilon_cents);
    return vote_set(aligned.tracks, options.vote_config);
  }();

  const SignMatrix signs = sign_matrix(ts, reference);

  SelectionResult result;
  result.criterion = options.criterion;
  result.chosen.push_back(seed);

  std::vector<std::string> remaining;
  for (const auto& [name, track] : ts.members) {
    if (name != seed) remaining.push_back(name);  // map order: ascending
  }

  const std::size_t target =
      std::min(options.max_size, ts.members.size());
  double current = -std::numeric_limits<double>::infinity();
  if (options.criterion == SelectionCriterion::kAccuracy) {
    current = score_subset(ts, result.chosen, seed, reference, signs, options);
  }

  result.stop_reason = StopReason::kMaxSize;
  while (result.chosen.size() < target) {
    SelectionStep step;
    std::string best_name;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const std::string& cand : remaining) {
      std::vector<std::string> tentative = result.chosen;
      tentative.push_back(cand);
      const double s =
          score_subset(ts, tentative, seed, reference, signs, options);
      step.candidate_scores.emplace(cand, s);
      if (s > best_score) {  // strict: first name in ascending order wins ties
        best_score = s;
        best_name = cand;
      }
    }
    step.score = best_score;
    if (best_score > current) {
      step.chosen = best_name;
      result.chosen.push_back(best_name);
      remaining.erase(
          std::find(remaining.begin(), remaining.end(), best_name));
      current = best_score;
      result.trace.push_back(std::move(step));
    } else {
      result.trace.push_back(std::move(step));
      result.stop_reason = StopReason::kNoImprovement;
      break;
    }
  }
  return result;
}

}  // namespace f0vote
