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

#include "f0vote/align.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "f0vote/error.hpp"
#include "f0vote/metrics.hpp"

namespace f0vote {

double alignment_similarity(const PitchTrack& est, const PitchTrack& ref,
                            int k, double epsilon_cents) {
  if (!same_grid(est, ref)) {
    throw std::invalid_argument(
        "alignment_similarity: tracks must share one grid");
  }
  if (!(epsilon_cents > 0.0)) {
    throw std::invalid_argument("alignment_similarity: epsilon must be > 0");
  }
  const auto n = static_cast<long long>(ref.size());
  std::size_t correct = 0;
  for (long long l = 0; l < n; ++l) {
    const long long j = l + k;
    if (j < 0 || j >= n) continue;
    const auto ls = static_cast<std::size_t>(l);
    const auto js = static_cast<std::size_t>(j);
    if (!ref.voiced(ls) || !est.voiced(js)) continue;
    if (std::abs(cents(est.freq(js), ref.freq(ls))) < epsilon_cents) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

TemporalOffset find_temporal_offset(const PitchTrack& est,
                                    const PitchTrack& ref, int search_range,
                                    double epsilon_cents) {
  if (search_range < 0) {
    throw std::invalid_argument("find_temporal_offset: search range >= 0");
  }
  if (ref.voiced_count() == 0) {
    throw DegenerateInput(
        "find_temporal_offset: reference has no voiced frames");
  }
  TemporalOffset best{0, alignment_similarity(est, ref, 0, epsilon_cents)};
  // Visiting magnitudes outward and the negative sign first makes the
  // strictly-greater update implement the tie rule (smallest |k|, then
  // negative k).
  for (int m = 1; m <= search_range; ++m) {
    for (int k : {-m, m}) {
      const double score = alignment_similarity(est, ref, k, epsilon_cents);
      if (score > best.rpa_at_best) best = TemporalOffset{k, score};
    }
  }
  return best;
}

double find_frequency_bias(const PitchTrack& est, const PitchTrack& ref,
                           int k_align) {
  if (!same_grid(est, ref)) {
    throw std::invalid_argument(
        "find_frequency_bias: tracks must share one grid");
  }
  const auto n = static_cast<long long>(ref.size());
  std::vector<double> offsets;
  for (long long l = 0; l < n; ++l) {
    const long long j = l + k_align;
    if (j < 0 || j >= n) continue;
    const auto ls = static_cast<std::size_t>(l);
    const auto js = static_cast<std::size_t>(j);
    if (ref.voiced(ls) && est.voiced(js)) {
      offsets.push_back(cents(est.freq(js), ref.freq(ls)));
    }
  }
  if (offsets.empty()) {
    throw DegenerateInput("find_frequency_bias: no jointly voiced pair");
  }
  const std::size_t m = offsets.size();
  auto mid = offsets.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(offsets.begin(), mid, offsets.end());
  if (m % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(offsets.begin(), mid);
  return 0.5 * (lower + upper);
}

PitchTrack apply_correction(const PitchTrack& est,
                            const AlignmentCorrection& corr) {
  const auto n = static_cast<long long>(est.size());
  const double scale = std::exp2(-corr.f_align_cents / 1200.0);
  std::vector<FrameValue> frames;
  frames.reserve(est.size());
  for (long long l = 0; l < n; ++l) {
    const long long j = l + corr.k_align;
    if (j < 0 || j >= n || !est.voiced(static_cast<std::size_t>(j))) {
      frames.push_back(FrameValue::Unvoiced());
    } else {
      frames.push_back(
          FrameValue::Voiced(est.freq(static_cast<std::size_t>(j)) * scale));
    }
  }
  return PitchTrack(est.frame_shift(), est.start_time(), std::move(frames));
}

AlignedSet align_set(const TrackSet& ts, int search_range,
                     double epsilon_cents) {
  const auto ref_it = ts.members.find(ts.reference_name);
  if (ref_it == ts.members.end()) {
    throw DataError("align_set: reference '" + ts.reference_name +
                    "' is not a member");
  }
  const PitchTrack& ref = ref_it->second;
  if (ref.voiced_count() == 0) {
    throw DegenerateInput("align_set: reference member has no voiced frames");
  }

  AlignedSet result;
  result.tracks.reference_name = ts.reference_name;
  result.tracks.ground_truth = ts.ground_truth;
  for (const auto& [name, track] : ts.members) {
    AlignmentCorrection corr;
    corr.search_range = search_range;
    corr.epsilon_cents = epsilon_cents;
    if (name == ts.reference_name) {
      corr.rpa_at_best = alignment_similarity(ref, ref, 0, epsilon_cents);
      result.tracks.members.emplace(name, track);
    } else {
      try {
        const TemporalOffset off =
            find_temporal_offset(track, ref, search_range, epsilon_cents);
        corr.k_align = off.k_align;
        corr.rpa_at_best = off.rpa_at_best;
        corr.f_align_cents = find_frequency_bias(track, ref, corr.k_align);
        result.tracks.members.emplace(name, apply_correction(track, corr));
      } catch (const DegenerateInput&) {
        corr = AlignmentCorrection{};
        corr.search_range = search_range;
        corr.epsilon_cents = epsilon_cents;
        corr.degenerate = true;
        result.tracks.members.emplace(name, track);
      }
    }
    result.corrections.emplace(name, corr);
  }
  return result;
}

}  // namespace f0vote
