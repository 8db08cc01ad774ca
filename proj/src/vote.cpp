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

#include "f0vote/vote.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "f0vote/error.hpp"

namespace f0vote {

namespace {

// Median of the contributing frequencies.  Order statistics are the same in
// Hz and log-Hz, so odd counts return the central value untouched; only the
// even-count averaging depends on the domain (arithmetic vs geometric mean).
double median_inplace(std::vector<double>& v, MedianDomain domain) {
  const std::size_t m = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (m % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  if (domain == MedianDomain::kLogHz) return std::sqrt(lower * upper);
  return 0.5 * (lower + upper);
}

}  // namespace

FrameValue vote_frame(std::span<const FrameValue> values,
                      const VoteConfig& config) {
  if (values.empty()) {
    throw std::invalid_argument("vote_frame: empty member list");
  }
  const std::size_t n = values.size();
  std::size_t voiced = 0;
  for (const FrameValue& v : values) {
    if (v.voiced) ++voiced;
  }
  const bool vote_voiced =
      2 * voiced > n ||
      (2 * voiced == n && config.tie_rule == TieRule::kFavorVoiced);
  if (!vote_voiced) return FrameValue::Unvoiced();

  std::vector<double> freqs;
  freqs.reserve(voiced);
  for (const FrameValue& v : values) {
    if (v.voiced) freqs.push_back(v.frequency_hz);
  }
  return FrameValue::Voiced(median_inplace(freqs, config.median_domain));
}

PitchTrack vote_set(const TrackSet& ts, const VoteConfig& config) {
  if (ts.members.empty()) {
    throw DegenerateInput("vote_set: track set has no members");
  }
  const PitchTrack& first = ts.members.begin()->second;
  for (const auto& [name, track] : ts.members) {
    if (!same_grid(track, first)) {
      throw DataError("vote_set: member '" + name +
                      "' is not on the common grid");
    }
  }
  std::vector<FrameValue> voted;
  voted.reserve(first.size());
  std::vector<FrameValue> column(ts.members.size());
  for (std::size_t l = 0; l < first.size(); ++l) {
    std::size_t i = 0;
    for (const auto& [name, track] : ts.members) column[i++] = track[l];
    voted.push_back(vote_frame(column, config));
  }
  return PitchTrack(first.frame_shift(), first.start_time(), std::move(voted));
}

}  // namespace f0vote
