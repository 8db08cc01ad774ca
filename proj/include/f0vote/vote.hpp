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

// Per-frame aggregation of a track set into one voted track: mode of the
// V/UV flags, median of the frequencies of the members that voted voiced.

#ifndef F0VOTE_VOTE_HPP_
#define F0VOTE_VOTE_HPP_

#include <span>

#include "f0vote/track.hpp"

namespace f0vote {

enum class TieRule { kFavorVoiced, kFavorUnvoiced };
enum class MedianDomain { kHz, kLogHz };
enum class ContributorRule { kVoicedMembersOnly };

struct VoteConfig {
  // kFavorVoiced keeps recall high on even splits, which is what synthesis
  // use cares about.
  TieRule tie_rule = TieRule::kFavorVoiced;
  // The even-count median averages the two central values; kHz averages in
  // hertz, kLogHz in the log domain.  Odd counts agree in both.
  MedianDomain median_domain = MedianDomain::kHz;
  ContributorRule contributor_rule = ContributorRule::kVoicedMembersOnly;
};

// Votes one frame.  Voiced iff strictly more than half the members are
// voiced, or exactly half under kFavorVoiced; the frequency is the median
// over the voiced members only.  Throws std::invalid_argument on an empty
// list.
FrameValue vote_frame(std::span<const FrameValue> values,
                      const VoteConfig& config = {});

// Frame-wise vote over all members (ground truth excluded), on the common
// grid.
PitchTrack vote_set(const TrackSet& ts, const VoteConfig& config = {});

}  // namespace f0vote

#endif  // F0VOTE_VOTE_HPP_
