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

// End-to-end compositions used by the command-line tool: align-then-vote
// over a track set, and the full evaluation of every member plus the three
// voting configurations (full alignment, temporal only, none) against
// ground truth.  Report serialization lives here too so every subcommand
// emits the same JSON shapes.

#ifndef F0VOTE_PIPELINE_HPP_
#define F0VOTE_PIPELINE_HPP_

#include <map>
#include <string>
#include <vector>

#include "f0vote/align.hpp"
#include "f0vote/metrics.hpp"
#include "f0vote/select.hpp"
#include "f0vote/track.hpp"
#include "f0vote/vote.hpp"
#include "json.hpp"

namespace f0vote {

enum class AlignMode { kNone, kTimeOnly, kFull };

struct PipelineResult {
  PitchTrack voted;
  std::map<std::string, AlignmentCorrection> corrections;  // empty for kNone
};

// Aligns members per mode (kTimeOnly zeroes the frequency component of each
// correction) and votes.
PipelineResult run_pipeline(const TrackSet& ts, AlignMode mode,
                            const VoteConfig& config = {},
                            int search_range = kDefaultSearchRange,
                            double epsilon_cents = kDefaultEpsilonCents);

struct EvalRunResult {
  std::map<std::string, EvalReport> members;  // raw tracks vs ground truth
  EvalReport vote_full;
  EvalReport vote_time_only;
  EvalReport vote_none;
  std::map<std::string, AlignmentCorrection> corrections;
};

// Evaluates every member and the three voting configurations against the
// set's ground truth.  Throws DataError when the set has none.
EvalRunResult run_eval(const TrackSet& ts,
                       const std::vector<double>& thresholds = kDefaultRpaThresholds,
                       int search_range = kDefaultSearchRange,
                       double epsilon_cents = kDefaultEpsilonCents,
                       const VoteConfig& config = {});

// JSON shapes shared by the CLI subcommands.
nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const AlignmentCorrection& corr);
nlohmann::ordered_json to_json(const SelectionResult& result);
nlohmann::ordered_json corrections_json(
    const std::map<std::string, AlignmentCorrection>& corrections);

// Writes a JSON document to path with a trailing newline.
void write_json(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace f0vote

#endif  // F0VOTE_PIPELINE_HPP_
