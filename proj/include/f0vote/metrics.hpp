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

// Scalar track metrics: cent intervals, raw pitch accuracy, V/UV recall and
// false alarm, and cent-error summary statistics.

#ifndef F0VOTE_METRICS_HPP_
#define F0VOTE_METRICS_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "f0vote/track.hpp"

namespace f0vote {

inline constexpr double kDefaultRpaThresholdCents = 50.0;
inline const std::vector<double> kDefaultRpaThresholds = {5.0, 25.0, 50.0};

// Interval of f_hat relative to f_ref in cents: 1200 * log2(f_hat / f_ref).
// Antisymmetric under argument swap.  Throws std::invalid_argument on
// non-positive input.
double cents(double f_hat_hz, double f_ref_hz);

// Raw pitch accuracy: over frames where ref is voiced, the fraction where
// est is also voiced and |cents(est, ref)| < threshold.  Throws
// DegenerateInput when ref has no voiced frames.
double rpa(const PitchTrack& est, const PitchTrack& ref,
           double threshold_cents);

// RPA with est frame l+k paired against ref frame l; pairs falling outside
// [0, L-1] count as incorrect when ref frame l is voiced.  Requires
// |k| <= L-1.
double rpa_shifted(const PitchTrack& est, const PitchTrack& ref, int k,
                   double threshold_cents);

struct VuvScores {
  double recall = 0.0;       // P(est voiced | ref voiced)
  double false_alarm = 0.0;  // P(est voiced | ref unvoiced)
};

// Voiced frames are positives, unvoiced negatives.  Throws DegenerateInput
// when either class is empty in the reference.
VuvScores vuv_scores(const PitchTrack& est, const PitchTrack& ref);

struct DeltaCentStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1) standard deviation
};

// Mean and sample standard deviation of cents(est, ref) over frames where
// both tracks are voiced.  Throws DegenerateInput with fewer than two such
// frames.
DeltaCentStats delta_cent_stats(const PitchTrack& est, const PitchTrack& ref);

struct FrameCounts {
  std::size_t total = 0;
  std::size_t ref_voiced = 0;    // RPA and recall denominator
  std::size_t ref_unvoiced = 0;  // false-alarm denominator
  std::size_t joint_voiced = 0;  // delta-cent denominator
};

struct EvalReport {
  double delta_cent_mean = 0.0;
  double delta_cent_std = 0.0;
  std::map<double, double> rpa;  // threshold (cents) -> ratio
  double vuv_recall = 0.0;
  double vuv_false_alarm = 0.0;
  FrameCounts counted_frames;
};

// Computes the full report at the given RPA thresholds.
EvalReport evaluate(const PitchTrack& est, const PitchTrack& ref,
                    const std::vector<double>& thresholds = kDefaultRpaThresholds);

// One human-readable line: delta-cent mean +- std, RPA per threshold, V/UV.
std::string summary_line(const EvalReport& report);

}  // namespace f0vote

#endif  // F0VOTE_METRICS_HPP_
