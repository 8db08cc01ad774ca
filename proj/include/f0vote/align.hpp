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

// Pre-voting correction of per-estimator temporal offsets and frequency
// biases against a reference track.  The temporal search is exhaustive over
// integer offsets; the frequency bias is the median cent offset over
// jointly voiced aligned pairs, which suppresses octave spikes.

#ifndef F0VOTE_ALIGN_HPP_
#define F0VOTE_ALIGN_HPP_

#include <map>
#include <string>

#include "f0vote/track.hpp"

namespace f0vote {

inline constexpr int kDefaultSearchRange = 10;       // frames
inline constexpr double kDefaultEpsilonCents = 50.0;

struct AlignmentCorrection {
  int k_align = 0;            // frames; corrected(l) = est(l + k_align)
  double f_align_cents = 0.0; // subtracted in the cent domain
  double rpa_at_best = 0.0;   // alignment similarity at k_align
  int search_range = kDefaultSearchRange;
  double epsilon_cents = kDefaultEpsilonCents;
  bool degenerate = false;    // correction was uncomputable; passthrough
};

// Alignment similarity at offset k: the fraction of ALL frames l for which
// est(l+k) and ref(l) are both voiced and |cents| < epsilon.  Out-of-range
// partners count as incorrect.  Note the denominator is the full length L,
// unlike the rpa metric, so the score also rewards voicing overlap.
double alignment_similarity(const PitchTrack& est, const PitchTrack& ref,
                            int k, double epsilon_cents);

struct TemporalOffset {
  int k_align = 0;
  double rpa_at_best = 0.0;
};

// Exhaustive argmax of alignment_similarity over k in [-H, H].  Ties break
// toward smaller |k|, then toward negative k.  Throws DegenerateInput when
// ref has no voiced frame.
TemporalOffset find_temporal_offset(const PitchTrack& est,
                                    const PitchTrack& ref, int search_range,
                                    double epsilon_cents);

// Median of cents(est(l + k_align), ref(l)) over jointly voiced pairs; the
// even-count median is the mean of the two central values.  Throws
// DegenerateInput when no jointly voiced aligned pair exists.
double find_frequency_bias(const PitchTrack& est, const PitchTrack& ref,
                           int k_align);

// Shifts est by k_align (frames referencing outside [0, L-1] become
// unvoiced, the zero-pad convention) and multiplies every voiced frequency
// by 2^(-f_align/1200).  Length and frame shift are preserved.
PitchTrack apply_correction(const PitchTrack& est,
                            const AlignmentCorrection& corr);

struct AlignedSet {
  TrackSet tracks;
  std::map<std::string, AlignmentCorrection> corrections;
};

// Aligns every member to the designated reference member, which passes
// through unchanged with correction (0, 0).  A member whose correction is
// uncomputable (no jointly voiced pair with the reference) passes through
// uncorrected with the degenerate flag set.
AlignedSet align_set(const TrackSet& ts, int search_range = kDefaultSearchRange,
                     double epsilon_cents = kDefaultEpsilonCents);

}  // namespace f0vote

#endif  // F0VOTE_ALIGN_HPP_
