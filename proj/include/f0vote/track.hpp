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

// Pitch-track domain types and file I/O.
//
// A track file is UTF-8 text: one header line "time_s,f0_hz" followed by one
// comma-separated row per frame, time strictly ascending on a regular grid.
// f0_hz = 0.0 encodes an unvoiced frame; internally voicing is an explicit
// flag, never a sentinel value.
//
// A manifest is a JSON document binding several estimator tracks over the
// same signal:
//
//   {
//     "reference": "reaper",              // alignment reference, a member key
//     "ground_truth": "truth.csv",        // optional
//     "members": {"reaper": "reaper.csv", "dio": "dio.csv"},
//     "frame_shift_s": 0.005,             // optional grid override
//     "f_min": 25.0, "f_max": 4200.0      // optional load bounds
//   }
//
// Relative paths are resolved against the manifest's directory.  All member
// tracks and the ground truth are resampled onto a common grid (the
// reference member's grid unless frame_shift_s overrides the shift).

#ifndef F0VOTE_TRACK_HPP_
#define F0VOTE_TRACK_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace f0vote {

// Per-frame value: a voicing flag and, for voiced frames only, a frequency
// in Hz (always > 0).
struct FrameValue {
  bool voiced = false;
  double frequency_hz = 0.0;

  static FrameValue Voiced(double frequency_hz) {
    return FrameValue{true, frequency_hz};
  }
  static FrameValue Unvoiced() { return FrameValue{}; }

  friend bool operator==(const FrameValue& a, const FrameValue& b) {
    if (a.voiced != b.voiced) return false;
    return !a.voiced || a.frequency_hz == b.frequency_hz;
  }
};

// Frequency clamp applied when loading tracks from disk.  Voiced values
// outside [f_min, f_max] are treated as "no estimate" and become unvoiced;
// clamping them instead would inject a fake frequency into the median vote.
struct FrequencyBounds {
  double f_min_hz = 25.0;
  double f_max_hz = 4200.0;
};

inline constexpr FrequencyBounds kDefaultBounds{};

// A time-regular sequence of per-frame pitch values.  Frame l has nominal
// time start_time + l * frame_shift.  Immutable after construction; safe to
// share across threads.
class PitchTrack {
 public:
  // Throws std::invalid_argument if frame_shift <= 0, frames is empty, or a
  // voiced frame carries a non-positive frequency.
  PitchTrack(double frame_shift_s, double start_time_s,
             std::vector<FrameValue> frames);

  double frame_shift() const { return frame_shift_s_; }
  double start_time() const { return start_time_s_; }
  std::size_t size() const { return frames_.size(); }
  double time_at(std::size_t l) const {
    return start_time_s_ + static_cast<double>(l) * frame_shift_s_;
  }

  const FrameValue& operator[](std::size_t l) const { return frames_[l]; }
  const std::vector<FrameValue>& frames() const { return frames_; }

  bool voiced(std::size_t l) const { return frames_[l].voiced; }
  double freq(std::size_t l) const { return frames_[l].frequency_hz; }
  std::size_t voiced_count() const;

 private:
  double frame_shift_s_;
  double start_time_s_;
  std::vector<FrameValue> frames_;
};

// True when a and b live on the same sampling grid (equal length; shift and
// start equal within 1e-9).
bool same_grid(const PitchTrack& a, const PitchTrack& b);

// Named collection of tracks from different estimators over one signal.
// After load_manifest all members (and the ground truth, when present) share
// one grid, and reference_name is a member key.
struct TrackSet {
  std::map<std::string, PitchTrack> members;
  std::optional<PitchTrack> ground_truth;
  std::string reference_name;
};

// Reads a track file.  Rows with f0 <= 0 or non-finite become unvoiced;
// voiced frequencies outside bounds become unvoiced.  The frame shift is
// derived from the time column ((t_last - t_first) / (L - 1)); rows may
// jitter around the grid by at most 1% of the shift.  Single-row files get
// the conventional 5 ms shift.  Throws DataError with the offending line
// number on malformed rows, non-monotonic times, or inconsistent steps.
PitchTrack load_track(const std::string& path,
                      const FrequencyBounds& bounds = kDefaultBounds);

// Writes a track file.  Unvoiced frames are written as f0_hz = 0.0; voiced
// frequencies round-trip to at least six significant digits.
void emit_track(const PitchTrack& track, const std::string& path);

// Resamples a track onto the grid {grid_start + i * grid_shift}.  A grid
// time matching a source frame time within 1e-9 s copies that frame; a time
// bracketed by two voiced source frames interpolates linearly in Hz; any
// other time (unvoiced bracket, or outside the source span) is unvoiced.
PitchTrack resample_to_grid(const PitchTrack& track, double grid_shift_s,
                            double grid_start_s, std::size_t grid_len);

// Loads a manifest and every track it names, resampling all of them onto
// the common grid.  Throws DataError on missing files, duplicate member
// names, or an unknown reference.
TrackSet load_manifest(const std::string& path);

// Writes a manifest document for the given set, with member tracks assumed
// to live at the mapped paths (relative to the manifest).
void emit_manifest(const std::string& path, const std::string& reference,
                   const std::map<std::string, std::string>& member_paths,
                   const std::string& ground_truth_path = "",
                   const FrequencyBounds& bounds = kDefaultBounds);

}  // namespace f0vote

#endif  // F0VOTE_TRACK_HPP_
