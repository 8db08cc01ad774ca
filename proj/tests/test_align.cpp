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

#include <cmath>
#include <random>

#include "doctest.h"
#include "f0vote/align.hpp"
#include "f0vote/error.hpp"
#include "f0vote/theory.hpp"
#include "f0vote/track.hpp"
#include "test_util.hpp"

using f0vote::AlignmentCorrection;
using f0vote::DegenerateInput;
using f0vote::FrameValue;
using f0vote::PitchTrack;
using f0vote::TrackSet;

TEST_SUITE("align") {

TEST_CASE("identity aligns at zero offset") {
  const PitchTrack ref = f0vote::synth_contour(1, 300);
  const auto off = f0vote::find_temporal_offset(ref, ref, 10, 50.0);
  CHECK(off.k_align == 0);
  CHECK(off.rpa_at_best ==
        doctest::Approx(static_cast<double>(ref.voiced_count()) /
                        static_cast<double>(ref.size())));
}

TEST_CASE("zero search range always returns zero") {
  const PitchTrack ref = f0vote::synth_contour(2, 200);
  const PitchTrack est = testutil::shift_and_bias(ref, 4, 0.0);
  CHECK(f0vote::find_temporal_offset(est, ref, 0, 50.0).k_align == 0);
}

TEST_CASE("synthetic delay is recovered exactly") {
  const PitchTrack ref = f0vote::synth_contour(3, 400);
  const PitchTrack est = testutil::shift_and_bias(ref, 3, 0.0);
  const auto off = f0vote::find_temporal_offset(est, ref, 10, 50.0);
  CHECK(off.k_align == 3);
  // The search is exhaustive: the returned score is the objective at the
  // returned k and beats every other candidate.
  CHECK(off.rpa_at_best ==
        f0vote::alignment_similarity(est, ref, off.k_align, 50.0));
  for (int k = -10; k <= 10; ++k) {
    CHECK(off.rpa_at_best >= f0vote::alignment_similarity(est, ref, k, 50.0));
  }
}

TEST_CASE("all-unvoiced reference is degenerate") {
  const PitchTrack u(0.005, 0.0,
                     std::vector<FrameValue>(20, FrameValue::Unvoiced()));
  const PitchTrack v = f0vote::synth_contour(5, 20);
  CHECK_THROWS_AS(f0vote::find_temporal_offset(v, u, 5, 50.0),
                  DegenerateInput);
}

TEST_CASE("frequency bias") {
  const PitchTrack ref = f0vote::synth_contour(7, 300);
  SUBCASE("identity has zero bias") {
    CHECK(f0vote::find_frequency_bias(ref, ref, 0) == 0.0);
  }
  SUBCASE("uniform 30-cent scaling is measured exactly") {
    const PitchTrack est = testutil::shift_and_bias(ref, 0, 30.0);
    CHECK(f0vote::find_frequency_bias(est, ref, 0) ==
          doctest::Approx(30.0).epsilon(1e-9));
  }
  SUBCASE("a single octave spike is suppressed by the median") {
    std::vector<FrameValue> frames(5, FrameValue::Voiced(100.0));
    const PitchTrack base(0.005, 0.0, std::move(frames));
    std::vector<FrameValue> spiked(5, FrameValue::Voiced(100.0));
    spiked[4] = FrameValue::Voiced(200.0);
    const PitchTrack est(0.005, 0.0, std::move(spiked));
    CHECK(f0vote::find_frequency_bias(est, base, 0) == 0.0);
  }
  SUBCASE("no jointly voiced pair is degenerate") {
    const PitchTrack u(0.005, 0.0,
                       std::vector<FrameValue>(300, FrameValue::Unvoiced()));
    CHECK_THROWS_AS(f0vote::find_frequency_bias(u, ref, 0), DegenerateInput);
  }
}

TEST_CASE("apply_correction") {
  SUBCASE("zero correction is the identity") {
    const PitchTrack t = f0vote::synth_contour(11, 100);
    const PitchTrack out = f0vote::apply_correction(t, AlignmentCorrection{});
    REQUIRE(out.size() == t.size());
    for (std::size_t l = 0; l < t.size(); ++l) CHECK(out[l] == t[l]);
  }
  SUBCASE("positive shift pulls frames forward and pads the tail") {
    std::vector<FrameValue> frames;
    for (int i = 0; i < 5; ++i) {
      frames.push_back(FrameValue::Voiced(100.0 + i));
    }
    const PitchTrack t(0.005, 0.0, std::move(frames));
    AlignmentCorrection corr;
    corr.k_align = 2;
    const PitchTrack out = f0vote::apply_correction(t, corr);
    CHECK(out[0] == FrameValue::Voiced(102.0));
    CHECK(out[1] == FrameValue::Voiced(103.0));
    CHECK(out[2] == FrameValue::Voiced(104.0));
    CHECK(!out.voiced(3));
    CHECK(!out.voiced(4));
  }
  SUBCASE("frequency correction divides out the bias") {
    const PitchTrack t(0.005, 0.0, {FrameValue::Voiced(100.0)});
    AlignmentCorrection corr;
    corr.f_align_cents = 50.0;
    const PitchTrack out = f0vote::apply_correction(t, corr);
    CHECK(out.freq(0) == doctest::Approx(97.15319411536059).epsilon(1e-12));
  }
  SUBCASE("length and frame shift are preserved") {
    const PitchTrack t = f0vote::synth_contour(13, 77);
    AlignmentCorrection corr;
    corr.k_align = -9;
    corr.f_align_cents = 123.0;
    const PitchTrack out = f0vote::apply_correction(t, corr);
    CHECK(out.size() == t.size());
    CHECK(out.frame_shift() == t.frame_shift());
    CHECK(out.start_time() == t.start_time());
  }
}

TEST_CASE("shift and bias recovery over random contours") {
  // The temporal objective scores |delta-cent| < epsilon on the raw
  // (still biased) track, so epsilon has to clear the largest bias under
  // test; 300 covers the +-200 cent range.
  const double epsilon = 300.0;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> shift_dist(-10, 10);
  std::uniform_real_distribution<double> bias_dist(-200.0, 200.0);
  for (int it = 0; it < 30; ++it) {
    const PitchTrack ref = f0vote::synth_contour(1000 + it, 600);
    REQUIRE(ref.voiced_count() * 4 >= ref.size());  // >= 25% voiced
    const int k_true = shift_dist(rng);
    const double b_true = bias_dist(rng);
    const PitchTrack est = testutil::shift_and_bias(ref, k_true, b_true);

    const auto off = f0vote::find_temporal_offset(est, ref, 10, epsilon);
    REQUIRE(off.k_align == k_true);
    const double bias = f0vote::find_frequency_bias(est, ref, off.k_align);
    REQUIRE(std::abs(bias - b_true) <= 1e-6);

    // Correcting and re-measuring is idempotent.
    AlignmentCorrection corr;
    corr.k_align = off.k_align;
    corr.f_align_cents = bias;
    const PitchTrack fixed = f0vote::apply_correction(est, corr);
    CHECK(f0vote::find_temporal_offset(fixed, ref, 10, epsilon).k_align == 0);
    CHECK(std::abs(f0vote::find_frequency_bias(fixed, ref, 0)) <= 1e-6);
  }
}

TEST_CASE("align_set corrects members against the reference") {
  const PitchTrack ref = f0vote::synth_contour(31, 500);
  TrackSet ts;
  ts.reference_name = "ref";
  ts.members.emplace("ref", ref);
  ts.members.emplace("delayed", testutil::shift_and_bias(ref, 2, 20.0));
  ts.members.emplace("clean", ref);

  const f0vote::AlignedSet aligned = f0vote::align_set(ts, 10, 50.0);
  CHECK(aligned.corrections.at("ref").k_align == 0);
  CHECK(aligned.corrections.at("ref").f_align_cents == 0.0);
  CHECK(aligned.corrections.at("clean").k_align == 0);
  CHECK(aligned.corrections.at("clean").f_align_cents ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(aligned.corrections.at("delayed").k_align == 2);
  CHECK(aligned.corrections.at("delayed").f_align_cents ==
        doctest::Approx(20.0).epsilon(1e-6));

  // After correction the delayed member matches the reference frame-wise
  // over the surviving span.
  const PitchTrack& fixed = aligned.tracks.members.at("delayed");
  std::size_t both = 0;
  for (std::size_t l = 0; l < ref.size(); ++l) {
    if (fixed.voiced(l) && ref.voiced(l)) {
      CHECK(fixed.freq(l) == doctest::Approx(ref.freq(l)).epsilon(1e-9));
      ++both;
    }
  }
  CHECK(both > 100);
}

TEST_CASE("align_set passes degenerate members through with a flag") {
  const PitchTrack ref = f0vote::synth_contour(37, 200);
  const PitchTrack silent(
      0.005, 0.0, std::vector<FrameValue>(ref.size(), FrameValue::Unvoiced()));
  TrackSet ts;
  ts.reference_name = "ref";
  ts.members.emplace("ref", ref);
  ts.members.emplace("silent", silent);
  const f0vote::AlignedSet aligned = f0vote::align_set(ts);
  CHECK(aligned.corrections.at("silent").degenerate);
  CHECK(aligned.corrections.at("silent").k_align == 0);
  for (std::size_t l = 0; l < ref.size(); ++l) {
    CHECK(!aligned.tracks.members.at("silent").voiced(l));
  }
}

TEST_CASE("align_set with an all-unvoiced reference is degenerate") {
  const PitchTrack silent(
      0.005, 0.0, std::vector<FrameValue>(50, FrameValue::Unvoiced()));
  TrackSet ts;
  ts.reference_name = "ref";
  ts.members.emplace("ref", silent);
  CHECK_THROWS_AS(f0vote::align_set(ts), DegenerateInput);
}

TEST_CASE("ties break toward smaller magnitude then negative") {
  SUBCASE("an all-unvoiced estimate ties everywhere and yields zero") {
    std::vector<FrameValue> frames(40, FrameValue::Voiced(100.0));
    const PitchTrack ref(0.005, 0.0, std::move(frames));
    const PitchTrack silent(
        0.005, 0.0, std::vector<FrameValue>(40, FrameValue::Unvoiced()));
    const auto off = f0vote::find_temporal_offset(silent, ref, 5, 50.0);
    CHECK(off.k_align == 0);
    CHECK(off.rpa_at_best == 0.0);
  }
  SUBCASE("equal scores at +-2 resolve to -2") {
    // ref voiced only at frame 10; est voiced at frames 8 and 12 with the
    // same frequency, so exactly k = -2 and k = +2 score 1/L.
    std::vector<FrameValue> ref_frames(21, FrameValue::Unvoiced());
    ref_frames[10] = FrameValue::Voiced(100.0);
    std::vector<FrameValue> est_frames(21, FrameValue::Unvoiced());
    est_frames[8] = FrameValue::Voiced(100.0);
    est_frames[12] = FrameValue::Voiced(100.0);
    const PitchTrack ref(0.005, 0.0, std::move(ref_frames));
    const PitchTrack est(0.005, 0.0, std::move(est_frames));
    const auto off = f0vote::find_temporal_offset(est, ref, 5, 50.0);
    CHECK(off.k_align == -2);
    CHECK(off.rpa_at_best == doctest::Approx(1.0 / 21.0));
  }
}

}  // TEST_SUITE
