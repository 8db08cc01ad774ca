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

// Numerical backing for the two claims behind median voting: the exact
// majority-vote success probability for V/UV flags, and the asymptotic
// variance of the median error
//
//     Var(median - truth) ~= (1 + (n-1)*rho_bar) / (4*n*h_bar^2),
//
// where rho_bar is the average pairwise correlation of error signs and
// h_bar the mean error density at zero.  A seeded simulator generates
// synthetic estimator ensembles with controlled error scale, sign
// correlation, octave-error rate, V/UV accuracy, and per-member time/
// frequency offsets, for validating both formulas and for exercising the
// alignment and voting pipeline end to end.

#ifndef F0VOTE_THEORY_HPP_
#define F0VOTE_THEORY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "f0vote/track.hpp"

namespace f0vote {

enum class ErrorDist { kGaussian, kLaplace };

// Parameters of a synthetic estimator ensemble.  error_scale is the natural
// scale parameter of the distribution (sigma for Gaussian, b for Laplace),
// in cents.  member_time_shifts / member_cent_biases hold each member's
// fixed offset: empty means all zero, a single value broadcasts, otherwise
// one entry per member.
struct EnsembleSpec {
  int n = 5;
  double error_scale_cents = 30.0;
  ErrorDist error_dist = ErrorDist::kGaussian;
  double sign_correlation = 0.0;  // target rho_bar in [0, 1)
  double octave_error_rate = 0.0;
  double vuv_accuracy = 1.0;
  std::vector<int> member_time_shifts;
  std::vector<double> member_cent_biases;
  std::uint64_t seed = 0;
};

struct VariancePrediction {
  double predicted = 0.0;  // formula value, cents^2
  double empirical = 0.0;  // Monte-Carlo variance of the median error
  int n = 0;
  double rho_bar_used = 0.0;  // measured from the generated signs
  double h_bar_used = 0.0;    // closed-form density at zero, 1/cents
};

struct CondorcetValidation {
  double exact = 0.0;
  double empirical = 0.0;
};

// Probability that a majority of n independent voters, each correct with
// probability p, is correct.  n must be odd (even-n tie behavior belongs to
// the voting stage, not this formula).
double condorcet_exact(double p, int n);

// Evaluates the variance formula.  Requires h_bar > 0 and, for n >= 2,
// -1/(n-1) < rho_bar < 1.
double variance_predict(int n, double rho_bar, double h_bar);

// Smooth synthetic ground-truth contour: voiced segments gliding
// log-linearly between waypoints in [f_lo, f_hi], separated by unvoiced
// gaps, with unvoiced margins at both ends.  Deterministic given the seed.
struct ContourParams {
  double f_lo_hz = 100.0;
  double f_hi_hz = 400.0;
  std::size_t voiced_min = 20, voiced_max = 60;  // frames
  std::size_t gap_min = 8, gap_max = 20;
  std::size_t margin = 12;
  double frame_shift_s = 0.005;
};

PitchTrack synth_contour(std::uint64_t seed, std::size_t frames,
                         const ContourParams& params = {});

// Mixing weight w such that errors of the form
// sqrt(w)*shared + sqrt(1-w)*independent have pairwise sign correlation
// approximately target_rho.  Calibrated by bisection against a fixed pilot
// sample; the sign correlation of such a mixture has no usable closed form
// for both distributions.
double calibrate_sign_mixing(ErrorDist dist, double target_rho,
                             std::uint64_t seed,
                             std::size_t pilot_samples = 20000);

// Generates ground truth plus n member tracks with the spec's error model.
// Returns the set with ground_truth filled in and the first member as the
// alignment reference.  Bit-reproducible for a fixed seed.
TrackSet simulate_ensemble(const EnsembleSpec& spec, std::size_t frames);

// Monte-Carlo check of the variance formula on single-frame trials
// (i.i.d., so the variance estimate is unbiased).  The spec must be in the
// pure regime: no shifts, biases, or octave errors.  pilot_frames sizes the
// sign-mixing calibration sample.
VariancePrediction validate_variance(const EnsembleSpec& spec,
                                     std::size_t pilot_frames,
                                     std::size_t trials);

// Empirical majority-correct rate over seeded Bernoulli trials, next to the
// exact value.
CondorcetValidation validate_condorcet(double p, int n, std::size_t trials,
                                       std::uint64_t seed = 0);

}  // namespace f0vote

#endif  // F0VOTE_THEORY_HPP_
