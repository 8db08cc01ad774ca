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

#include "f0vote/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "f0vote/error.hpp"

namespace f0vote {

namespace {

// Stream ids for deriving independent RNGs from one spec seed.
enum Stream : std::uint64_t {
  kStreamContour = 1,
  kStreamCalibration = 2,
  kStreamShared = 3,
  kStreamTrialBase = 1000,
  kStreamMemberBase = 1u << 20,
};

// splitmix64 finalizer; decorrelates (seed, stream) pairs before seeding.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Unit-scale draw: sigma = 1 for Gaussian, b = 1 for Laplace.
double sample_standard(ErrorDist dist, std::mt19937_64& rng) {
  if (dist == ErrorDist::kGaussian) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  double u = uniform01(rng);
  if (u <= 0.0) u = std::numeric_limits<double>::min();
  if (u >= 1.0) u = 1.0 - 1e-16;
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

double density_at_zero(ErrorDist dist, double scale) {
  if (dist == ErrorDist::kGaussian) {
    return 1.0 / (scale * std::sqrt(2.0 * std::numbers::pi));
  }
  return 1.0 / (2.0 * scale);
}

double median_inplace(std::vector<double>& v) {
  const std::size_t m = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (m % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

double condorcet_exact(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("condorcet_exact: p must lie in [0, 1]");
  }
  if (n < 1 || n % 2 == 0) {
    throw std::invalid_argument("condorcet_exact: n must be odd and >= 1");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const int m_lo = (n + 1) / 2;
  double total = 0.0;
  if (n <= 60) {
    // Binomial coefficients are exact in double up to here.
    double coeff = 1.0;  // C(n, m) built incrementally from m = 0
    for (int m = 1; m <= n; ++m) {
      coeff *= static_cast<double>(n - m + 1) / static_cast<double>(m);
      if (m >= m_lo) {
        total += coeff * std::pow(p, m) * std::pow(1.0 - p, n - m);
      }
    }
  } else {
    for (int m = m_lo; m <= n; ++m) {
      const double log_term = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                              std::lgamma(n - m + 1.0) + m * std::log(p) +
                              (n - m) * std::log1p(-p);
      total += std::exp(log_term);
    }
  }
  return std::min(total, 1.0);
}

double variance_predict(int n, double rho_bar, double h_bar) {
  if (n < 1) throw std::invalid_argument("variance_predict: n must be >= 1");
  if (!(h_bar > 0.0)) {
    throw std::invalid_argument("variance_predict: h_bar must be > 0");
  }
  if (n >= 2) {
    if (rho_bar >= 1.0) {
      throw std::invalid_argument("variance_predict: rho_bar must be < 1");
    }
    if (rho_bar <= -1.0 / static_cast<double>(n - 1)) {
      throw std::invalid_argument(
          "variance_predict: rho_bar must exceed -1/(n-1)");
    }
  }
  const double numer = 1.0 + static_cast<double>(n - 1) * rho_bar;
  return numer / (4.0 * static_cast<double>(n) * h_bar * h_bar);
}

PitchTrack synth_contour(std::uint64_t seed, std::size_t frames,
                         const ContourParams& params) {
  if (frames < 1) {
    throw std::invalid_argument("synth_contour: frames must be >= 1");
  }
  std::mt19937_64 rng = make_rng(seed, kStreamContour);
  const double log_lo = std::log(params.f_lo_hz);
  const double log_hi = std::log(params.f_hi_hz);
  auto draw_log_freq = [&]() {
    return log_lo + uniform01(rng) * (log_hi - log_lo);
  };
  auto draw_len = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01(rng) *
                                         static_cast<double>(hi - lo + 1));
  };

  std::vector<FrameValue> track(frames, FrameValue::Unvoiced());
  std::size_t pos = params.margin;
  const std::size_t end =
      frames > params.margin ? frames - params.margin : 0;
  while (pos < end) {
    std::size_t vlen = draw_len(params.voiced_min, params.voiced_max);
    vlen = std::min(vlen, end - pos);
    if (vlen < 4) break;
    const double a = draw_log_freq();
    const double b = draw_log_freq();
    for (std::size_t i = 0; i < vlen; ++i) {
      const double w =
          vlen > 1 ? static_cast<double>(i) / static_cast<double>(vlen - 1)
                   : 0.0;
      track[pos + i] = FrameValue::Voiced(std::exp(a + w * (b - a)));
    }
    pos += vlen + draw_len(params.gap_min, params.gap_max);
  }
  return PitchTrack(params.frame_shift_s, 0.0, std::move(track));
}

double calibrate_sign_mixing(ErrorDist dist, double target_rho,
                             std::uint64_t seed, std::size_t pilot_samples) {
  if (!(target_rho >= 0.0 && target_rho < 1.0)) {
    throw std::invalid_argument(
        "calibrate_sign_mixing: target must lie in [0, 1)");
  }
  if (target_rho == 0.0) return 0.0;

  std::mt19937_64 rng = make_rng(seed, kStreamCalibration);
  std::vector<double> shared(pilot_samples), ua(pilot_samples),
      ub(pilot_samples);
  for (std::size_t i = 0; i < pilot_samples; ++i) {
    shared[i] = sample_standard(dist, rng);
    ua[i] = sample_standard(dist, rng);
    ub[i] = sample_standard(dist, rng);
  }

  // Sign correlation of the mixture over the fixed pilot sample; reusing
  // the draws keeps the objective effectively monotone in w.
  auto measured = [&](double w) {
    const double sw = std::sqrt(w);
    const double si = std::sqrt(1.0 - w);
    double sx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < pilot_samples; ++i) {
      const double x = static_cast<double>(
          sign_of(sw * shared[i] + si * ua[i]));
      const double y = static_cast<double>(
          sign_of(sw * shared[i] + si * ub[i]));
      sx += x;
      sy += y;
      sxy += x * y;
    }
    const double nf = static_cast<double>(pilot_samples);
    const double mx = sx / nf, my = sy / nf;
    const double vx = 1.0 - mx * mx, vy = 1.0 - my * my;
    return (sxy / nf - mx * my) / std::sqrt(vx * vy);
  };

  double lo = 0.0, hi = 1.0 - 1e-12;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (measured(mid) < target_rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

std::vector<int> expand_shifts(const EnsembleSpec& spec) {
  if (spec.member_time_shifts.empty()) return std::vector<int>(spec.n, 0);
  if (spec.member_time_shifts.size() == 1) {
    return std::vector<int>(spec.n, spec.member_time_shifts[0]);
  }
  if (spec.member_time_shifts.size() != static_cast<std::size_t>(spec.n)) {
    throw std::invalid_argument(
        "EnsembleSpec: member_time_shifts must have 0, 1, or n entries");
  }
  return spec.member_time_shifts;
}

std::vector<double> expand_biases(const EnsembleSpec& spec) {
  if (spec.member_cent_biases.empty()) return std::vector<double>(spec.n, 0.0);
  if (spec.member_cent_biases.size() == 1) {
    return std::vector<double>(spec.n, spec.member_cent_biases[0]);
  }
  if (spec.member_cent_biases.size() != static_cast<std::size_t>(spec.n)) {
    throw std::invalid_argument(
        "EnsembleSpec: member_cent_biases must have 0, 1, or n entries");
  }
  return spec.member_cent_biases;
}

void validate_spec(const EnsembleSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("EnsembleSpec: n must be >= 1");
  if (!(spec.error_scale_cents > 0.0)) {
    throw std::invalid_argument("EnsembleSpec: error scale must be > 0");
  }
  if (!(spec.sign_correlation >= 0.0 && spec.sign_correlation < 1.0)) {
    throw std::invalid_argument(
        "EnsembleSpec: sign correlation must lie in [0, 1)");
  }
  if (!(spec.octave_error_rate >= 0.0 && spec.octave_error_rate <= 1.0) ||
      !(spec.vuv_accuracy >= 0.0 && spec.vuv_accuracy <= 1.0)) {
    throw std::invalid_argument("EnsembleSpec: probabilities must lie in [0, 1]");
  }
}

std::string member_name(int index, int n) {
  int width = 2;
  for (int v = n; v >= 100 && width < 10; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "est%0*d", width, index + 1);
  return buf;
}

}  // namespace

TrackSet simulate_ensemble(const EnsembleSpec& spec, std::size_t frames) {
  validate_spec(spec);
  if (frames < 1) {
    throw std::invalid_argument("simulate_ensemble: frames must be >= 1");
  }
  const std::vector<int> shifts = expand_shifts(spec);
  const std::vector<double> biases = expand_biases(spec);

  const PitchTrack truth = synth_contour(spec.seed, frames);
  const double w =
      calibrate_sign_mixing(spec.error_dist, spec.sign_correlation, spec.seed);
  const double sw = std::sqrt(w);
  const double si = std::sqrt(1.0 - w);

  // Fallback frequency for false-alarm frames: the nearest voiced truth
  // frequency, scanning backward first.
  std::vector<double> fallback(frames, 150.0);
  {
    double last = 0.0;
    for (std::size_t l = 0; l < frames; ++l) {
      if (truth.voiced(l)) last = truth.freq(l);
      if (last > 0.0) fallback[l] = last;
    }
    double next = 0.0;
    for (std::size_t l = frames; l-- > 0;) {
      if (truth.voiced(l)) next = truth.freq(l);
      if (!truth.voiced(l) && fallback[l] == 150.0 && next > 0.0) {
        fallback[l] = next;
      }
    }
  }

  std::mt19937_64 shared_rng = make_rng(spec.seed, kStreamShared);
  std::vector<double> shared(frames);
  for (std::size_t l = 0; l < frames; ++l) {
    shared[l] = sample_standard(spec.error_dist, shared_rng);
  }

  TrackSet ts;
  ts.ground_truth = truth;
  for (int i = 0; i < spec.n; ++i) {
    std::mt19937_64 rng = make_rng(spec.seed, kStreamMemberBase + i);
    // Per-source-frame draws, in a fixed order independent of voicing.
    std::vector<double> noise(frames);
    std::vector<std::uint8_t> vuv_correct(frames), octave(frames);
    std::vector<double> octave_sign(frames);
    for (std::size_t l = 0; l < frames; ++l) {
      noise[l] = sw * shared[l] + si * sample_standard(spec.error_dist, rng);
      vuv_correct[l] = uniform01(rng) < spec.vuv_accuracy ? 1 : 0;
      octave[l] = uniform01(rng) < spec.octave_error_rate ? 1 : 0;
      octave_sign[l] = uniform01(rng) < 0.5 ? 1.0 : -1.0;
    }

    std::vector<FrameValue> member(frames, FrameValue::Unvoiced());
    for (std::size_t l = 0; l < frames; ++l) {
      const long long j =
          static_cast<long long>(l) - static_cast<long long>(shifts[i]);
      if (j < 0 || j >= static_cast<long long>(frames)) continue;
      const auto js = static_cast<std::size_t>(j);
      const bool truth_voiced = truth.voiced(js);
      const bool member_voiced =
          truth_voiced ? (vuv_correct[js] != 0) : (vuv_correct[js] == 0);
      if (!member_voiced) continue;
      const double base = truth_voiced ? truth.freq(js) : fallback[js];
      double err = biases[i] + spec.error_scale_cents * noise[js];
      if (octave[js]) err += octave_sign[js] * 1200.0;
      member[l] = FrameValue::Voiced(base * std::exp2(err / 1200.0));
    }
    ts.members.emplace(member_name(i, spec.n),
                       PitchTrack(truth.frame_shift(), truth.start_time(),
                                  std::move(member)));
  }
  ts.reference_name = member_name(0, spec.n);
  return ts;
}

VariancePrediction validate_variance(const EnsembleSpec& spec,
                                     std::size_t pilot_frames,
                                     std::size_t trials) {
  validate_spec(spec);
  if (trials < 100) {
    throw std::invalid_argument("validate_variance: trials must be >= 100");
  }
  const std::vector<int> shifts = expand_shifts(spec);
  const std::vector<double> biases = expand_biases(spec);
  const bool pure =
      spec.octave_error_rate == 0.0 &&
      std::all_of(shifts.begin(), shifts.end(), [](int s) { return s == 0; }) &&
      std::all_of(biases.begin(), biases.end(),
                  [](double b) { return b == 0.0; });
  if (!pure) {
    throw std::invalid_argument(
        "validate_variance: spec must have no shifts, biases, or octave "
        "errors");
  }

  const int n = spec.n;
  const double w = calibrate_sign_mixing(spec.error_dist,
                                         spec.sign_correlation, spec.seed,
                                         pilot_frames);
  const double sw = std::sqrt(w);
  const double si = std::sqrt(1.0 - w);

  std::vector<double> medians(trials);
  std::vector<double> sum_sign(n, 0.0);
  std::vector<double> sum_pair(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> errors(n);
  std::vector<int> signs(n);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng = make_rng(spec.seed, kStreamTrialBase + t);
    const double shared = sample_standard(spec.error_dist, rng);
    for (int i = 0; i < n; ++i) {
      errors[i] = spec.error_scale_cents *
                  (sw * shared + si * sample_standard(spec.error_dist, rng));
      signs[i] = sign_of(errors[i]);
      sum_sign[i] += signs[i];
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        sum_pair[static_cast<std::size_t>(i) * n + j] += signs[i] * signs[j];
      }
    }
    medians[t] = median_inplace(errors);
  }

  double mean = 0.0;
  for (double m : medians) mean += m;
  mean /= static_cast<double>(trials);
  double ss = 0.0;
  for (double m : medians) ss += (m - mean) * (m - mean);
  const double empirical = ss / static_cast<double>(trials - 1);

  double rho_bar = 0.0;
  if (n >= 2) {
    const double tf = static_cast<double>(trials);
    double total = 0.0;
    std::size_t pairs = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double mi = sum_sign[i] / tf;
        const double mj = sum_sign[j] / tf;
        const double cov =
            sum_pair[static_cast<std::size_t>(i) * n + j] / tf - mi * mj;
        // sign^2 == 1 (zero errors have probability zero), so the variance
        // is 1 - mean^2.
        total += cov / std::sqrt((1.0 - mi * mi) * (1.0 - mj * mj));
        ++pairs;
      }
    }
    rho_bar = total / static_cast<double>(pairs);
  }

  const double h_bar = density_at_zero(spec.error_dist, spec.error_scale_cents);
  VariancePrediction out;
  out.predicted = variance_predict(n, rho_bar, h_bar);
  out.empirical = empirical;
  out.n = n;
  out.rho_bar_used = rho_bar;
  out.h_bar_used = h_bar;
  return out;
}

CondorcetValidation validate_condorcet(double p, int n, std::size_t trials,
                                       std::uint64_t seed) {
  if (trials < 1000) {
    throw std::invalid_argument("validate_condorcet: trials must be >= 1000");
  }
  const double exact = condorcet_exact(p, n);
  std::size_t majority_correct = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng = make_rng(seed, kStreamTrialBase + t);
    int correct = 0;
    for (int i = 0; i < n; ++i) {
      if (uniform01(rng) < p) ++correct;
    }
    if (2 * correct > n) ++majority_correct;
  }
  return CondorcetValidation{
      exact, static_cast<double>(majority_correct) /
                 static_cast<double>(trials)};
}

}  // namespace f0vote
