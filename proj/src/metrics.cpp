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

#include "f0vote/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "f0vote/error.hpp"

namespace f0vote {

namespace {

void require_same_grid(const PitchTrack& est, const PitchTrack& ref,
                       const char* op) {
  if (!same_grid(est, ref)) {
    throw std::invalid_argument(std::string(op) +
                                ": tracks must share one grid");
  }
}

}  // namespace

double cents(double f_hat_hz, double f_ref_hz) {
  if (!(f_hat_hz > 0.0) || !(f_ref_hz > 0.0)) {
    throw std::invalid_argument("cents: frequencies must be > 0");
  }
  return 1200.0 * std::log2(f_hat_hz / f_ref_hz);
}

double rpa(const PitchTrack& est, const PitchTrack& ref,
           double threshold_cents) {
  return rpa_shifted(est, ref, 0, threshold_cents);
}

double rpa_shifted(const PitchTrack& est, const PitchTrack& ref, int k,
                   double threshold_cents) {
  require_same_grid(est, ref, "rpa");
  if (!(threshold_cents > 0.0)) {
    throw std::invalid_argument("rpa: threshold must be > 0");
  }
  const auto n = static_cast<long long>(ref.size());
  if (std::llabs(static_cast<long long>(k)) > n - 1) {
    throw std::invalid_argument("rpa_shifted: |k| must be <= L-1");
  }
  std::size_t ref_voiced = 0;
  std::size_t correct = 0;
  for (long long l = 0; l < n; ++l) {
    if (!ref.voiced(static_cast<std::size_t>(l))) continue;
    ++ref_voiced;
    const long long j = l + k;
    if (j < 0 || j >= n) continue;
    const auto js = static_cast<std::size_t>(j);
    if (!est.voiced(js)) continue;
    if (std::abs(cents(est.freq(js), ref.freq(static_cast<std::size_t>(l)))) <
        threshold_cents) {
      ++correct;
    }
  }
  if (ref_voiced == 0) {
    throw DegenerateInput("rpa: reference has no voiced frames");
  }
  return static_cast<double>(correct) / static_cast<double>(ref_voiced);
}

VuvScores vuv_scores(const PitchTrack& est, const PitchTrack& ref) {
  require_same_grid(est, ref, "vuv_scores");
  std::size_t ref_v = 0, ref_u = 0, hit = 0, fa = 0;
  for (std::size_t l = 0; l < ref.size(); ++l) {
    if (ref.voiced(l)) {
      ++ref_v;
      if (est.voiced(l)) ++hit;
    } else {
      ++ref_u;
      if (est.voiced(l)) ++fa;
    }
  }
  if (ref_v == 0) {
    throw DegenerateInput("vuv_scores: reference has no voiced frames");
  }
  if (ref_u == 0) {
    throw DegenerateInput("vuv_scores: reference has no unvoiced frames");
  }
  return VuvScores{static_cast<double>(hit) / static_cast<double>(ref_v),
                   static_cast<double>(fa) / static_cast<double>(ref_u)};
}

DeltaCentStats delta_cent_stats(const PitchTrack& est, const PitchTrack& ref) {
  require_same_grid(est, ref, "delta_cent_stats");
  std::vector<double> errors;
  errors.reserve(ref.size());
  for (std::size_t l = 0; l < ref.size(); ++l) {
    if (est.voiced(l) && ref.voiced(l)) {
      errors.push_back(cents(est.freq(l), ref.freq(l)));
    }
  }
  if (errors.size() < 2) {
    throw DegenerateInput(
        "delta_cent_stats: fewer than two jointly voiced frames");
  }
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(errors.size());
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  const double var = ss / static_cast<double>(errors.size() - 1);
  return DeltaCentStats{mean, std::sqrt(var)};
}

EvalReport evaluate(const PitchTrack& est, const PitchTrack& ref,
                    const std::vector<double>& thresholds) {
  EvalReport report;
  for (double thr : thresholds) report.rpa[thr] = rpa(est, ref, thr);
  const VuvScores vuv = vuv_scores(est, ref);
  report.vuv_recall = vuv.recall;
  report.vuv_false_alarm = vuv.false_alarm;
  const DeltaCentStats stats = delta_cent_stats(est, ref);
  report.delta_cent_mean = stats.mean;
  report.delta_cent_std = stats.stddev;

  FrameCounts& counts = report.counted_frames;
  counts.total = ref.size();
  for (std::size_t l = 0; l < ref.size(); ++l) {
    if (ref.voiced(l)) {
      ++counts.ref_voiced;
      if (est.voiced(l)) ++counts.joint_voiced;
    } else {
      ++counts.ref_unvoiced;
    }
  }
  return report;
}

std::string summary_line(const EvalReport& report) {
  char buf[160];
  std::string line;
  std::snprintf(buf, sizeof(buf), "dcent %.2f +- %.2f |",
                report.delta_cent_mean, report.delta_cent_std);
  line += buf;
  for (const auto& [thr, value] : report.rpa) {
    std::snprintf(buf, sizeof(buf), " RPA%g %.2f%%", thr, 100.0 * value);
    line += buf;
  }
  std::snprintf(buf, sizeof(buf), " | recall %.2f%% FA %.2f%%",
                100.0 * report.vuv_recall, 100.0 * report.vuv_false_alarm);
  line += buf;
  return line;
}

}  // namespace f0vote
