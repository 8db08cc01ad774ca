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

// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails.  Criteria cover metric oracle equivalence, the exactness of the
// majority-vote formula, the median-variance law, alignment recovery, the
// alignment ablation ordering, voting robustness, greedy selection sanity,
// and byte-level determinism of the command-line tool.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "f0vote/align.hpp"
#include "f0vote/error.hpp"
#include "f0vote/metrics.hpp"
#include "f0vote/pipeline.hpp"
#include "f0vote/select.hpp"
#include "f0vote/theory.hpp"
#include "f0vote/track.hpp"
#include "f0vote/vote.hpp"
#include "json.hpp"

#ifndef F0VOTE_CLI_PATH
#error "F0VOTE_CLI_PATH must point at the f0vote binary"
#endif

namespace {

using f0vote::AlignMode;
using f0vote::EnsembleSpec;
using f0vote::FrameValue;
using f0vote::PitchTrack;
using f0vote::TrackSet;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Test-side oracles (kept independent of the library implementations).

double oracle_cents(double a, double b) {
  return static_cast<double>(
      1200.0L * std::log(static_cast<long double>(a) /
                         static_cast<long double>(b)) /
      std::log(2.0L));
}

double oracle_condorcet(double p, int n) {
  double total = 0.0;
  for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
    if (2 * __builtin_popcountll(mask) <= n) continue;
    double prob = 1.0;
    for (int i = 0; i < n; ++i) prob *= (mask >> i) & 1u ? p : 1.0 - p;
    total += prob;
  }
  return total;
}

PitchTrack random_track(std::mt19937_64& rng, std::size_t len) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FrameValue> frames;
  for (std::size_t l = 0; l < len; ++l) {
    if (unit(rng) < 0.7) {
      frames.push_back(
          FrameValue::Voiced(std::exp(std::log(50.0) +
                                      unit(rng) * std::log(2000.0 / 50.0))));
    } else {
      frames.push_back(FrameValue::Unvoiced());
    }
  }
  return PitchTrack(0.005, 0.0, std::move(frames));
}

PitchTrack shift_and_bias(const PitchTrack& base, int k, double bias_cents) {
  const long long n = static_cast<long long>(base.size());
  std::vector<FrameValue> frames(base.size(), FrameValue::Unvoiced());
  const double scale = std::exp2(bias_cents / 1200.0);
  for (long long l = 0; l < n; ++l) {
    const long long j = l - k;
    if (j < 0 || j >= n) continue;
    if (base.voiced(static_cast<std::size_t>(j))) {
      frames[static_cast<std::size_t>(l)] =
          FrameValue::Voiced(base.freq(static_cast<std::size_t>(j)) * scale);
    }
  }
  return PitchTrack(base.frame_shift(), base.start_time(), std::move(frames));
}

PitchTrack add_noise(const PitchTrack& base, double sigma,
                     std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<FrameValue> frames = base.frames();
  for (FrameValue& f : frames) {
    if (f.voiced) f.frequency_hz *= std::exp2(noise(rng) / 1200.0);
  }
  return PitchTrack(base.frame_shift(), base.start_time(), std::move(frames));
}

// ---------------------------------------------------------------------------
// Criterion 1: rpa / vuv_scores / delta_cent_stats equal a brute-force
// per-frame implementation on 1000 random pairs, counts bit-for-bit and
// cents to 1e-9 relative.  Budget 5 s.

Outcome criterion_metrics_oracle() {
  const double t0 = now_seconds();
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int live = 0;
  for (int it = 0; it < 1000; ++it) {
    const std::size_t len = 1 + rng() % 64;
    const PitchTrack ref = random_track(rng, len);
    PitchTrack est = random_track(rng, len);
    if (unit(rng) < 0.3) {
      est = add_noise(ref, 60.0, rng);
    }
    const double thr = 1.0 + 99.0 * unit(rng);

    // RPA: recount frames independently.
    std::size_t ref_voiced = 0, correct = 0;
    for (std::size_t l = 0; l < len; ++l) {
      if (!ref.voiced(l)) continue;
      ++ref_voiced;
      if (!est.voiced(l)) continue;
      const double d = oracle_cents(est.freq(l), ref.freq(l));
      if (d < thr && d > -thr) ++correct;
    }
    if (ref_voiced == 0) {
      try {
        (void)f0vote::rpa(est, ref, thr);
        return {false, fmt("case %d: expected degenerate rpa", it)};
      } catch (const f0vote::DegenerateInput&) {
      }
    } else {
      ++live;
      const double got = f0vote::rpa(est, ref, thr);
      const double want = static_cast<double>(correct) /
                          static_cast<double>(ref_voiced);
      if (got != want) {
        return {false, fmt("case %d: rpa %.17g != %.17g", it, got, want)};
      }
    }

    // V/UV: recount.
    std::size_t rv = 0, ru = 0, hit = 0, fa = 0;
    for (std::size_t l = 0; l < len; ++l) {
      if (ref.voiced(l)) {
        ++rv;
        if (est.voiced(l)) ++hit;
      } else {
        ++ru;
        if (est.voiced(l)) ++fa;
      }
    }
    if (rv == 0 || ru == 0) {
      try {
        (void)f0vote::vuv_scores(est, ref);
        return {false, fmt("case %d: expected degenerate vuv", it)};
      } catch (const f0vote::DegenerateInput&) {
      }
    } else {
      const auto s = f0vote::vuv_scores(est, ref);
      if (s.recall != static_cast<double>(hit) / static_cast<double>(rv) ||
          s.false_alarm != static_cast<double>(fa) / static_cast<double>(ru)) {
        return {false, fmt("case %d: vuv mismatch", it)};
      }
    }

    // Delta-cent stats with long-double accumulation.
    std::vector<long double> errs;
    for (std::size_t l = 0; l < len; ++l) {
      if (est.voiced(l) && ref.voiced(l)) {
        errs.push_back(
            static_cast<long double>(oracle_cents(est.freq(l), ref.freq(l))));
      }
    }
    if (errs.size() < 2) {
      try {
        (void)f0vote::delta_cent_stats(est, ref);
        return {false, fmt("case %d: expected degenerate delta", it)};
      } catch (const f0vote::DegenerateInput&) {
      }
    } else {
      long double sum = 0.0L;
      for (long double e : errs) sum += e;
      const long double mean = sum / static_cast<long double>(errs.size());
      long double ss = 0.0L;
      for (long double e : errs) ss += (e - mean) * (e - mean);
      const double want_mean = static_cast<double>(mean);
      const double want_std = static_cast<double>(
          std::sqrt(ss / static_cast<long double>(errs.size() - 1)));
      const auto got = f0vote::delta_cent_stats(est, ref);
      const double tol_mean = 1e-9 * std::max(1.0, std::abs(want_mean));
      const double tol_std = 1e-9 * std::max(1.0, std::abs(want_std));
      if (std::abs(got.mean - want_mean) > tol_mean ||
          std::abs(got.stddev - want_std) > tol_std) {
        return {false, fmt("case %d: delta stats mismatch", it)};
      }
    }
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed >= 5.0) return {false, fmt("too slow: %.2f s", elapsed)};
  return {true, fmt("1000 pairs, %d live rpa cases, %.2f s", live, elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 2: condorcet_exact matches enumeration (n <= 15, 1e-10), the
// 0.648 anchor holds to 1e-12, and P_n > p for p > 1/2, n >= 3.  Budget 1 s.

Outcome criterion_condorcet() {
  const double t0 = now_seconds();
  const double anchor = f0vote::condorcet_exact(0.6, 3);
  if (std::abs(anchor - 0.648) > 1e-12) {
    return {false, fmt("P(0.6,3) = %.17g", anchor)};
  }
  double max_err = 0.0;
  for (double p : {0.55, 0.7, 0.9}) {
    for (int n = 1; n <= 15; n += 2) {
      const double exact = f0vote::condorcet_exact(p, n);
      const double enumerated = oracle_condorcet(p, n);
      max_err = std::max(max_err, std::abs(exact - enumerated));
      if (std::abs(exact - enumerated) > 1e-10) {
        return {false, fmt("p=%.2f n=%d: %.17g vs %.17g", p, n, exact,
                           enumerated)};
      }
      if (n >= 3 && !(exact > p)) {
        return {false, fmt("p=%.2f n=%d: P_n=%.12f not above p", p, n, exact)};
      }
    }
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed >= 1.0) return {false, fmt("too slow: %.2f s", elapsed)};
  return {true, fmt("max |exact - enum| = %.3g, %.2f s", max_err, elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 3: Gaussian sigma=30, rho=0, 1e4 trials: empirical/predicted in
// [0.85, 1.15] for n in {9,15,25}; and empirical variance strictly increases
// over calibrated rho in {0, 0.3, 0.6} at n = 9.  Budget 30 s.

Outcome criterion_variance_law() {
  const double t0 = now_seconds();
  std::string ratios;
  for (int n : {9, 15, 25}) {
    EnsembleSpec spec;
    spec.n = n;
    spec.error_scale_cents = 30.0;
    spec.seed = 88001 + n;
    const auto v = f0vote::validate_variance(spec, 20000, 10000);
    const double ratio = v.empirical / v.predicted;
    ratios += fmt(" n=%d:%.3f", n, ratio);
    if (ratio < 0.85 || ratio > 1.15) {
      return {false, fmt("n=%d ratio %.4f outside [0.85, 1.15]", n, ratio)};
    }
  }
  double prev = 0.0;
  std::string rhos;
  for (double rho : {0.0, 0.3, 0.6}) {
    EnsembleSpec spec;
    spec.n = 9;
    spec.error_scale_cents = 30.0;
    spec.sign_correlation = rho;
    spec.seed = 88100;
    const auto v = f0vote::validate_variance(spec, 20000, 10000);
    rhos += fmt(" rho=%.1f:%.1f", rho, v.empirical);
    if (!(v.empirical > prev)) {
      return {false,
              fmt("variance not increasing at rho=%.1f (%.2f <= %.2f)", rho,
                  v.empirical, prev)};
    }
    prev = v.empirical;
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed >= 30.0) return {false, fmt("too slow: %.2f s", elapsed)};
  return {true, fmt("ratios%s; increasing%s; %.2f s", ratios.c_str(),
                    rhos.c_str(), elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 4: alignment recovery over 200 seeded contours; exact in the
// noiseless case, >= 95% under 30-cent noise.  Budget 10 s.

Outcome criterion_alignment_recovery() {
  const double t0 = now_seconds();
  // The offset search scores the raw, still-biased track, so the
  // tolerance has to clear the +-200 cent bias range being recovered.
  const double epsilon = 300.0;
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> shift_dist(-10, 10);
  std::uniform_real_distribution<double> bias_dist(-200.0, 200.0);
  int noisy_k_ok = 0, noisy_f_ok = 0;
  for (int it = 0; it < 200; ++it) {
    const PitchTrack ref = f0vote::synth_contour(7000 + it, 2400);
    if (ref.voiced_count() * 4 < ref.size()) {
      return {false, fmt("case %d: contour under 25%% voiced", it)};
    }
    const int k_true = shift_dist(rng);
    const double b_true = bias_dist(rng);
    const PitchTrack clean = shift_and_bias(ref, k_true, b_true);

    const auto off = f0vote::find_temporal_offset(clean, ref, 10, epsilon);
    if (off.k_align != k_true) {
      return {false, fmt("case %d: noiseless k %d != %d", it, off.k_align,
                         k_true)};
    }
    const double bias = f0vote::find_frequency_bias(clean, ref, off.k_align);
    if (std::abs(bias - b_true) > 1e-6) {
      return {false, fmt("case %d: noiseless bias err %.3g", it,
                         std::abs(bias - b_true))};
    }

    const PitchTrack noisy = add_noise(clean, 30.0, rng);
    const auto noff = f0vote::find_temporal_offset(noisy, ref, 10, epsilon);
    if (noff.k_align == k_true) ++noisy_k_ok;
    const double nbias = f0vote::find_frequency_bias(noisy, ref, noff.k_align);
    if (std::abs(nbias - b_true) <= 3.0) ++noisy_f_ok;
  }
  const double elapsed = now_seconds() - t0;
  if (noisy_k_ok < 190 || noisy_f_ok < 190) {
    return {false, fmt("noisy recovery k %d/200, bias %d/200", noisy_k_ok,
                       noisy_f_ok)};
  }
  if (elapsed >= 10.0) return {false, fmt("too slow: %.2f s", elapsed)};
  return {true, fmt("noiseless 200/200 exact; noisy k %d/200, bias %d/200; "
                    "%.2f s",
                    noisy_k_ok, noisy_f_ok, elapsed)};
}

// ---------------------------------------------------------------------------
// Criterion 5: RPA50(full) > RPA50(time-only) > RPA50(none) on ensembles
// with per-member shifts and biases, strictly in >= 90 of 100 seeds.

Outcome criterion_ablation_order() {
  int strict = 0;
  for (int seed = 0; seed < 100; ++seed) {
    EnsembleSpec spec;
    spec.n = 5;
    spec.error_scale_cents = 20.0;
    spec.member_time_shifts = {0, 2, -2, 3, -3};
    spec.member_cent_biases = {0.0, 25.0, 30.0, 35.0, 40.0};
    spec.seed = 31000 + seed;
    const TrackSet ts = f0vote::simulate_ensemble(spec, 1200);
    const PitchTrack& truth = *ts.ground_truth;
    const double full = f0vote::rpa(
        f0vote::run_pipeline(ts, AlignMode::kFull).voted, truth, 50.0);
    const double time_only = f0vote::rpa(
        f0vote::run_pipeline(ts, AlignMode::kTimeOnly).voted, truth, 50.0);
    const double none = f0vote::rpa(
        f0vote::run_pipeline(ts, AlignMode::kNone).voted, truth, 50.0);
    if (full > time_only && time_only > none) ++strict;
  }
  if (strict < 90) return {false, fmt("strict ordering in %d/100", strict)};
  return {true, fmt("strict ordering in %d/100 seeds", strict)};
}

// ---------------------------------------------------------------------------
// Criterion 6: the voted track beats the mean member on RPA50 and V/UV
// recall in >= 95 of 100 seeds (5 members, sigma 30, octave rate 0.05,
// V/UV accuracy 0.9).

Outcome criterion_voting_robustness() {
  int rpa_wins = 0, recall_wins = 0;
  for (int seed = 0; seed < 100; ++seed) {
    EnsembleSpec spec;
    spec.n = 5;
    spec.error_scale_cents = 30.0;
    spec.octave_error_rate = 0.05;
    spec.vuv_accuracy = 0.9;
    spec.seed = 52000 + seed;
    const TrackSet ts = f0vote::simulate_ensemble(spec, 800);
    const PitchTrack& truth = *ts.ground_truth;
    const PitchTrack voted = f0vote::vote_set(ts);
    const double voted_rpa = f0vote::rpa(voted, truth, 50.0);
    const double voted_recall = f0vote::vuv_scores(voted, truth).recall;
    double mean_rpa = 0.0, mean_recall = 0.0;
    for (const auto& [name, track] : ts.members) {
      mean_rpa += f0vote::rpa(track, truth, 50.0);
      mean_recall += f0vote::vuv_scores(track, truth).recall;
    }
    mean_rpa /= 5.0;
    mean_recall /= 5.0;
    if (voted_rpa > mean_rpa) ++rpa_wins;
    if (voted_recall > mean_recall) ++recall_wins;
  }
  if (rpa_wins < 95 || recall_wins < 95) {
    return {false,
            fmt("rpa wins %d/100, recall wins %d/100", rpa_wins, recall_wins)};
  }
  return {true,
          fmt("rpa wins %d/100, recall wins %d/100", rpa_wins, recall_wins)};
}

// ---------------------------------------------------------------------------
// Criterion 7: greedy selection sanity over 50 seeds: the correlation
// criterion always picks the independent member over an exact duplicate of
// the seed; the accuracy criterion's first pick always matches an
// exhaustive scan; a perfect seed terminates with no improvement.

Outcome criterion_greedy_sanity() {
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(90000 + seed);
    const PitchTrack truth = f0vote::synth_contour(90000 + seed, 900);
    const PitchTrack seed_member = add_noise(truth, 30.0, rng);
    const PitchTrack indep = add_noise(truth, 30.0, rng);

    {  // correlation: duplicate vs independent
      TrackSet ts;
      ts.reference_name = "seed";
      ts.ground_truth = truth;
      ts.members.emplace("seed", seed_member);
      ts.members.emplace("dup", seed_member);
      ts.members.emplace("indep", indep);
      f0vote::SelectOptions opt;
      opt.criterion = f0vote::SelectionCriterion::kCorrelation;
      opt.max_size = 2;
      const auto result = f0vote::greedy_select(ts, "seed", opt);
      if (result.chosen.size() != 2 || result.chosen[1] != "indep") {
        return {false, fmt("seed %d: correlation picked %s", seed,
                           result.chosen.size() > 1
                               ? result.chosen[1].c_str()
                               : "(none)")};
      }
    }

    {  // accuracy: argmax must match an independent exhaustive scan
      TrackSet ts;
      ts.reference_name = "seed";
      ts.ground_truth = truth;
      ts.members.emplace("seed", seed_member);
      ts.members.emplace("cand_a", add_noise(truth, 20.0, rng));
      ts.members.emplace("cand_b", add_noise(truth, 70.0, rng));
      ts.members.emplace("cand_c", add_noise(truth, 250.0, rng));
      f0vote::SelectOptions opt;
      opt.criterion = f0vote::SelectionCriterion::kAccuracy;
      opt.max_size = 2;
      const auto result = f0vote::greedy_select(ts, "seed", opt);

      std::string best_name;
      double best_score = -1.0;
      for (const std::string cand : {"cand_a", "cand_b", "cand_c"}) {
        TrackSet sub;
        sub.reference_name = "seed";
        sub.members.emplace("seed", seed_member);
        sub.members.emplace(cand, ts.members.at(cand));
        const auto aligned = f0vote::align_set(sub);
        const double score =
            f0vote::rpa(f0vote::vote_set(aligned.tracks), truth, 50.0);
        if (result.trace.empty() ||
            result.trace[0].candidate_scores.at(cand) != score) {
          return {false, fmt("seed %d: trace score for %s not reproducible",
                             seed, cand.c_str())};
        }
        if (score > best_score) {
          best_score = score;
          best_name = cand;
        }
      }
      const double seed_alone_score = [&] {
        TrackSet solo;
        solo.reference_name = "seed";
        solo.members.emplace("seed", seed_member);
        const auto aligned = f0vote::align_set(solo);
        return f0vote::rpa(f0vote::vote_set(aligned.tracks), truth, 50.0);
      }();
      if (best_score > seed_alone_score) {
        if (result.chosen.size() != 2 || result.chosen[1] != best_name) {
          return {false, fmt("seed %d: accuracy pick mismatch", seed)};
        }
      } else if (result.stop_reason != f0vote::StopReason::kNoImprovement) {
        return {false, fmt("seed %d: missing no-improvement stop", seed)};
      }
    }

    {  // a perfect seed never grows
      TrackSet ts;
      ts.reference_name = "perfect";
      ts.ground_truth = truth;
      ts.members.emplace("perfect", truth);
      ts.members.emplace("bad_a", add_noise(truth, 200.0, rng));
      ts.members.emplace("bad_b", add_noise(truth, 200.0, rng));
      f0vote::SelectOptions opt;
      opt.criterion = f0vote::SelectionCriterion::kAccuracy;
      opt.max_size = 3;
      const auto result = f0vote::greedy_select(ts, "perfect", opt);
      if (result.chosen.size() != 1 ||
          result.stop_reason != f0vote::StopReason::kNoImprovement) {
        return {false, fmt("seed %d: perfect seed grew to %zu", seed,
                           result.chosen.size())};
      }
    }
  }
  return {true, "correlation 50/50, accuracy scan 50/50, stop rule 50/50"};
}

// ---------------------------------------------------------------------------
// Criterion 8: every CLI subcommand, re-run with identical inputs and
// seeds, produces byte-identical output files; exit codes follow the
// contract.

class ScratchDir {
 public:
  ScratchDir() {
    root_ = std::filesystem::temp_directory_path() /
            ("f0vote_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(root_);
    std::filesystem::create_directories(root_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);
  }
  std::string operator/(const std::string& name) const {
    return (root_ / name).string();
  }
  std::filesystem::path root() const { return root_; }

 private:
  std::filesystem::path root_;
};

int run_cli(const std::string& args, const std::string& log_path) {
  const std::string cmd = std::string(F0VOTE_CLI_PATH) + " " + args + " > " +
                          log_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_cli_determinism() {
  ScratchDir scratch;
  const std::string sim_dir = scratch / "sim";
  const std::string log = scratch / "log.txt";

  struct Step {
    std::string name;
    std::string args;
    std::vector<std::string> outputs;
  };
  const std::string manifest = sim_dir + "/manifest.json";
  const std::vector<Step> steps = {
      {"simulate",
       "simulate --out-dir " + sim_dir +
           " --members 5 --frames 300 --error-scale 25 --octave-error-rate "
           "0.05 --vuv-accuracy 0.9 --time-shifts 0,2,-2,3,-3 --cent-biases "
           "0,25,30,35,40 --rng-seed 11",
       {sim_dir + "/manifest.json", sim_dir + "/truth.csv",
        sim_dir + "/est01.csv", sim_dir + "/est03.csv",
        sim_dir + "/est05.csv"}},
      {"simulate (spec file)",
       [&] {
         std::ofstream out(scratch / "espec.json");
         out << R"({"n": 3, "error_scale_cents": 20.0, "error_dist": )"
             << R"("laplace", "sign_correlation": 0.2, "vuv_accuracy": 0.95, )"
             << R"("member_time_shifts": [0, 1, -1], "seed": 7})";
         out.close();
         return "simulate --out-dir " + (scratch / "sim2") + " --spec " +
                (scratch / "espec.json") + " --frames 200";
       }(),
       {scratch / "sim2" + "/manifest.json", scratch / "sim2" + "/est02.csv"}},
      {"align",
       "align --manifest " + manifest + " --out-dir " + scratch / "aligned",
       {scratch / "aligned" + "/corrections.json",
        scratch / "aligned" + "/est02.csv"}},
      {"vote",
       "vote --manifest " + manifest + " --out " + scratch / "voted.csv" +
           " --report " + scratch / "voted.json" + " --align-full",
       {scratch / "voted.csv", scratch / "voted.json"}},
      {"eval",
       "eval --manifest " + manifest + " --out " + scratch / "eval.json",
       {scratch / "eval.json"}},
      {"select (accuracy)",
       "select --manifest " + manifest + " --criterion accuracy --max-size 3 "
           "--out " + scratch / "sel_acc.json",
       {scratch / "sel_acc.json"}},
      {"select (correlation)",
       "select --manifest " + manifest +
           " --criterion correlation --max-size 3 --reference ensemble-median "
           "--out " + scratch / "sel_corr.json",
       {scratch / "sel_corr.json"}},
      {"theory condorcet",
       "theory condorcet --p 0.6,0.7 --n 3,9 --trials 20000 --rng-seed 5 "
           "--out " + scratch / "cond.json",
       {scratch / "cond.json"}},
      {"theory variance",
       "theory variance --n 5,9 --rho 0,0.3 --trials 2000 --pilot-frames "
           "4000 --rng-seed 5 --out " + scratch / "var.json",
       {scratch / "var.json"}},
  };

  for (const Step& step : steps) {
    if (run_cli(step.args, log) != 0) {
      return {false, step.name + " failed: " + slurp(log)};
    }
    std::map<std::string, std::string> first;
    for (const std::string& path : step.outputs) {
      first[path] = slurp(path);
      if (first[path].empty()) {
        return {false, step.name + " left empty output " + path};
      }
    }
    if (run_cli(step.args, log) != 0) {
      return {false, step.name + " failed on the second run"};
    }
    for (const std::string& path : step.outputs) {
      if (slurp(path) != first[path]) {
        return {false, step.name + ": " + path + " differs between runs"};
      }
    }
  }

  // The voted track parses through the project's own loader at full length.
  try {
    const PitchTrack voted = f0vote::load_track(scratch / "voted.csv");
    if (voted.size() != 300) {
      return {false, fmt("voted track has %zu frames, wanted 300",
                         voted.size())};
    }
  } catch (const std::exception& e) {
    return {false, std::string("voted track failed to parse: ") + e.what()};
  }

  // Exit-code contract.
  if (run_cli("", log) != 2) {
    return {false, "missing subcommand did not exit 2"};
  }
  if (run_cli("vote --definitely-not-a-flag", log) != 2) {
    return {false, "unknown flag did not exit 2"};
  }
  const std::string broken = scratch / "broken.json";
  {
    std::ofstream out(broken);
    out << R"({"reference": "a", "members": {"a": "missing.csv"}})";
  }
  if (run_cli("vote --manifest " + broken + " --out " + scratch / "x.csv",
              log) != 3) {
    return {false, "missing member file did not exit 3"};
  }
  if (run_cli("eval --manifest " + manifest + " --thresholds -5", log) == 0) {
    return {false, "negative threshold unexpectedly succeeded"};
  }
  const std::string silent_manifest = scratch / "silent.json";
  {
    std::ofstream track(scratch / "silent.csv");
    track << "time_s,f0_hz\n0.0,0.0\n0.005,0.0\n0.01,0.0\n";
    std::ofstream out(silent_manifest);
    out << R"({"reference": "s", "members": {"s": "silent.csv"}})";
  }
  if (run_cli("align --manifest " + silent_manifest + " --out-dir " +
                  scratch / "silent_out",
              log) != 4) {
    return {false, "all-unvoiced reference did not exit 4"};
  }

  return {true, "8 subcommands byte-identical on re-run; exit codes 2/3/4 ok"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 metric oracle equivalence", criterion_metrics_oracle},
      {"C2 Condorcet exactness", criterion_condorcet},
      {"C3 median variance law", criterion_variance_law},
      {"C4 alignment recovery", criterion_alignment_recovery},
      {"C5 ablation ordering", criterion_ablation_order},
      {"C6 voting robustness", criterion_voting_robustness},
      {"C7 greedy selection sanity", criterion_greedy_sanity},
      {"C8 CLI determinism", criterion_cli_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu acceptance criteria failed\n", failures,
                criteria.size());
  } else {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
