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

#include "f0vote/track.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "f0vote/error.hpp"
#include "json.hpp"

namespace f0vote {

namespace {

constexpr double kDefaultFrameShift = 0.005;  // single-row files only
constexpr double kGridCoincidenceEps = 1e-9;  // seconds
constexpr double kStepJitterTolerance = 0.01;  // fraction of the frame shift

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& path,
                    std::size_t line_no) {
  const std::string t = strip(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty()) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": malformed numeric field '" + text + "'");
  }
  return value;
}

}  // namespace

PitchTrack::PitchTrack(double frame_shift_s, double start_time_s,
                       std::vector<FrameValue> frames)
    : frame_shift_s_(frame_shift_s),
      start_time_s_(start_time_s),
      frames_(std::move(frames)) {
  if (!(frame_shift_s_ > 0.0)) {
    throw std::invalid_argument("PitchTrack: frame shift must be > 0");
  }
  if (frames_.empty()) {
    throw std::invalid_argument("PitchTrack: at least one frame required");
  }
  for (const FrameValue& f : frames_) {
    if (f.voiced && !(f.frequency_hz > 0.0 && std::isfinite(f.frequency_hz))) {
      throw std::invalid_argument(
          "PitchTrack: voiced frame with non-positive frequency");
    }
  }
}

std::size_t PitchTrack::voiced_count() const {
  return static_cast<std::size_t>(
      std::count_if(frames_.begin(), frames_.end(),
                    [](const FrameValue& f) { return f.voiced; }));
}

bool same_grid(const PitchTrack& a, const PitchTrack& b) {
  return a.size() == b.size() &&
         std::abs(a.frame_shift() - b.frame_shift()) <= 1e-9 &&
         std::abs(a.start_time() - b.start_time()) <= 1e-9;
}

PitchTrack load_track(const std::string& path, const FrequencyBounds& bounds) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open track file: " + path);

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  ++line_no;
  if (strip(line) != "time_s,f0_hz") {
    throw DataError(path + ":1: expected header 'time_s,f0_hz'");
  }

  std::vector<double> times;
  std::vector<FrameValue> frames;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = strip(line);
    if (row.empty()) continue;
    const std::size_t comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected two comma-separated fields");
    }
    const double t = parse_double(row.substr(0, comma), path, line_no);
    const double f = parse_double(row.substr(comma + 1), path, line_no);
    if (!times.empty() && !(t > times.back())) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": non-monotonic time column");
    }
    times.push_back(t);
    if (!std::isfinite(f) || f <= 0.0 || f < bounds.f_min_hz ||
        f > bounds.f_max_hz) {
      frames.push_back(FrameValue::Unvoiced());
    } else {
      frames.push_back(FrameValue::Voiced(f));
    }
  }
  if (frames.empty()) throw DataError(path + ": no data rows");

  double shift = kDefaultFrameShift;
  if (times.size() > 1) {
    shift = (times.back() - times.front()) /
            static_cast<double>(times.size() - 1);
    for (std::size_t l = 0; l + 1 < times.size(); ++l) {
      const double dt = times[l + 1] - times[l];
      if (std::abs(dt - shift) > kStepJitterTolerance * shift) {
        throw DataError(path + ":" + std::to_string(l + 3) +
                        ": inconsistent time step (" + std::to_string(dt) +
                        " vs grid " + std::to_string(shift) + ")");
      }
    }
  }
  return PitchTrack(shift, times.front(), std::move(frames));
}

void emit_track(const PitchTrack& track, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write track file: " + path);
  out << "time_s,f0_hz\n";
  char buf[80];
  for (std::size_t l = 0; l < track.size(); ++l) {
    if (track.voiced(l)) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.9g", track.time_at(l),
                    track.freq(l));
    } else {
      std::snprintf(buf, sizeof(buf), "%.12g,0.0", track.time_at(l));
    }
    out << buf << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

PitchTrack resample_to_grid(const PitchTrack& track, double grid_shift_s,
                            double grid_start_s, std::size_t grid_len) {
  if (!(grid_shift_s > 0.0)) {
    throw std::invalid_argument("resample_to_grid: grid shift must be > 0");
  }
  if (grid_len < 1) {
    throw std::invalid_argument("resample_to_grid: grid length must be >= 1");
  }
  const std::size_t n = track.size();
  std::vector<FrameValue> frames;
  frames.reserve(grid_len);
  for (std::size_t i = 0; i < grid_len; ++i) {
    const double t = grid_start_s + static_cast<double>(i) * grid_shift_s;
    const double x = (t - track.start_time()) / track.frame_shift();
    const auto nearest = static_cast<long long>(std::llround(x));
    if (nearest >= 0 && nearest < static_cast<long long>(n) &&
        std::abs(t - track.time_at(static_cast<std::size_t>(nearest))) <
            kGridCoincidenceEps) {
      frames.push_back(track[static_cast<std::size_t>(nearest)]);
      continue;
    }
    if (x < 0.0 || x > static_cast<double>(n - 1)) {
      frames.push_back(FrameValue::Unvoiced());
      continue;
    }
    const auto l0 = static_cast<std::size_t>(std::floor(x));
    const std::size_t l1 = l0 + 1;
    if (l1 >= n || !track.voiced(l0) || !track.voiced(l1)) {
      frames.push_back(FrameValue::Unvoiced());
      continue;
    }
    const double w = x - static_cast<double>(l0);
    frames.push_back(
        FrameValue::Voiced(track.freq(l0) + w * (track.freq(l1) - track.freq(l0))));
  }
  return PitchTrack(grid_shift_s, grid_start_s, std::move(frames));
}

namespace {

// Parses a manifest document and rejects duplicate keys inside "members"
// (a plain DOM parse would silently keep the last one).
nlohmann::json parse_manifest_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::string last_key;
  bool in_members = false;
  int members_depth = -1;
  std::set<std::string> member_names;
  auto cb = [&](int depth, nlohmann::json::parse_event_t event,
                nlohmann::json& parsed) -> bool {
    using event_t = nlohmann::json::parse_event_t;
    if (event == event_t::key) {
      const auto key = parsed.get<std::string>();
      if (in_members && depth == members_depth + 1) {
        if (!member_names.insert(key).second) {
          throw DataError(path + ": duplicate estimator name '" + key +
                          "' in members");
        }
      }
      last_key = key;
    } else if (event == event_t::object_start) {
      if (!in_members && last_key == "members") {
        in_members = true;
        members_depth = depth;
      }
    } else if (event == event_t::object_end) {
      if (in_members && depth == members_depth) in_members = false;
    }
    return true;
  };

  try {
    return nlohmann::json::parse(text, cb);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace

TrackSet load_manifest(const std::string& path) {
  const nlohmann::json doc = parse_manifest_json(path);
  if (!doc.is_object()) throw DataError(path + ": manifest must be an object");
  if (!doc.contains("reference") || !doc["reference"].is_string()) {
    throw DataError(path + ": missing string field 'reference'");
  }
  if (!doc.contains("members") || !doc["members"].is_object() ||
      doc["members"].empty()) {
    throw DataError(path + ": missing non-empty object field 'members'");
  }

  FrequencyBounds bounds;
  if (doc.contains("f_min")) bounds.f_min_hz = doc["f_min"].get<double>();
  if (doc.contains("f_max")) bounds.f_max_hz = doc["f_max"].get<double>();
  if (!(bounds.f_min_hz > 0.0 && bounds.f_min_hz < bounds.f_max_hz)) {
    throw DataError(path + ": require 0 < f_min < f_max");
  }

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  TrackSet ts;
  ts.reference_name = doc["reference"].get<std::string>();
  for (const auto& [name, value] : doc["members"].items()) {
    if (!value.is_string()) {
      throw DataError(path + ": member '" + name + "' path must be a string");
    }
    ts.members.emplace(name, load_track(resolve(value.get<std::string>()), bounds));
  }
  if (ts.members.find(ts.reference_name) == ts.members.end()) {
    throw DataError(path + ": unknown reference '" + ts.reference_name + "'");
  }

  const PitchTrack& ref = ts.members.at(ts.reference_name);
  double grid_shift = ref.frame_shift();
  if (doc.contains("frame_shift_s")) {
    grid_shift = doc["frame_shift_s"].get<double>();
    if (!(grid_shift > 0.0)) {
      throw DataError(path + ": frame_shift_s must be > 0");
    }
  }
  const double grid_start = ref.start_time();
  const double span =
      static_cast<double>(ref.size() - 1) * ref.frame_shift();
  const auto grid_len =
      static_cast<std::size_t>(std::floor(span / grid_shift + 1e-9)) + 1;

  for (auto& [name, track] : ts.members) {
    track = resample_to_grid(track, grid_shift, grid_start, grid_len);
  }
  if (doc.contains("ground_truth")) {
    const PitchTrack gt =
        load_track(resolve(doc["ground_truth"].get<std::string>()), bounds);
    ts.ground_truth = resample_to_grid(gt, grid_shift, grid_start, grid_len);
  }
  return ts;
}

void emit_manifest(const std::string& path, const std::string& reference,
                   const std::map<std::string, std::string>& member_paths,
                   const std::string& ground_truth_path,
                   const FrequencyBounds& bounds) {
  nlohmann::ordered_json doc;
  doc["reference"] = reference;
  if (!ground_truth_path.empty()) doc["ground_truth"] = ground_truth_path;
  nlohmann::ordered_json members = nlohmann::ordered_json::object();
  for (const auto& [name, p] : member_paths) members[name] = p;
  doc["members"] = members;
  doc["f_min"] = bounds.f_min_hz;
  doc["f_max"] = bounds.f_max_hz;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace f0vote
