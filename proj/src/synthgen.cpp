// Copyright 2026 The slipdetect Authors
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

#include "slip/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "slip/error.hpp"
#include "slip/ingest.hpp"
#include "slip/seed.hpp"

namespace slip {

namespace {

void check_range(const Range& r, const char* name, double lower_bound) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max || r.min < lower_bound) {
    throw Error(ErrorCode::InvalidParams, std::string("invalid range for ") + name);
  }
}

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Noise-free kinematic state on the sample grid. The accelerometer reading is
// support * gravity_in_device_frame(orient) + linear.
class Timeline {
 public:
  Timeline(const MotionModelParams& p, std::mt19937_64& rng)
      : p_(p), rng_(rng), n_(p.length), orient_(n_), linear_(n_, Vec3{0.0, 0.0, 0.0}),
        support_(n_, 1.0) {}

  std::size_t size() const { return n_; }
  double g() const { return p_.gravity; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double draw(const Range& r) { return r.min == r.max ? r.min : uniform(r.min, r.max); }

  std::size_t samples(double seconds) const {
    return static_cast<std::size_t>(std::lround(seconds * p_.sample_rate_hz));
  }

  // Event onset chosen uniformly so that [onset, onset + event_len) lies in
  // the middle 60% of the window whenever it fits.
  std::size_t onset(std::size_t event_len) {
    const auto lo = static_cast<std::size_t>(0.2 * static_cast<double>(n_));
    const auto hi = static_cast<std::size_t>(0.8 * static_cast<double>(n_));
    if (lo + event_len >= hi) return lo;
    return static_cast<std::size_t>(std::floor(uniform(static_cast<double>(lo),
                                                       static_cast<double>(hi - event_len + 1))));
  }

  void fill_orient(std::size_t from, std::size_t to, const Vec3& o) {
    for (std::size_t k = from; k < std::min(to, n_); ++k) orient_[k] = o;
  }

  // Smoothstep blend between two orientations over [from, to).
  void blend_orient(std::size_t from, std::size_t to, const Vec3& a, const Vec3& b) {
    const double len = static_cast<double>(to - from);
    for (std::size_t k = from; k < std::min(to, n_); ++k) {
      const double s = smoothstep(static_cast<double>(k - from) / len);
      for (int c = 0; c < 3; ++c) orient_[k][c] = a[c] + s * (b[c] - a[c]);
    }
  }

  // Linear (constant-rate) blend, monotone between endpoints.
  void ramp_orient(std::size_t from, std::size_t to, const Vec3& a, const Vec3& b) {
    const double len = static_cast<double>(to - from);
    for (std::size_t k = from; k < std::min(to, n_); ++k) {
      const double s = static_cast<double>(k - from) / len;
      for (int c = 0; c < 3; ++c) orient_[k][c] = a[c] + s * (b[c] - a[c]);
    }
  }

  Vec3& linear(std::size_t k) { return linear_.at(k); }
  void set_support(std::size_t from, std::size_t to, double s) {
    for (std::size_t k = from; k < std::min(to, n_); ++k) support_[k] = s;
  }

  // Impact spike at `at` followed by a damped bounce on the z axis.
  void impact(std::size_t at, double peak, double lateral_x, double lateral_y) {
    if (at >= n_) return;
    linear_[at] = {lateral_x, lateral_y, peak};
    for (std::size_t j = 1; j <= 8 && at + j < n_; ++j) {
      const double decay = std::exp(-static_cast<double>(j) / 2.0);
      linear_[at + j][2] += 0.3 * peak * decay * std::cos(std::numbers::pi * j / 1.5);
    }
  }

  SensorTrace render(CaseLabel label, std::uint32_t sample_id) {
    SensorTrace t;
    t.label = label;
    t.sample_id = sample_id;
    t.sample_rate_hz = p_.sample_rate_hz;
    t.accel.resize(n_);
    t.orient.resize(n_);
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool accel_noise = p_.noise_sigma_accel > 0.0;
    const bool angle_noise = p_.noise_sigma_angle > 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      const double pitch = deg2rad(orient_[k][1]);
      const double roll = deg2rad(orient_[k][2]);
      const double gs = support_[k] * p_.gravity;
      Vec3 a = {gs * std::sin(roll), 0.0 - gs * std::sin(pitch) * std::cos(roll),
                gs * std::cos(pitch) * std::cos(roll)};
      for (int c = 0; c < 3; ++c) a[c] += linear_[k][c];
      Vec3 o = orient_[k];
      if (accel_noise) {
        for (int c = 0; c < 3; ++c) a[c] += p_.noise_sigma_accel * normal(rng_);
      }
      if (angle_noise) {
        for (int c = 0; c < 3; ++c) o[c] += p_.noise_sigma_angle * normal(rng_);
      }
      t.accel[k] = a;
      t.orient[k] = wrap_orientation(o);
    }
    return t;
  }

 private:
  const MotionModelParams& p_;
  std::mt19937_64& rng_;
  std::size_t n_;
  std::vector<Vec3> orient_;
  std::vector<Vec3> linear_;
  std::vector<double> support_;
};

// A: lowered by hand and set down; small tilt levels out, gentle bump.
void normal_touch_keep(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const Vec3 held = {azimuth, tl.uniform(2.0, 8.0), tl.uniform(-4.0, 4.0)};
  const Vec3 rest = {azimuth, 0.0, 0.0};
  const std::size_t settle = std::max<std::size_t>(2, tl.samples(tl.draw(p.settle_time_s)));
  const double bump = tl.draw(p.placement_bump);
  const std::size_t t0 = tl.onset(settle);
  const std::size_t t1 = t0 + settle;
  tl.fill_orient(0, t0, held);
  tl.blend_orient(t0, t1, held, rest);
  tl.fill_orient(t1, tl.size(), rest);
  for (std::size_t k = t0; k < t1 && k < tl.size(); ++k) {
    const double u = static_cast<double>(k - t0) / static_cast<double>(settle);
    tl.linear(k)[2] = bump * std::sin(2.0 * std::numbers::pi * u) * (1.0 - u);
  }
}

// B: tossed from the hand onto a table; one hard impact, then rest.
void accidental_keep(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const Vec3 held = {azimuth, tl.uniform(20.0, 50.0), tl.uniform(-10.0, 10.0)};
  const Vec3 rest = {azimuth + tl.uniform(-60.0, 60.0), 0.0, 0.0};
  const std::size_t toss = tl.samples(tl.uniform(0.2, 0.3));
  const double toss_accel = tl.uniform(3.0, 6.0);
  const double peak = tl.draw(p.impact_peak_g) * tl.g();
  const double lx = tl.uniform(-0.3, 0.3) * tl.g();
  const double ly = tl.uniform(-0.3, 0.3) * tl.g();
  const std::size_t t0 = tl.onset(toss + 10);
  const std::size_t hit = t0 + toss;
  tl.fill_orient(0, t0, held);
  tl.blend_orient(t0, hit, held, rest);
  tl.fill_orient(hit, tl.size(), rest);
  for (std::size_t k = t0; k < hit && k < tl.size(); ++k) {
    const double u = static_cast<double>(k - t0) / static_cast<double>(toss);
    tl.linear(k)[1] = toss_accel * std::sin(std::numbers::pi * u);
  }
  tl.impact(hit, peak, lx, ly);
}

// C: resting on an incline, then slides all the way down and lands flat.
void complete_slip(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const double incline = tl.draw(p.incline_deg);
  const double roll = tl.uniform(-3.0, 3.0);
  const double slide_accel = tl.draw(p.slide_accel);
  const std::size_t slide = std::max<std::size_t>(2, tl.samples(tl.draw(p.slide_duration_s)));
  const double drift = tl.draw(p.slide_pitch_drift_deg);
  const double bump = tl.uniform(0.2, 0.6) * tl.g();
  const std::size_t land = tl.samples(0.2);
  const Vec3 on_slope = {azimuth, incline, roll};
  const Vec3 slid = {azimuth, incline + drift, roll};
  const Vec3 floor = {azimuth, 0.0, 0.0};
  const std::size_t t0 = tl.onset(slide + land);
  const std::size_t t1 = t0 + slide;
  tl.fill_orient(0, t0, on_slope);
  tl.ramp_orient(t0, t1, on_slope, slid);
  tl.blend_orient(t1, t1 + land, slid, floor);
  tl.fill_orient(t1 + land, tl.size(), floor);
  for (std::size_t k = t0; k < t1 && k < tl.size(); ++k) tl.linear(k)[1] = -slide_accel;
  for (std::size_t k = t1; k < t1 + land && k < tl.size(); ++k) {
    const double u = static_cast<double>(k - t1) / static_cast<double>(land);
    tl.linear(k)[2] = bump * std::sin(std::numbers::pi * u);
  }
}

// D: the surface tilts slowly up to the tipping point and the recording ends
// there; a tiny jolt, no sustained slide.
void slip_till_tipping_point(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const double incline = tl.draw(p.incline_deg);
  const double roll = tl.uniform(-3.0, 3.0);
  const std::size_t tilt = std::max<std::size_t>(2, tl.samples(tl.draw(p.tilt_duration_s)));
  const double jolt = tl.uniform(0.2, 0.5);
  const Vec3 flat = {azimuth, 0.0, roll};
  const Vec3 tipped = {azimuth, incline, roll};
  const std::size_t t0 = tl.onset(tilt + 3);
  const std::size_t t1 = t0 + tilt;
  tl.fill_orient(0, t0, flat);
  tl.blend_orient(t0, t1, flat, tipped);
  tl.fill_orient(t1, tl.size(), tipped);
  for (std::size_t k = t1; k < t1 + 3 && k < tl.size(); ++k) tl.linear(k)[1] = -jolt;
}

// E: pushed up, rotates at least half a turn about the x axis while airborne,
// lands and settles face down or face up.
void flip(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const double roll = tl.uniform(-3.0, 3.0);
  const double rotation = tl.draw(p.flip_rotation_deg);
  const std::size_t push = tl.samples(0.1);
  const double push_accel = tl.uniform(0.5, 1.0) * tl.g();
  const std::size_t air = std::max<std::size_t>(2, tl.samples(tl.draw(p.airborne_s)));
  const double landing = tl.uniform(0.5, 1.2) * tl.g();
  const double spin = tl.uniform(-20.0, 20.0);
  const std::size_t settle = tl.samples(0.2);
  const double final_pitch = rotation < 270.0 ? 180.0 : 360.0;
  const Vec3 start = {azimuth, 0.0, roll};
  const Vec3 turned = {azimuth + spin, rotation, 0.0};
  const Vec3 rest = {azimuth + spin, final_pitch, 0.0};
  const std::size_t t0 = tl.onset(push + air + settle);
  const std::size_t t1 = t0 + push;
  const std::size_t t2 = t1 + air;
  tl.fill_orient(0, t1, start);
  tl.blend_orient(t1, t2, start, turned);
  tl.blend_orient(t2, t2 + settle, turned, rest);
  tl.fill_orient(t2 + settle, tl.size(), rest);
  for (std::size_t k = t0; k < t1 && k < tl.size(); ++k) tl.linear(k)[2] = push_accel;
  tl.set_support(t1, t2, 0.0);
  tl.impact(t2, landing, 0.0, 0.0);
}

// F: released from the hand, free fall, hard impact on the floor, rest.
void fall(Timeline& tl, const MotionModelParams& p) {
  const double azimuth = tl.uniform(0.0, 360.0);
  const double pitch = tl.uniform(20.0, 45.0);
  const double roll = tl.uniform(-10.0, 10.0);
  const std::size_t drop = std::max<std::size_t>(2, tl.samples(tl.draw(p.free_fall_s)));
  const double tumble = tl.uniform(-30.0, 30.0);
  const double peak = tl.draw(p.impact_peak_g) * tl.g();
  const double lx = tl.uniform(-0.3, 0.3) * tl.g();
  const double ly = tl.uniform(-0.3, 0.3) * tl.g();
  const double spin = tl.uniform(-45.0, 45.0);
  const Vec3 held = {azimuth, pitch, roll};
  const Vec3 falling = {azimuth, pitch + tumble, roll};
  const Vec3 floor = {azimuth + spin, 0.0, 0.0};
  const std::size_t t0 = tl.onset(drop + 10);
  const std::size_t hit = t0 + drop;
  tl.fill_orient(0, t0, held);
  tl.ramp_orient(t0, hit, held, falling);
  tl.blend_orient(hit, hit + 3, falling, floor);
  tl.fill_orient(hit + 3, tl.size(), floor);
  tl.set_support(t0, hit, 0.0);
  tl.impact(hit, peak, lx, ly);
}

}  // namespace

void validate(const MotionModelParams& p) {
  if (!std::isfinite(p.gravity) || p.gravity <= 0.0) {
    throw Error(ErrorCode::InvalidParams, "gravity must be positive");
  }
  if (!std::isfinite(p.noise_sigma_accel) || p.noise_sigma_accel < 0.0 ||
      !std::isfinite(p.noise_sigma_angle) || p.noise_sigma_angle < 0.0) {
    throw Error(ErrorCode::InvalidParams, "noise sigmas must be >= 0");
  }
  if (!std::isfinite(p.sample_rate_hz) || p.sample_rate_hz <= 0.0) {
    throw Error(ErrorCode::InvalidParams, "sample rate must be positive");
  }
  if (p.length < 16) throw Error(ErrorCode::InvalidParams, "trace length must be >= 16");
  check_range(p.settle_time_s, "settle_time_s", 0.0);
  check_range(p.placement_bump, "placement_bump", 0.0);
  check_range(p.impact_peak_g, "impact_peak_g", 0.0);
  check_range(p.incline_deg, "incline_deg", 0.0);
  check_range(p.slide_accel, "slide_accel", 0.0);
  check_range(p.slide_duration_s, "slide_duration_s", 0.0);
  check_range(p.slide_pitch_drift_deg, "slide_pitch_drift_deg", 0.0);
  check_range(p.tilt_duration_s, "tilt_duration_s", 0.0);
  check_range(p.flip_rotation_deg, "flip_rotation_deg", 0.0);
  check_range(p.airborne_s, "airborne_s", 0.0);
  check_range(p.free_fall_s, "free_fall_s", 0.0);
}

std::uint64_t trace_seed(std::uint64_t master_seed, CaseLabel label, std::uint32_t sample_id) {
  return derive_seed(master_seed, {case_index(label), sample_id});
}

SensorTrace generate_trace(CaseLabel label, std::uint64_t seed, const MotionModelParams& params,
                           std::uint32_t sample_id) {
  validate(params);
  std::mt19937_64 rng(seed);
  Timeline tl(params, rng);
  switch (label) {
    case CaseLabel::NormalTouchKeep: normal_touch_keep(tl, params); break;
    case CaseLabel::AccidentalKeep: accidental_keep(tl, params); break;
    case CaseLabel::CompleteSlip: complete_slip(tl, params); break;
    case CaseLabel::SlipTillTippingPoint: slip_till_tipping_point(tl, params); break;
    case CaseLabel::Flip: flip(tl, params); break;
    case CaseLabel::Fall: fall(tl, params); break;
  }
  return tl.render(label, sample_id);
}

std::vector<SensorTrace> generate_dataset(std::uint32_t samples_per_case,
                                          std::uint64_t master_seed,
                                          const MotionModelParams& params) {
  if (samples_per_case < 1) throw Error(ErrorCode::InvalidArgument, "samples_per_case must be >= 1");
  validate(params);
  std::vector<SensorTrace> out;
  out.reserve(kNumCases * samples_per_case);
  for (CaseLabel label : kAllCases) {
    for (std::uint32_t id = 0; id < samples_per_case; ++id) {
      out.push_back(generate_trace(label, trace_seed(master_seed, label, id), params, id));
    }
  }
  return out;
}

}  // namespace slip
