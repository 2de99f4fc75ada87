// Copyright 2026 The Interplay Authors
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

#include "interplay/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "interplay/errors.hpp"
#include "interplay/parallel.hpp"

namespace interplay {

namespace {

constexpr std::uint64_t kTagInit = 0;
constexpr std::uint64_t kTagKnown = 1;
constexpr std::uint64_t kTagUnknown = 2;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void fill_normal(std::vector<double>& out, std::uint64_t seed, double mean_scale,
                 const std::vector<double>* mean, double stddev) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = mean ? mean_scale * (*mean)[i] : 0.0;
    out[i] = m + stddev * normal(rng);
  }
}

void check_step(int t, int lo, const NoiseSchedule& schedule) {
  if (t < lo || t > schedule.steps()) {
    throw ParameterDomainError("step " + std::to_string(t) + " outside [" + std::to_string(lo) +
                               ", " + std::to_string(schedule.steps()) + "]");
  }
}

}  // namespace

LatentVideo::LatentVideo(int c, int h, int w, std::size_t n, double fill)
    : channels(c), height(h), width(w),
      frames(n, std::vector<double>(static_cast<std::size_t>(c) * h * w, fill)) {}

bool LatentVideo::same_shape(const LatentVideo& other) const {
  return channels == other.channels && height == other.height && width == other.width &&
         frames.size() == other.frames.size();
}

std::string LatentVideo::shape_string() const {
  return std::to_string(frames.size()) + "x" + std::to_string(channels) + "x" +
         std::to_string(height) + "x" + std::to_string(width);
}

void LatentVideo::validate() const {
  if (frames.empty()) throw ShapeError("latent video has no frames");
  for (const auto& f : frames) {
    if (f.size() != frame_size()) throw ShapeError("latent frame size does not match " + shape_string());
  }
}

bool ExtendedMask::temporally_constant() const {
  for (const auto& m : masks) {
    if (m != masks.front()) return false;
  }
  return true;
}

ExtendedMask extend_mask(const Mask& mask, std::size_t n) {
  if (n < 1) throw ParameterDomainError("frame count must be >= 1");
  std::set<int> bad;
  for (std::uint8_t v : mask.values) {
    if (v > 1) bad.insert(v);
  }
  if (!bad.empty()) {
    std::string list;
    for (int v : bad) list += (list.empty() ? "" : ", ") + std::to_string(v);
    throw ConfigError("mask is not binary; offending values: " + list);
  }
  ExtendedMask out;
  out.height = mask.height;
  out.width = mask.width;
  out.masks.assign(n, mask.values);
  return out;
}

NoiseSchedule NoiseSchedule::from_alpha_bar(std::vector<double> alpha_bar) {
  if (alpha_bar.size() < 2) throw ParameterDomainError("schedule needs at least one step");
  if (alpha_bar.front() != 1.0) throw ParameterDomainError("alpha_bar[0] must equal 1");
  for (std::size_t t = 1; t < alpha_bar.size(); ++t) {
    if (!(alpha_bar[t] > 0.0 && alpha_bar[t] < alpha_bar[t - 1])) {
      throw ParameterDomainError("alpha_bar must decrease strictly inside (0, 1]; fails at t = " +
                                 std::to_string(t));
    }
  }
  NoiseSchedule s;
  s.alpha_bar_ = std::move(alpha_bar);
  return s;
}

NoiseSchedule NoiseSchedule::linear(int steps, double end) {
  if (steps < 1) throw ParameterDomainError("schedule needs at least one step");
  if (!(end > 0.0 && end < 1.0)) throw ParameterDomainError("schedule end must lie in (0, 1)");
  std::vector<double> a(static_cast<std::size_t>(steps) + 1);
  for (int t = 0; t <= steps; ++t) a[static_cast<std::size_t>(t)] = 1.0 + (end - 1.0) * t / steps;
  return from_alpha_bar(std::move(a));
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag, int step, std::size_t frame) {
  std::uint64_t h = splitmix(master);
  h = splitmix(h ^ tag);
  h = splitmix(h ^ static_cast<std::uint64_t>(step));
  return splitmix(h ^ static_cast<std::uint64_t>(frame));
}

LatentVideo IdentityDenoiser::sample_step(const LatentVideo& x_t, int t, const NoiseSchedule&,
                                          const Conditioning&, std::uint64_t) const {
  LatentVideo out = x_t;
  out.timestep = t - 1;
  return out;
}

LinearGaussianDenoiser::LinearGaussianDenoiser(double mean, double stddev)
    : mean_(mean), stddev_(stddev) {
  if (!(stddev > 0.0)) throw ParameterDomainError("linear-gaussian stddev must be > 0");
}

std::string LinearGaussianDenoiser::descriptor() const {
  return "linear-gaussian(mean=" + std::to_string(mean_) + ", stddev=" + std::to_string(stddev_) +
         ")";
}

LinearGaussianDenoiser::Posterior LinearGaussianDenoiser::posterior(
    int t, const NoiseSchedule& schedule) const {
  const double s2 = stddev_ * stddev_;
  const double ab_prev = schedule.alpha_bar(t - 1);
  const double ab = schedule.alpha_bar(t);
  const double alpha = schedule.alpha(t);
  const double v_prev = ab_prev * s2 + 1.0 - ab_prev;
  const double v = ab * s2 + 1.0 - ab;
  const double gain = std::sqrt(alpha) * v_prev / v;
  Posterior p;
  p.gain = gain;
  p.offset = std::sqrt(ab_prev) * mean_ - gain * std::sqrt(ab) * mean_;
  p.variance = std::max(0.0, v_prev - alpha * v_prev * v_prev / v);
  return p;
}

LatentVideo LinearGaussianDenoiser::sample_step(const LatentVideo& x_t, int t,
                                                const NoiseSchedule& schedule, const Conditioning&,
                                                std::uint64_t seed) const {
  const Posterior p = posterior(t, schedule);
  const double sd = std::sqrt(p.variance);
  LatentVideo out = x_t;
  out.timestep = t - 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    std::mt19937_64 rng(stream_seed(seed, 0, t, f));
    for (double& v : out.frames[f]) v = p.offset + p.gain * v + sd * normal(rng);
  }
  return out;
}

DriftDenoiser::DriftDenoiser(int shift, double pull, double noise)
    : shift_(shift), pull_(pull), noise_(noise) {
  if (!(pull >= 0.0 && pull <= 1.0)) throw ParameterDomainError("drift pull must lie in [0, 1]");
  if (!(noise >= 0.0)) throw ParameterDomainError("drift noise must be >= 0");
}

std::string DriftDenoiser::descriptor() const {
  return "drift(shift=" + std::to_string(shift_) + ", pull=" + std::to_string(pull_) +
         ", noise=" + std::to_string(noise_) + ")";
}

LatentVideo DriftDenoiser::sample_step(const LatentVideo& x_t, int t,
                                       const NoiseSchedule& schedule, const Conditioning&,
                                       std::uint64_t seed) const {
  const int w = x_t.width;
  const int h = x_t.height;
  // 3x3 box blur of frame 0 with clamped borders.
  LatentVideo blurred(x_t.channels, h, w, 1);
  for (int c = 0; c < x_t.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double sum = 0.0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            sum += x_t.at(0, c, std::clamp(y + dy, 0, h - 1), std::clamp(x + dx, 0, w - 1));
          }
        }
        blurred.at(0, c, y, x) = sum / 9.0;
      }
    }
  }
  const double sd = noise_ * std::sqrt(1.0 - schedule.alpha_bar(t - 1));
  LatentVideo out = x_t;
  out.timestep = t - 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    std::mt19937_64 rng(stream_seed(seed, 0, t, f));
    const long offset = static_cast<long>(shift_) * static_cast<long>(f);
    for (int c = 0; c < x_t.channels; ++c) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const int sx = static_cast<int>(((x - offset) % w + w) % w);
          const double target = blurred.at(0, c, y, sx);
          double& v = out.at(f, c, y, x);
          v = (1.0 - pull_) * v + pull_ * target;
          if (sd > 0.0) v += sd * normal(rng);
        }
      }
    }
  }
  return out;
}

std::unique_ptr<Denoiser> make_denoiser(const std::string& name) {
  if (name == "identity") return std::make_unique<IdentityDenoiser>();
  if (name == "linear-gaussian") return std::make_unique<LinearGaussianDenoiser>();
  if (name == "drift") return std::make_unique<DriftDenoiser>();
  throw ConfigError("unknown denoiser '" + name + "' (identity, linear-gaussian, drift)");
}

LatentVideo q_sample_known(const LatentVideo& x0, int t, const NoiseSchedule& schedule,
                           std::uint64_t seed, const InpaintOptions& options) {
  check_step(t, 0, schedule);
  x0.validate();
  LatentVideo out = x0;
  out.timestep = t;
  if (t == 0) return out;
  const double ab = schedule.alpha_bar(t);
  const double scale = std::sqrt(ab);
  const double sd = std::sqrt(1.0 - ab);
  parallel_for(out.frames.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      fill_normal(out.frames[f], stream_seed(seed, kTagKnown, t, f), scale, &x0.frames[f], sd);
    }
  });
  return out;
}

LatentVideo p_sample_unknown(const LatentVideo& x_t, int t, const Denoiser& denoiser,
                             const NoiseSchedule& schedule, const Conditioning& cond,
                             std::uint64_t seed) {
  check_step(t, 1, schedule);
  x_t.validate();
  LatentVideo out = denoiser.sample_step(x_t, t, schedule, cond, seed);
  bool ok = out.same_shape(x_t);
  for (std::size_t f = 0; ok && f < out.frames.size(); ++f) {
    ok = out.frames[f].size() == out.frame_size();
  }
  if (!ok) {
    throw ShapeError(denoiser.descriptor() + " returned shape " + out.shape_string() +
                     " for input shape " + x_t.shape_string());
  }
  out.timestep = t - 1;
  return out;
}

LatentVideo blend_step(const LatentVideo& known, const LatentVideo& unknown,
                       const ExtendedMask& mask, const InpaintOptions& options) {
  if (!known.same_shape(unknown)) {
    throw ShapeError("blend inputs differ: " + known.shape_string() + " vs " +
                     unknown.shape_string());
  }
  if (mask.frame_count() != known.frame_count() || mask.height != known.height ||
      mask.width != known.width) {
    throw ShapeError("mask " + std::to_string(mask.frame_count()) + "x" +
                     std::to_string(mask.height) + "x" + std::to_string(mask.width) +
                     " does not match video " + known.shape_string());
  }
  LatentVideo out = unknown;
  out.timestep = known.timestep;
  const std::size_t plane = static_cast<std::size_t>(known.height) * known.width;
  parallel_for(out.frames.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const auto& m = mask.masks[f];
      for (int c = 0; c < known.channels; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * plane;
        for (std::size_t p = 0; p < plane; ++p) {
          if (m[p]) out.frames[f][base + p] = known.frames[f][base + p];
        }
      }
    }
  });
  return out;
}

LatentVideo inpaint(const LatentVideo& x0, const ExtendedMask& mask, const Denoiser& denoiser,
                    const Conditioning& cond, const NoiseSchedule& schedule, std::size_t frames,
                    std::uint64_t seed, const InpaintOptions& options) {
  if (frames < 1) throw ParameterDomainError("frame count must be >= 1");
  x0.validate();
  LatentVideo clean = x0;
  if (x0.frame_count() == 1 && frames > 1) {
    clean.frames.assign(frames, x0.frames.front());
  } else if (x0.frame_count() != frames) {
    throw ShapeError("x0 has " + std::to_string(x0.frame_count()) + " frames, expected 1 or " +
                     std::to_string(frames));
  }
  clean.timestep = 0;
  if (mask.frame_count() != frames || mask.height != x0.height || mask.width != x0.width) {
    throw ShapeError("mask " + std::to_string(mask.frame_count()) + "x" +
                     std::to_string(mask.height) + "x" + std::to_string(mask.width) +
                     " does not match " + std::to_string(frames) + " frames of " +
                     std::to_string(x0.height) + "x" + std::to_string(x0.width));
  }

  const int T = schedule.steps();
  LatentVideo x(x0.channels, x0.height, x0.width, frames);
  x.timestep = T;
  parallel_for(frames, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      fill_normal(x.frames[f], stream_seed(seed, kTagInit, T, f), 0.0, nullptr, 1.0);
    }
  });
  for (int t = T; t >= 1; --t) {
    if (!mask.temporally_constant()) throw ShapeError("mask changed across frames");
    const LatentVideo known = q_sample_known(clean, t - 1, schedule, seed, options);
    const LatentVideo unknown = p_sample_unknown(x, t, denoiser, schedule, cond,
                                                 stream_seed(seed, kTagUnknown, t, 0));
    x = blend_step(known, unknown, mask, options);
  }
  return x;
}

FrameScorer motion_energy_scorer(const ExtendedMask& mask, double motion_weight,
                                 double background_weight) {
  return [mask, motion_weight, background_weight](const LatentVideo& video, std::size_t f) {
    const std::size_t plane = static_cast<std::size_t>(video.height) * video.width;
    double moving = 0.0;
    double still = 0.0;
    std::size_t n_moving = 0;
    std::size_t n_still = 0;
    const auto& m = mask.masks.at(f);
    for (int c = 0; c < video.channels; ++c) {
      const std::size_t base = static_cast<std::size_t>(c) * plane;
      for (std::size_t p = 0; p < plane; ++p) {
        const double d = std::abs(video.frames[f][base + p] - video.frames[0][base + p]);
        if (m[p]) {
          still += d;
          ++n_still;
        } else {
          moving += d;
          ++n_moving;
        }
      }
    }
    const double motion = n_moving ? moving / static_cast<double>(n_moving) : 0.0;
    const double deviation = n_still ? still / static_cast<double>(n_still) : 0.0;
    return motion_weight * motion - background_weight * deviation;
  };
}

FrameSelection select_frame(const LatentVideo& video, const ExtendedMask& mask,
                            const FrameScorer& scorer) {
  video.validate();
  const FrameScorer score = scorer ? scorer : motion_energy_scorer(mask);
  FrameSelection out;
  for (std::size_t f = 0; f < video.frame_count(); ++f) {
    out.scores.push_back(score(video, f));
    if (out.scores[f] > out.scores[out.index]) out.index = f;
  }
  return out;
}

LatentVideo image_to_latent(const Image& image) {
  if (image.channels < 3) throw ShapeError("latent conversion needs an RGB(A) image");
  LatentVideo out(3, image.height, image.width, 1);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) out.at(0, c, y, x) = image.at(x, y, c) / 127.5 - 1.0;
    }
  }
  return out;
}

Image latent_frame_to_image(const LatentVideo& video, std::size_t frame) {
  if (video.channels != 3) throw ShapeError("image conversion needs 3 latent channels");
  Image out(video.width, video.height, 3);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < video.height; ++y) {
      for (int x = 0; x < video.width; ++x) {
        const double v = std::round((video.at(frame, c, y, x) + 1.0) * 127.5);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace interplay
