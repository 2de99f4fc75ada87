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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "interplay/raster.hpp"

namespace interplay {

// n frames of C x H x W real values, channel-major within a frame.
struct LatentVideo {
  int channels = 3;
  int height = 0;
  int width = 0;
  int timestep = 0;
  std::vector<std::vector<double>> frames;

  LatentVideo() = default;
  LatentVideo(int channels, int height, int width, std::size_t frames, double fill = 0.0);

  std::size_t frame_size() const { return static_cast<std::size_t>(channels) * height * width; }
  std::size_t frame_count() const { return frames.size(); }
  double& at(std::size_t f, int c, int y, int x) {
    return frames[f][(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(std::size_t f, int c, int y, int x) const {
    return frames[f][(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  bool same_shape(const LatentVideo& other) const;
  std::string shape_string() const;

  // Throws ShapeError when any frame has the wrong size or there are no frames.
  void validate() const;
};

// Per-frame H x W binary masks (1 = known background, 0 = unknown).
struct ExtendedMask {
  int height = 0;
  int width = 0;
  std::vector<std::vector<std::uint8_t>> masks;

  std::size_t frame_count() const { return masks.size(); }
  std::uint8_t at(std::size_t f, int y, int x) const {
    return masks[f][static_cast<std::size_t>(y) * width + x];
  }
  // True when every frame equals frame 0.
  bool temporally_constant() const;
};

// n identical copies of `mask`. Throws ConfigError listing non-binary values.
ExtendedMask extend_mask(const Mask& mask, std::size_t n);

// Cumulative signal levels alpha_bar[0..T], alpha_bar[0] = 1, strictly decreasing.
class NoiseSchedule {
 public:
  // Throws ParameterDomainError unless the sequence starts at 1, is strictly
  // decreasing and stays in (0, 1].
  static NoiseSchedule from_alpha_bar(std::vector<double> alpha_bar);
  // alpha_bar[t] = 1 + (end - 1) t / T.
  static NoiseSchedule linear(int steps, double end = 1e-4);

  int steps() const { return static_cast<int>(alpha_bar_.size()) - 1; }
  double alpha_bar(int t) const { return alpha_bar_.at(static_cast<std::size_t>(t)); }
  // Per-step factor alpha_t = alpha_bar[t] / alpha_bar[t - 1], t >= 1.
  double alpha(int t) const { return alpha_bar(t) / alpha_bar(t - 1); }

 private:
  std::vector<double> alpha_bar_;
};

// Opaque payload handed to the denoiser untouched.
struct Conditioning {
  std::string payload;
};

// Seed for one RNG stream: (master seed, stream tag, step, frame).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag, int step, std::size_t frame);

// Reverse-process model: maps the whole video at step t to step t - 1.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual LatentVideo sample_step(const LatentVideo& x_t, int t, const NoiseSchedule& schedule,
                                  const Conditioning& cond, std::uint64_t seed) const = 0;
  virtual std::string descriptor() const = 0;
};

// mu = x_t, Sigma = 0.
class IdentityDenoiser : public Denoiser {
 public:
  LatentVideo sample_step(const LatentVideo& x_t, int t, const NoiseSchedule& schedule,
                          const Conditioning& cond, std::uint64_t seed) const override;
  std::string descriptor() const override { return "identity"; }
};

// Exact reverse step for data x_0 ~ N(mean, stddev^2) i.i.d. per element:
//   v' = abar_{t-1} s^2 + 1 - abar_{t-1},  v = abar_t s^2 + 1 - abar_t
//   mu = sqrt(abar_{t-1}) m + sqrt(alpha_t) v' / v (x_t - sqrt(abar_t) m)
//   Sigma = v' - alpha_t v'^2 / v
class LinearGaussianDenoiser : public Denoiser {
 public:
  LinearGaussianDenoiser(double mean = 0.0, double stddev = 0.5);
  LatentVideo sample_step(const LatentVideo& x_t, int t, const NoiseSchedule& schedule,
                          const Conditioning& cond, std::uint64_t seed) const override;
  std::string descriptor() const override;

  double mean() const { return mean_; }
  double stddev() const { return stddev_; }
  // Posterior mean coefficients (offset, gain on x_t) and variance at step t.
  struct Posterior {
    double offset;
    double gain;
    double variance;
  };
  Posterior posterior(int t, const NoiseSchedule& schedule) const;

 private:
  double mean_;
  double stddev_;
};

// Smooths every frame toward a copy of frame 0 shifted right by
// `shift` * frame_index pixels (wrapping), plus noise of scale
// noise * sqrt(1 - abar_{t-1}). Frames drift apart, which gives the frame
// selector something to rank.
class DriftDenoiser : public Denoiser {
 public:
  DriftDenoiser(int shift = 1, double pull = 0.5, double noise = 0.1);
  LatentVideo sample_step(const LatentVideo& x_t, int t, const NoiseSchedule& schedule,
                          const Conditioning& cond, std::uint64_t seed) const override;
  std::string descriptor() const override;

 private:
  int shift_;
  double pull_;
  double noise_;
};

// Builds one of "identity", "linear-gaussian", "drift"; ConfigError otherwise.
std::unique_ptr<Denoiser> make_denoiser(const std::string& name);

// Frame-level parallelism for the per-frame operations.
struct InpaintOptions {
  int threads = 1;
};

// Samples N(sqrt(abar_t) x0, (1 - abar_t) I) per frame with its own RNG
// stream; t = 0 returns x0 exactly. Result carries timestep t. Throws
// ParameterDomainError unless 0 <= t <= T.
LatentVideo q_sample_known(const LatentVideo& x0, int t, const NoiseSchedule& schedule,
                           std::uint64_t seed, const InpaintOptions& options = {});

// One reverse step through `denoiser`; result carries timestep t - 1. Throws
// ParameterDomainError unless 1 <= t <= T and ShapeError (both shapes) when
// the denoiser changes the shape.
LatentVideo p_sample_unknown(const LatentVideo& x_t, int t, const Denoiser& denoiser,
                             const NoiseSchedule& schedule, const Conditioning& cond,
                             std::uint64_t seed);

// m * known + (1 - m) * unknown, realised as a per-element select so both
// sides stay bit-exact.
LatentVideo blend_step(const LatentVideo& known, const LatentVideo& unknown,
                       const ExtendedMask& mask, const InpaintOptions& options = {});

// X_T ~ N(0, I); for t = T..1: known at t - 1, unknown from the denoiser,
// blended. x0 holds one frame (replicated) or n frames.
LatentVideo inpaint(const LatentVideo& x0, const ExtendedMask& mask, const Denoiser& denoiser,
                    const Conditioning& cond, const NoiseSchedule& schedule, std::size_t frames,
                    std::uint64_t seed, const InpaintOptions& options = {});

using FrameScorer = std::function<double(const LatentVideo& video, std::size_t frame)>;

// mean |frame_i - frame_0| over mask-0 elements minus 10 x the same mean over
// mask-1 elements (all channels).
FrameScorer motion_energy_scorer(const ExtendedMask& mask, double motion_weight = 1.0,
                                 double background_weight = 10.0);

struct FrameSelection {
  std::size_t index = 0;
  std::vector<double> scores;
};

// argmax of `scorer` (default motion_energy_scorer); ties go to the lower index.
FrameSelection select_frame(const LatentVideo& video, const ExtendedMask& mask,
                            const FrameScorer& scorer = {});

// Raster <-> latent: v / 127.5 - 1 on the RGB channels; back with
// round((v + 1) 127.5) clamped to [0, 255].
LatentVideo image_to_latent(const Image& image);
Image latent_frame_to_image(const LatentVideo& video, std::size_t frame);

}  // namespace interplay
