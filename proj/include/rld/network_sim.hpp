/* Copyright 2026 The RLD Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RLD_NETWORK_SIM_HPP_
#define RLD_NETWORK_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rld/geometry.hpp"

namespace rld::sim {

// Dense H x W x C grid, channel-fastest.
class FeatureMap {
 public:
  FeatureMap() = default;
  // Throws rld::InvalidArgument when any dimension is zero.
  FeatureMap(int height, int width, int channels, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return values_.size(); }

  double& at(int y, int x, int c) {
    return values_[Index(y, x, c)];
  }
  double at(int y, int x, int c) const { return values_[Index(y, x, c)]; }

  // Clamp-to-edge read.
  double clamped(int y, int x, int c) const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool SameShape(const FeatureMap& o) const {
    return height_ == o.height_ && width_ == o.width_ &&
           channels_ == o.channels_;
  }

  bool operator==(const FeatureMap&) const = default;

 private:
  std::size_t Index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

// out = a * x + b * y. Shapes must match.
FeatureMap Axpby(double a, const FeatureMap& x, double b, const FeatureMap& y);

// Switchable atrous convolution. One 3x3 kernel is shared by a dilation-1 and
// a dilation-3 branch; a per-pixel switch S in [0, 1] blends them:
//
//   y = S * conv(x, w, d=1) + (1 - S) * conv(x, w, d=3)
//
// S = logistic(switch_weight . avg5x5(x) + switch_bias). Borders are padded
// by clamping to the edge. The convolution has no bias, so with S frozen the
// operator is linear in x.
struct SacParams {
  int in_channels = 0;
  int out_channels = 0;
  // [out][in][ky][kx], 3 x 3.
  std::vector<double> kernel;
  // One weight per input channel.
  std::vector<double> switch_weight;
  double switch_bias = 0.0;

  double k(int o, int i, int ky, int kx) const {
    return kernel[((static_cast<std::size_t>(o) * in_channels + i) * 3 + ky) *
                      3 +
                  kx];
  }
};

SacParams SeededSacParams(int in_channels, int out_channels,
                          std::uint64_t seed);

// Plain padded 3x3 convolution with the SAC kernel at one dilation.
FeatureMap DilatedConv(const FeatureMap& x, const SacParams& p, int dilation);

// The switch map (H x W x 1) computed from x.
FeatureMap SwitchMap(const FeatureMap& x, const SacParams& p);

// SAC with the switch computed from x.
FeatureMap SacApply(const FeatureMap& x, const SacParams& p);

// SAC with an externally supplied (frozen) switch map of shape H x W x 1.
FeatureMap SacApplyWithSwitch(const FeatureMap& x, const SacParams& p,
                              const FeatureMap& switch_map);

// Squeeze-and-excitation style channel gating:
// s = logistic(weight * mean_hw(x) + bias), out[..., c] = s_c * x[..., c].
struct SeParams {
  int channels = 0;
  // Row-major C x C.
  std::vector<double> weight;
  std::vector<double> bias;
};

SeParams SeededSeParams(int channels, std::uint64_t seed);

FeatureMap SeFuse(const FeatureMap& x, const SeParams& p);

// A 1x1 channel-mixing operator (out x in matrix, plus bias).
struct PointwiseParams {
  int in_channels = 0;
  int out_channels = 0;
  std::vector<double> weight;
  std::vector<double> bias;
};

PointwiseParams SeededPointwise(int in_channels, int out_channels,
                                double scale, std::uint64_t seed);
FeatureMap Pointwise(const FeatureMap& x, const PointwiseParams& p);

// 2x2 average pooling, stride 2. Dimensions must be even.
FeatureMap AvgPool2(const FeatureMap& x);
// Nearest-neighbour 2x upsampling.
FeatureMap Upsample2(const FeatureMap& x);

// Recursive feature pyramid.
//
//   x_i = B_i(x_{i-1}, R_i(f_i))       bottom-up, stage i = 1..S
//   f_i = F_i(f_{i+1}, x_i)            top-down, f_{S+1} absent
//
// with B_i(x, r) = SAC_i(mix_i(pool(x)) + r), R_i a 1x1 map on f_i,
// F_i(f, x) = SE_i(lateral_i(x) + up(f)). The first pass uses R_i(f_i) = 0.
struct StageParams {
  PointwiseParams mix;
  SacParams sac;
  PointwiseParams feedback;
  PointwiseParams lateral;
  SeParams se;
};

struct StageSpec {
  int input_channels = 3;
  int channels = 4;
  int unrolls = 2;
  std::vector<StageParams> stages;
};

// Seeded parameters for `num_stages` stages. `feedback_scale` == 0 yields
// R_i == 0 exactly.
StageSpec SeededStageSpec(int input_channels, int channels, int num_stages,
                          int unrolls, std::uint64_t seed,
                          double feedback_scale = 0.5);

// Returns f_1..f_S of the final unroll. Throws rld::InvalidArgument when the
// input channels do not match or the spatial dims are not divisible by 2^S.
std::vector<FeatureMap> RfpForward(const FeatureMap& x0,
                                   const StageSpec& spec);

// Cascade of fixed box refiners: each head moves the box center by
// (dx * w, dy * h) and scales width and height by (sw, sh) about the moved
// center.
struct BoxDelta {
  double dx = 0.0;
  double dy = 0.0;
  double sw = 1.0;
  double sh = 1.0;
};

struct CascadeHead {
  BoxDelta delta;
  double iou_threshold = 0.5;
};

struct CascadeSpec {
  std::vector<CascadeHead> heads;
};

// Throws rld::InvalidArgument unless thresholds are strictly increasing and
// every scale is positive.
void Validate(const CascadeSpec& spec);

// Small seeded deltas with thresholds {0.5, 0.6, 0.7}.
CascadeSpec SeededCascadeSpec(std::uint64_t seed);

BBox ApplyDelta(const BBox& b, const BoxDelta& d);

// result[k][p] is proposal p after head k.
std::vector<std::vector<BBox>> CascadeRefine(const std::vector<BBox>& proposals,
                                             const CascadeSpec& spec);

// Order-sensitive 64-bit digest of the exact value bits.
std::uint64_t Checksum(const FeatureMap& m);

struct SimulationConfig {
  int input_size = 32;
  int input_channels = 3;
  int channels = 4;
  int stages = 3;
  int unrolls = 2;
};

// Seeded end-to-end forward pass; returns a textual report with per-stage
// shapes, value sums and checksums, plus the cascade boxes of one proposal.
std::string RunSimulation(std::uint64_t seed, const SimulationConfig& cfg);

}  // namespace rld::sim

#endif  // RLD_NETWORK_SIM_HPP_
