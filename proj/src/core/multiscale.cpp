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
#include "rld/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rld {
namespace {

void CheckFactor(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("scale factor must be positive and finite, got " +
                          std::to_string(factor));
  }
}

std::uint32_t RoundDim(double v) {
  const double r = std::nearbyint(v);
  return r < 1.0 ? 1u : static_cast<std::uint32_t>(r);
}

}  // namespace

ScalePlan DefaultScalePlan() { return ScalePlan{{800, 900, 1000, 1100}, 1333}; }

void Validate(const ScalePlan& plan) {
  if (plan.max_long_side == 0) {
    throw InvalidArgument("max_long_side must be positive");
  }
  if (plan.short_side_targets.empty()) {
    throw InvalidArgument("scale plan needs at least one short-side target");
  }
  for (std::size_t i = 0; i < plan.short_side_targets.size(); ++i) {
    const std::uint32_t t = plan.short_side_targets[i];
    if (t == 0) throw InvalidArgument("short-side targets must be positive");
    if (t > plan.max_long_side) {
      throw InvalidArgument("short-side target " + std::to_string(t) +
                            " exceeds max_long_side");
    }
    if (i > 0 && t <= plan.short_side_targets[i - 1]) {
      throw InvalidArgument("short-side targets must be strictly increasing");
    }
  }
}

double ResizeFactor(ImageSize size, std::uint32_t target_short,
                    std::uint32_t max_long) {
  if (!IsValid(size)) throw InvalidArgument("image size must be positive");
  if (target_short == 0 || max_long == 0) {
    throw InvalidArgument("resize targets must be positive");
  }
  const double short_side = std::min(size.width, size.height);
  const double long_side = std::max(size.width, size.height);
  return std::min(target_short / short_side, max_long / long_side);
}

ImageSize ResizedSize(ImageSize size, double factor) {
  CheckFactor(factor);
  return ImageSize{RoundDim(factor * size.width),
                   RoundDim(factor * size.height)};
}

std::vector<ResolvedScale> ResolvePlan(ImageSize size, const ScalePlan& plan) {
  Validate(plan);
  std::vector<ResolvedScale> out;
  for (std::uint32_t t : plan.short_side_targets) {
    const double f = ResizeFactor(size, t, plan.max_long_side);
    out.push_back({t, f, ResizedSize(size, f)});
  }
  return out;
}

std::vector<BBox> ScaleBoxes(std::span<const BBox> boxes, double factor) {
  CheckFactor(factor);
  std::vector<BBox> out;
  out.reserve(boxes.size());
  for (const BBox& b : boxes) {
    out.push_back({b.x_min * factor, b.y_min * factor, b.x_max * factor,
                   b.y_max * factor});
  }
  return out;
}

std::vector<Detection> FuseMultiscale(std::span<const ScaledDetections> scales,
                                      const SoftNmsConfig& cfg) {
  Validate(cfg);
  std::vector<Detection> merged;
  for (const ScaledDetections& s : scales) {
    CheckFactor(s.factor);
    for (Detection d : s.detections) {
      d.bbox = {d.bbox.x_min / s.factor, d.bbox.y_min / s.factor,
                d.bbox.x_max / s.factor, d.bbox.y_max / s.factor};
      merged.push_back(d);
    }
  }
  return SoftNmsPerImage(merged, cfg);
}

}  // namespace rld
