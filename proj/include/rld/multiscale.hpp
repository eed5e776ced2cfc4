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
#ifndef RLD_MULTISCALE_HPP_
#define RLD_MULTISCALE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rld/geometry.hpp"
#include "rld/postprocess.hpp"

namespace rld {

// Aspect-preserving resize schedule: each target sets the short side unless
// the long side would exceed max_long_side.
struct ScalePlan {
  std::vector<std::uint32_t> short_side_targets;
  std::uint32_t max_long_side = 1333;

  bool operator==(const ScalePlan&) const = default;
};

// Targets {800, 900, 1000, 1100}, long side capped at 1333.
ScalePlan DefaultScalePlan();

// Throws InvalidArgument unless targets are nonempty, positive, strictly
// increasing and no larger than max_long_side.
void Validate(const ScalePlan& plan);

// min(target_short / short_side, max_long / long_side).
double ResizeFactor(ImageSize size, std::uint32_t target_short,
                    std::uint32_t max_long);

// round_half_even(factor * dim), at least 1, per dimension.
ImageSize ResizedSize(ImageSize size, double factor);

struct ResolvedScale {
  std::uint32_t target_short = 0;
  double factor = 1.0;
  ImageSize size;
};

std::vector<ResolvedScale> ResolvePlan(ImageSize size, const ScalePlan& plan);

// Multiplies every coordinate by factor. Throws InvalidArgument when
// factor <= 0.
std::vector<BBox> ScaleBoxes(std::span<const BBox> boxes, double factor);

struct ScaledDetections {
  // Resize factor the detections were produced at.
  double factor = 1.0;
  std::vector<Detection> detections;
};

// Maps every list back to the original frame (divide by its factor),
// concatenates, and runs per-image Soft-NMS.
std::vector<Detection> FuseMultiscale(std::span<const ScaledDetections> scales,
                                      const SoftNmsConfig& cfg);

}  // namespace rld

#endif  // RLD_MULTISCALE_HPP_
