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
#ifndef RLD_POSTPROCESS_HPP_
#define RLD_POSTPROCESS_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "rld/geometry.hpp"

namespace rld {

enum class SuppressionMethod { kHard, kLinear, kGaussian };

std::string_view ToString(SuppressionMethod m);
// Throws InvalidArgument on unknown names.
SuppressionMethod ParseSuppressionMethod(std::string_view name);

struct SoftNmsConfig {
  SuppressionMethod method = SuppressionMethod::kGaussian;
  // Used by kHard and kLinear.
  double iou_threshold = 0.5;
  // Used by kGaussian; decay is exp(-iou^2 / sigma).
  double sigma = 0.5;
  // Rescored detections below this are dropped.
  double score_floor = 0.001;
};

// Throws InvalidArgument when sigma <= 0, iou_threshold outside (0, 1] or
// score_floor outside [0, 1).
void Validate(const SoftNmsConfig& cfg);

// Strict weak order used for every score sort in this module: descending
// score, then ascending category, then lexicographic box coordinates, then
// ascending image id.
bool DetectionOrder(const Detection& a, const Detection& b);

// Greedy hard NMS, per category. Detections whose IoU with an already kept
// detection of the same category exceeds iou_threshold are removed. Output is
// sorted by DetectionOrder. Throws InvalidArgument when iou_threshold is
// outside (0, 1].
std::vector<Detection> StandardNms(std::span<const Detection> dets,
                                   double iou_threshold);

// Per-category Soft-NMS. Repeatedly selects the highest-scoring remaining
// detection and multiplies every other remaining score in its category by
// the decay for their overlap. Fully suppressed detections (decay 0) and
// those rescored below score_floor are dropped. Boxes are never modified.
std::vector<Detection> SoftNms(std::span<const Detection> dets,
                               const SoftNmsConfig& cfg);

// Decay factor applied to a neighbour at overlap `iou`.
double SoftNmsDecay(double iou, const SoftNmsConfig& cfg);

// Applies StandardNms / SoftNms independently to every image id. Output is
// grouped by ascending image id, each group in DetectionOrder.
std::vector<Detection> StandardNmsPerImage(std::span<const Detection> dets,
                                           double iou_threshold);
std::vector<Detection> SoftNmsPerImage(std::span<const Detection> dets,
                                       const SoftNmsConfig& cfg);

}  // namespace rld

#endif  // RLD_POSTPROCESS_HPP_
