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
#include "rld/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rld {

bool IsValid(const BBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) &&
         std::isfinite(b.x_max) && std::isfinite(b.y_max) &&
         b.x_max >= b.x_min && b.y_max >= b.y_min;
}

bool IsValid(const ImageSize& s) { return s.width >= 1 && s.height >= 1; }

bool IsValid(const Detection& d) {
  return IsValid(d.bbox) && d.score >= 0.0 && d.score <= 1.0 &&
         d.category_id >= 0 && d.image_id >= 0;
}

bool IsValid(const GroundTruthBox& g) {
  return IsValid(g.bbox) && g.category_id >= 0 && g.image_id >= 0;
}

double Area(const BBox& b) {
  return std::max(0.0, b.x_max - b.x_min) * std::max(0.0, b.y_max - b.y_min);
}

double Iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = Area(a) + Area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BBox Clip(const BBox& b, ImageSize s) {
  const double w = static_cast<double>(s.width);
  const double h = static_cast<double>(s.height);
  return BBox{std::clamp(b.x_min, 0.0, w), std::clamp(b.y_min, 0.0, h),
              std::clamp(b.x_max, 0.0, w), std::clamp(b.y_max, 0.0, h)};
}

BBox FromXywh(double x, double y, double w, double h) {
  if (!(w >= 0.0) || !(h >= 0.0)) {
    throw InvalidArgument("box width and height must be nonnegative");
  }
  return BBox{x, y, x + w, y + h};
}

std::array<double, 4> ToXywh(const BBox& b) {
  return {b.x_min, b.y_min, b.x_max - b.x_min, b.y_max - b.y_min};
}

}  // namespace rld
