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
#ifndef RLD_GEOMETRY_HPP_
#define RLD_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>

namespace rld {

// Axis-aligned box in continuous pixel coordinates (no +1 inclusive pixel
// convention). A box with x_max == x_min or y_max == y_min is degenerate but
// valid.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool operator==(const BBox&) const = default;
};

struct ImageSize {
  std::uint32_t width = 1;
  std::uint32_t height = 1;

  bool operator==(const ImageSize&) const = default;
};

struct Detection {
  BBox bbox;
  std::int64_t category_id = 0;
  double score = 0.0;
  std::int64_t image_id = 0;

  bool operator==(const Detection&) const = default;
};

struct GroundTruthBox {
  BBox bbox;
  std::int64_t category_id = 0;
  std::int64_t image_id = 0;

  bool operator==(const GroundTruthBox&) const = default;
};

// Raised when a value violates the invariants of its domain type.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// True when all coordinates are finite and the corners are ordered.
bool IsValid(const BBox& b);
bool IsValid(const ImageSize& s);
bool IsValid(const Detection& d);
bool IsValid(const GroundTruthBox& g);

double Area(const BBox& b);

// Intersection over union. Returns 0 when the union has zero area, so two
// degenerate boxes never overlap.
double Iou(const BBox& a, const BBox& b);

// Clamps every coordinate into [0, width] x [0, height].
BBox Clip(const BBox& b, ImageSize s);

// Corner+size <-> corner-corner. Throws InvalidArgument on negative w or h.
BBox FromXywh(double x, double y, double w, double h);
std::array<double, 4> ToXywh(const BBox& b);

}  // namespace rld

#endif  // RLD_GEOMETRY_HPP_
