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
#ifndef RLD_AUGMENT_HPP_
#define RLD_AUGMENT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rld::augment {

// 8-bit RGB, row-major, interleaved.
struct Image {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  // Throws rld::InvalidArgument on zero dimensions.
  Image(std::uint32_t w, std::uint32_t h, std::uint8_t fill = 0);

  std::uint8_t& at(std::uint32_t x, std::uint32_t y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(std::uint32_t x, std::uint32_t y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  bool operator==(const Image&) const = default;
};

// Clamps to [0, 255] and rounds half to even.
std::uint8_t ToByte(double v);

// Additive zero-mean Gaussian noise with standard deviation `sigma` (pixel
// units), drawn independently per channel from the counter generator.
Image GaussianNoise(const Image& img, double sigma, std::uint64_t seed);

// Depth used by Fog for row y: 0 at the top row, 1 at the bottom row. A
// single-row image sits entirely at depth 1.
double FogDepth(std::uint32_t y, std::uint32_t height);

// Atmospheric scattering blend out = img * t + airlight * (1 - t) with
// t = exp(-attenuation * depth(y)).
Image Fog(const Image& img, double attenuation, double airlight);

// Number of streaks Rain draws for the given density (per kilopixel).
std::uint64_t RainStreakCount(double density, std::uint32_t width,
                              std::uint32_t height);

// Seeded straight streaks at `angle_deg` from vertical. Covered pixels move
// toward white: out = p + kRainOpacity * (255 - p).
inline constexpr double kRainOpacity = 0.6;
Image Rain(const Image& img, double density, double angle_deg,
           std::uint64_t seed);

// Normalized 1-D Gaussian taps with std radius / 2, truncated at 3 std.
// Empty for radius 0.
std::vector<double> GaussianKernel(double radius);

// Separable Gaussian blur of one real-valued plane, clamp-to-edge borders.
std::vector<double> BlurPlane(const std::vector<double>& plane,
                              std::uint32_t width, std::uint32_t height,
                              double radius);

Image Blur(const Image& img, double radius);

enum class CorruptionKind { kGaussianNoise, kRain, kFog, kBlur };

std::string_view ToString(CorruptionKind k);
// Throws rld::InvalidArgument on unknown names.
CorruptionKind ParseCorruptionKind(std::string_view name);

// One corruption with its parameters. `severity` scales the kind's strength
// parameter (sigma, density, attenuation or radius), so severity 0 is an
// exact identity.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  double severity = 1.0;
  double sigma = 20.0;
  double density = 2.0;
  double angle_deg = 15.0;
  double attenuation = 1.5;
  double airlight = 200.0;
  double radius = 2.0;
  std::uint64_t seed = 0;
};

// Throws rld::InvalidArgument when severity is outside [0, 1] or a parameter
// is negative or non-finite.
void Validate(const CorruptionSpec& spec);

Image ApplyCorruption(const Image& img, const CorruptionSpec& spec);

// Compact `key=value;...` description of the parameters that matter for the
// spec's kind, with 6 decimals.
std::string DescribeParams(const CorruptionSpec& spec);

}  // namespace rld::augment

#endif  // RLD_AUGMENT_HPP_
