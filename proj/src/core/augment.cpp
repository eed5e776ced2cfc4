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
#include "rld/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "rld/geometry.hpp"
#include "rld/random.hpp"

namespace rld::augment {
namespace {

void RequireNonNegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) +
                          " must be finite and nonnegative");
  }
}

}  // namespace

Image::Image(std::uint32_t w, std::uint32_t h, std::uint8_t fill)
    : width(w), height(h) {
  if (w == 0 || h == 0) throw InvalidArgument("image dimensions must be >= 1");
  pixels.assign(static_cast<std::size_t>(w) * h * 3, fill);
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::nearbyint(std::clamp(v, 0.0, 255.0)));
}

Image GaussianNoise(const Image& img, double sigma, std::uint64_t seed) {
  RequireNonNegative(sigma, "noise sigma");
  if (sigma == 0.0) return img;
  Image out = img;
  CounterRng rng(seed);
  for (std::uint8_t& p : out.pixels) {
    p = ToByte(static_cast<double>(p) + sigma * rng.NextGaussian());
  }
  return out;
}

double FogDepth(std::uint32_t y, std::uint32_t height) {
  if (height <= 1) return 1.0;
  return static_cast<double>(y) / static_cast<double>(height - 1);
}

Image Fog(const Image& img, double attenuation, double airlight) {
  RequireNonNegative(attenuation, "fog attenuation");
  if (!(airlight >= 0.0 && airlight <= 255.0)) {
    throw InvalidArgument("fog airlight must lie in [0, 255]");
  }
  if (attenuation == 0.0) return img;
  Image out = img;
  for (std::uint32_t y = 0; y < img.height; ++y) {
    const double t = std::exp(-attenuation * FogDepth(y, img.height));
    std::uint8_t* row = out.pixels.data() + static_cast<std::size_t>(y) *
                                                img.width * 3;
    for (std::size_t i = 0; i < static_cast<std::size_t>(img.width) * 3; ++i) {
      row[i] = ToByte(row[i] * t + airlight * (1.0 - t));
    }
  }
  return out;
}

std::uint64_t RainStreakCount(double density, std::uint32_t width,
                              std::uint32_t height) {
  return static_cast<std::uint64_t>(std::nearbyint(
      density * static_cast<double>(width) * static_cast<double>(height) /
      1000.0));
}

Image Rain(const Image& img, double density, double angle_deg,
           std::uint64_t seed) {
  RequireNonNegative(density, "rain density");
  if (!std::isfinite(angle_deg)) {
    throw InvalidArgument("rain angle must be finite");
  }
  const std::uint64_t count = RainStreakCount(density, img.width, img.height);
  if (count == 0) return img;

  const double rad = angle_deg * std::numbers::pi / 180.0;
  const double dx = std::sin(rad);
  const double dy = std::cos(rad);
  const double h = static_cast<double>(img.height);
  const double min_len = std::max(2.0, 0.03 * h);
  const double max_len = std::max(min_len + 1.0, 0.10 * h);

  // Coverage mask so overlapping streaks composite once and the result does
  // not depend on drawing order.
  std::vector<std::uint8_t> covered(
      static_cast<std::size_t>(img.width) * img.height, 0);
  CounterRng rng(seed);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double x0 = rng.NextUniform(0.0, img.width);
    const double y0 = rng.NextUniform(0.0, img.height);
    const double len = rng.NextUniform(min_len, max_len);
    const auto steps = static_cast<int>(std::ceil(len));
    for (int s = 0; s <= steps; ++s) {
      const double px = std::floor(x0 + dx * s);
      const double py = std::floor(y0 + dy * s);
      if (px < 0.0 || py < 0.0 || px >= img.width || py >= img.height) break;
      covered[static_cast<std::size_t>(py) * img.width +
              static_cast<std::size_t>(px)] = 1;
    }
  }

  Image out = img;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) continue;
    for (int c = 0; c < 3; ++c) {
      std::uint8_t& p = out.pixels[i * 3 + static_cast<std::size_t>(c)];
      p = ToByte(p + kRainOpacity * (255.0 - p));
    }
  }
  return out;
}

std::vector<double> GaussianKernel(double radius) {
  RequireNonNegative(radius, "blur radius");
  if (radius == 0.0) return {};
  const double sigma = radius / 2.0;
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
  double sum = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double w = std::exp(-(k * k) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(k + half)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

std::vector<double> BlurPlane(const std::vector<double>& plane,
                              std::uint32_t width, std::uint32_t height,
                              double radius) {
  const std::vector<double> taps = GaussianKernel(radius);
  if (taps.empty()) return plane;
  const int half = static_cast<int>(taps.size() / 2);
  const int w = static_cast<int>(width);
  const int h = static_cast<int>(height);
  std::vector<double> tmp(plane.size());
  std::vector<double> out(plane.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int xx = std::clamp(x + k, 0, w - 1);
        acc += taps[static_cast<std::size_t>(k + half)] *
               plane[static_cast<std::size_t>(y) * w + xx];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int yy = std::clamp(y + k, 0, h - 1);
        acc += taps[static_cast<std::size_t>(k + half)] *
               tmp[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

Image Blur(const Image& img, double radius) {
  RequireNonNegative(radius, "blur radius");
  if (radius == 0.0) return img;
  Image out = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<double> plane(n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) plane[i] = img.pixels[i * 3 + c];
    const std::vector<double> blurred =
        BlurPlane(plane, img.width, img.height, radius);
    for (std::size_t i = 0; i < n; ++i) out.pixels[i * 3 + c] = ToByte(blurred[i]);
  }
  return out;
}

std::string_view ToString(CorruptionKind k) {
  switch (k) {
    case CorruptionKind::kGaussianNoise:
      return "gaussian_noise";
    case CorruptionKind::kRain:
      return "rain";
    case CorruptionKind::kFog:
      return "fog";
    case CorruptionKind::kBlur:
      return "blur";
  }
  return "unknown";
}

CorruptionKind ParseCorruptionKind(std::string_view name) {
  if (name == "gaussian_noise") return CorruptionKind::kGaussianNoise;
  if (name == "rain") return CorruptionKind::kRain;
  if (name == "fog") return CorruptionKind::kFog;
  if (name == "blur") return CorruptionKind::kBlur;
  throw InvalidArgument("unknown corruption kind '" + std::string(name) +
                        "' (expected gaussian_noise, rain, fog or blur)");
}

void Validate(const CorruptionSpec& spec) {
  if (!(spec.severity >= 0.0 && spec.severity <= 1.0)) {
    throw InvalidArgument("severity must lie in [0, 1]");
  }
  RequireNonNegative(spec.sigma, "sigma");
  RequireNonNegative(spec.density, "density");
  RequireNonNegative(spec.attenuation, "attenuation");
  RequireNonNegative(spec.radius, "radius");
  if (!std::isfinite(spec.angle_deg)) throw InvalidArgument("angle must be finite");
  if (!(spec.airlight >= 0.0 && spec.airlight <= 255.0)) {
    throw InvalidArgument("airlight must lie in [0, 255]");
  }
}

Image ApplyCorruption(const Image& img, const CorruptionSpec& spec) {
  Validate(spec);
  switch (spec.kind) {
    case CorruptionKind::kGaussianNoise:
      return GaussianNoise(img, spec.severity * spec.sigma, spec.seed);
    case CorruptionKind::kRain:
      return Rain(img, spec.severity * spec.density, spec.angle_deg,
                  spec.seed);
    case CorruptionKind::kFog:
      return Fog(img, spec.severity * spec.attenuation, spec.airlight);
    case CorruptionKind::kBlur:
      return Blur(img, spec.severity * spec.radius);
  }
  return img;
}

std::string DescribeParams(const CorruptionSpec& spec) {
  char buf[160];
  switch (spec.kind) {
    case CorruptionKind::kGaussianNoise:
      std::snprintf(buf, sizeof(buf), "severity=%.6f;sigma=%.6f",
                    spec.severity, spec.sigma);
      break;
    case CorruptionKind::kRain:
      std::snprintf(buf, sizeof(buf), "severity=%.6f;density=%.6f;angle=%.6f",
                    spec.severity, spec.density, spec.angle_deg);
      break;
    case CorruptionKind::kFog:
      std::snprintf(buf, sizeof(buf),
                    "severity=%.6f;attenuation=%.6f;airlight=%.6f",
                    spec.severity, spec.attenuation, spec.airlight);
      break;
    case CorruptionKind::kBlur:
      std::snprintf(buf, sizeof(buf), "severity=%.6f;radius=%.6f",
                    spec.severity, spec.radius);
      break;
  }
  return buf;
}

}  // namespace rld::augment
