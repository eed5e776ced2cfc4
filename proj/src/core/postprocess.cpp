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
#include "rld/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace rld {
namespace {

void CheckIouThreshold(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw InvalidArgument("iou_threshold must lie in (0, 1], got " +
                          std::to_string(t));
  }
}

std::map<std::int64_t, std::vector<Detection>> GroupByCategory(
    std::span<const Detection> dets) {
  std::map<std::int64_t, std::vector<Detection>> groups;
  for (const Detection& d : dets) groups[d.category_id].push_back(d);
  return groups;
}

std::map<std::int64_t, std::vector<Detection>> GroupByImage(
    std::span<const Detection> dets) {
  std::map<std::int64_t, std::vector<Detection>> groups;
  for (const Detection& d : dets) groups[d.image_id].push_back(d);
  return groups;
}

void SoftNmsGroup(std::vector<Detection> remaining, const SoftNmsConfig& cfg,
                  std::vector<Detection>* out) {
  while (!remaining.empty()) {
    auto best = std::min_element(remaining.begin(), remaining.end(),
                                 DetectionOrder);
    const Detection selected = *best;
    remaining.erase(best);
    out->push_back(selected);

    std::vector<Detection> next;
    next.reserve(remaining.size());
    for (Detection d : remaining) {
      const double decay = SoftNmsDecay(Iou(selected.bbox, d.bbox), cfg);
      if (decay <= 0.0) continue;
      d.score *= decay;
      if (d.score < cfg.score_floor) continue;
      next.push_back(d);
    }
    remaining = std::move(next);
  }
}

}  // namespace

std::string_view ToString(SuppressionMethod m) {
  switch (m) {
    case SuppressionMethod::kHard:
      return "hard";
    case SuppressionMethod::kLinear:
      return "linear";
    case SuppressionMethod::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

SuppressionMethod ParseSuppressionMethod(std::string_view name) {
  if (name == "hard") return SuppressionMethod::kHard;
  if (name == "linear") return SuppressionMethod::kLinear;
  if (name == "gaussian") return SuppressionMethod::kGaussian;
  throw InvalidArgument("unknown suppression method '" + std::string(name) +
                        "' (expected hard, linear or gaussian)");
}

void Validate(const SoftNmsConfig& cfg) {
  CheckIouThreshold(cfg.iou_threshold);
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw InvalidArgument("sigma must be positive, got " +
                          std::to_string(cfg.sigma));
  }
  if (!(cfg.score_floor >= 0.0 && cfg.score_floor < 1.0)) {
    throw InvalidArgument("score_floor must lie in [0, 1), got " +
                          std::to_string(cfg.score_floor));
  }
}

bool DetectionOrder(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.category_id, a.bbox.x_min, a.bbox.y_min, a.bbox.x_max,
                  a.bbox.y_max, a.image_id) <
         std::tie(b.category_id, b.bbox.x_min, b.bbox.y_min, b.bbox.x_max,
                  b.bbox.y_max, b.image_id);
}

double SoftNmsDecay(double iou, const SoftNmsConfig& cfg) {
  switch (cfg.method) {
    case SuppressionMethod::kHard:
      return iou > cfg.iou_threshold ? 0.0 : 1.0;
    case SuppressionMethod::kLinear:
      return iou > cfg.iou_threshold ? 1.0 - iou : 1.0;
    case SuppressionMethod::kGaussian:
      return std::exp(-(iou * iou) / cfg.sigma);
  }
  return 1.0;
}

std::vector<Detection> StandardNms(std::span<const Detection> dets,
                                   double iou_threshold) {
  CheckIouThreshold(iou_threshold);
  std::vector<Detection> kept;
  for (auto& [category, group] : GroupByCategory(dets)) {
    std::stable_sort(group.begin(), group.end(), DetectionOrder);
    const std::size_t first = kept.size();
    for (const Detection& d : group) {
      const bool suppressed =
          std::any_of(kept.begin() + static_cast<std::ptrdiff_t>(first),
                      kept.end(), [&](const Detection& k) {
                        return Iou(k.bbox, d.bbox) > iou_threshold;
                      });
      if (!suppressed) kept.push_back(d);
    }
  }
  std::stable_sort(kept.begin(), kept.end(), DetectionOrder);
  return kept;
}

std::vector<Detection> SoftNms(std::span<const Detection> dets,
                               const SoftNmsConfig& cfg) {
  Validate(cfg);
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (auto& [category, group] : GroupByCategory(dets)) {
    SoftNmsGroup(std::move(group), cfg, &out);
  }
  std::stable_sort(out.begin(), out.end(), DetectionOrder);
  return out;
}

std::vector<Detection> StandardNmsPerImage(std::span<const Detection> dets,
                                           double iou_threshold) {
  CheckIouThreshold(iou_threshold);
  std::vector<Detection> out;
  for (const auto& [image, group] : GroupByImage(dets)) {
    auto kept = StandardNms(group, iou_threshold);
    out.insert(out.end(), kept.begin(), kept.end());
  }
  return out;
}

std::vector<Detection> SoftNmsPerImage(std::span<const Detection> dets,
                                       const SoftNmsConfig& cfg) {
  Validate(cfg);
  std::vector<Detection> out;
  for (const auto& [image, group] : GroupByImage(dets)) {
    auto kept = SoftNms(group, cfg);
    out.insert(out.end(), kept.begin(), kept.end());
  }
  return out;
}

}  // namespace rld
