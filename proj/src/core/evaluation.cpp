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
#include "rld/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "rld/postprocess.hpp"

namespace rld {
namespace {

using ImageCategory = std::pair<std::int64_t, std::int64_t>;

void CheckThresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) {
    throw InvalidArgument("threshold list must not be empty");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    if (!(t > 0.0 && t < 1.0)) {
      throw InvalidArgument("IoU threshold " + std::to_string(t) +
                            " outside (0, 1)");
    }
    if (i > 0 && !(t > thresholds[i - 1])) {
      throw InvalidArgument("IoU thresholds must be strictly increasing");
    }
  }
}

}  // namespace

MatchResult MatchDetections(std::span<const Detection> dets,
                            std::span<const GroundTruthBox> gts,
                            double iou_threshold) {
  MatchResult r;
  r.order.resize(dets.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].score > dets[b].score;
                   });
  r.detection_tp.assign(dets.size(), false);
  r.matched_gt.assign(dets.size(), -1);
  r.gt_matched.assign(gts.size(), false);

  for (std::size_t di : r.order) {
    double best_iou = -1.0;
    std::int64_t best = -1;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (r.gt_matched[gi]) continue;
      const double iou = Iou(dets[di].bbox, gts[gi].bbox);
      if (iou >= iou_threshold && iou > best_iou) {
        best_iou = iou;
        best = static_cast<std::int64_t>(gi);
      }
    }
    if (best >= 0) {
      r.gt_matched[static_cast<std::size_t>(best)] = true;
      r.matched_gt[di] = best;
      r.detection_tp[di] = true;
    }
  }
  return r;
}

std::vector<PrPoint> PrecisionRecallCurve(std::span<const ScoredMatch> matches,
                                          std::size_t total_gt) {
  std::vector<PrPoint> curve;
  if (total_gt == 0) return curve;
  std::vector<ScoredMatch> sorted(matches.begin(), matches.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredMatch& a, const ScoredMatch& b) {
                     return a.score > b.score;
                   });
  curve.reserve(sorted.size());
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const ScoredMatch& m : sorted) {
    (m.true_positive ? tp : fp) += 1;
    curve.push_back({static_cast<double>(tp) / static_cast<double>(total_gt),
                     static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return curve;
}

double AveragePrecision(std::span<const PrPoint> curve) {
  if (curve.empty()) return 0.0;
  // Recall is non-decreasing along the curve, so the suffix maximum of
  // precision is the interpolated precision at each point's recall.
  std::vector<double> envelope(curve.size());
  double running = 0.0;
  for (std::size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    envelope[i] = running;
  }
  double sum = 0.0;
  std::size_t pos = 0;
  for (int k = 0; k < kRecallSamples; ++k) {
    const double r = static_cast<double>(k) / (kRecallSamples - 1);
    while (pos < curve.size() && curve[pos].recall < r) ++pos;
    if (pos == curve.size()) break;
    sum += envelope[pos];
  }
  return sum / kRecallSamples;
}

std::vector<double> DefaultIouThresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50.0 + 5.0 * i) / 100.0);
  return t;
}

EvalResult Evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruthBox> gts,
                    std::span<const double> thresholds) {
  CheckThresholds(thresholds);

  EvalResult result;
  result.thresholds.assign(thresholds.begin(), thresholds.end());

  std::map<std::int64_t, std::size_t> gt_count;
  std::map<ImageCategory, std::vector<GroundTruthBox>> gt_groups;
  for (const GroundTruthBox& g : gts) {
    ++gt_count[g.category_id];
    gt_groups[{g.category_id, g.image_id}].push_back(g);
  }

  // Canonical order first so the result does not depend on input order.
  std::vector<Detection> sorted(dets.begin(), dets.end());
  std::stable_sort(sorted.begin(), sorted.end(), DetectionOrder);
  std::map<ImageCategory, std::vector<Detection>> det_groups;
  for (const Detection& d : sorted) {
    if (gt_count.contains(d.category_id)) {
      det_groups[{d.category_id, d.image_id}].push_back(d);
    }
  }

  for (const auto& [category, count] : gt_count) {
    result.categories.push_back(category);
    std::vector<double>& aps = result.ap[category];
    for (double threshold : result.thresholds) {
      std::vector<ScoredMatch> pooled;
      auto it = det_groups.lower_bound(
          {category, std::numeric_limits<std::int64_t>::min()});
      for (; it != det_groups.end() && it->first.first == category; ++it) {
        const auto gt_it = gt_groups.find(it->first);
        const std::span<const GroundTruthBox> image_gts =
            gt_it == gt_groups.end() ? std::span<const GroundTruthBox>{}
                                     : std::span<const GroundTruthBox>(
                                           gt_it->second);
        const MatchResult m = MatchDetections(it->second, image_gts, threshold);
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          pooled.push_back({it->second[i].score, m.detection_tp[i]});
        }
      }
      std::stable_sort(pooled.begin(), pooled.end(),
                       [](const ScoredMatch& a, const ScoredMatch& b) {
                         return a.score > b.score;
                       });
      aps.push_back(AveragePrecision(PrecisionRecallCurve(pooled, count)));
    }
  }

  result.map_per_threshold.assign(result.thresholds.size(), 0.0);
  double total = 0.0;
  if (!result.categories.empty()) {
    for (std::size_t t = 0; t < result.thresholds.size(); ++t) {
      double s = 0.0;
      for (std::int64_t c : result.categories) s += result.ap[c][t];
      result.map_per_threshold[t] =
          s / static_cast<double>(result.categories.size());
      total += s;
    }
    result.map_overall =
        total / static_cast<double>(result.categories.size() *
                                    result.thresholds.size());
  }
  return result;
}

std::string FormatEvalReport(
    const EvalResult& result,
    const std::map<std::int64_t, std::string>& category_names) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "categories %zu thresholds %zu\n",
                result.categories.size(), result.thresholds.size());
  out += line;
  out += "iou_threshold mAP\n";
  for (std::size_t t = 0; t < result.thresholds.size(); ++t) {
    std::snprintf(line, sizeof(line), "%.2f %.6f\n", result.thresholds[t],
                  result.map_per_threshold[t]);
    out += line;
  }
  out += "category name AP\n";
  for (std::int64_t c : result.categories) {
    const std::vector<double>& aps = result.ap.at(c);
    double mean = 0.0;
    for (double a : aps) mean += a;
    mean /= static_cast<double>(aps.size());
    auto it = category_names.find(c);
    std::string name = it == category_names.end() ? "-" : it->second;
    for (char& ch : name) {
      if (ch == ' ' || ch == '\t' || ch == '\n') ch = '_';
    }
    out += std::to_string(c) + " " + name;
    std::snprintf(line, sizeof(line), " %.6f\n", mean);
    out += line;
  }
  std::snprintf(line, sizeof(line), "mAP %.6f\n", result.map_overall);
  out += line;
  return out;
}

}  // namespace rld
