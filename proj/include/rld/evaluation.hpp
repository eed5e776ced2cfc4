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
#ifndef RLD_EVALUATION_HPP_
#define RLD_EVALUATION_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rld/geometry.hpp"

namespace rld {

// Outcome of greedy matching for one (image, category) pair at one IoU
// threshold. Indices refer to the input spans.
struct MatchResult {
  // Order in which detections were processed (descending score, ties by
  // input position).
  std::vector<std::size_t> order;
  std::vector<bool> detection_tp;
  // Index of the matched ground truth, or -1.
  std::vector<std::int64_t> matched_gt;
  std::vector<bool> gt_matched;
};

// Each detection, in descending-score order, claims the unmatched ground
// truth with the highest IoU provided that IoU >= iou_threshold; otherwise it
// is a false positive. Ties in IoU go to the lower ground-truth index.
MatchResult MatchDetections(std::span<const Detection> dets,
                            std::span<const GroundTruthBox> gts,
                            double iou_threshold);

struct ScoredMatch {
  double score = 0.0;
  bool true_positive = false;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;

  bool operator==(const PrPoint&) const = default;
};

// One point per detection after a stable descending-score sort. Empty when
// total_gt is zero.
std::vector<PrPoint> PrecisionRecallCurve(std::span<const ScoredMatch> matches,
                                          std::size_t total_gt);

// Number of recall sample points used by AveragePrecision.
inline constexpr int kRecallSamples = 101;

// 101-point interpolated AP: mean over r in {0, 0.01, ..., 1} of the maximum
// precision attained at any recall >= r (0 when no such point exists).
double AveragePrecision(std::span<const PrPoint> curve);

// {0.50, 0.55, ..., 0.95}.
std::vector<double> DefaultIouThresholds();

struct EvalResult {
  std::vector<double> thresholds;
  // Categories present in the ground truth, ascending.
  std::vector<std::int64_t> categories;
  // category id -> AP per threshold (same order as `thresholds`).
  std::map<std::int64_t, std::vector<double>> ap;
  std::vector<double> map_per_threshold;
  double map_overall = 0.0;

  double Ap(std::int64_t category_id, std::size_t threshold_index) const {
    return ap.at(category_id).at(threshold_index);
  }
};

// Per-category, per-threshold AP, averaged over categories present in the
// ground truth and then over thresholds. Detections of categories absent from
// the ground truth do not contribute. With no ground truth at all every mean
// is 0. Throws InvalidArgument when `thresholds` is empty, not strictly
// increasing, or has an entry outside (0, 1).
EvalResult Evaluate(std::span<const Detection> dets,
                    std::span<const GroundTruthBox> gts,
                    std::span<const double> thresholds);

// Per-threshold mAP, a per-category AP table and the overall value, all with
// 6 decimals. The final line is exactly "mAP <value>".
std::string FormatEvalReport(
    const EvalResult& result,
    const std::map<std::int64_t, std::string>& category_names = {});

}  // namespace rld

#endif  // RLD_EVALUATION_HPP_
