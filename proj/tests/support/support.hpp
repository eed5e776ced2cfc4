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
#ifndef RLD_TESTS_SUPPORT_SUPPORT_HPP_
#define RLD_TESTS_SUPPORT_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rld/geometry.hpp"

namespace rld::testing {

// Reference evaluator: naive matching, explicit 101-point scan. Shares no code
// with the library beyond the plain data types.
struct ReferenceResult {
  // (category, threshold index) -> AP.
  std::map<std::pair<std::int64_t, std::size_t>, double> ap;
  std::vector<double> map_per_threshold;
  double map_overall = 0.0;
};

double ReferenceIou(const BBox& a, const BBox& b);

ReferenceResult ReferenceEvaluate(const std::vector<Detection>& dets,
                                  const std::vector<GroundTruthBox>& gts,
                                  const std::vector<double>& thresholds);

// Reference 101-point AP over (recall, precision) pairs.
double ReferenceAp(const std::vector<std::pair<double, double>>& curve);

struct RandomInstance {
  std::vector<Detection> dets;
  std::vector<GroundTruthBox> gts;
};

// At most max_dets detections, max_gts ground truths, max_cats categories,
// spread over two images. Boxes cluster so that overlaps are common.
RandomInstance MakeRandomInstance(std::uint64_t seed, int max_dets = 8,
                                  int max_gts = 5, int max_cats = 3);

// Random detections for suppression tests (up to `n` boxes, few categories,
// optional exact duplicates and score ties).
std::vector<Detection> MakeRandomDetections(std::uint64_t seed, int n);

// Self-deleting scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "rld");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Writes `num_images` synthetic PNGs with logo-like rectangles plus an
// annotation file into `dir`. Deterministic in (num_images, seed).
void WriteFixtureDataset(const std::filesystem::path& dir, int num_images,
                         std::uint64_t seed = 1);

std::string ReadText(const std::filesystem::path& path);

}  // namespace rld::testing

#endif  // RLD_TESTS_SUPPORT_SUPPORT_HPP_
