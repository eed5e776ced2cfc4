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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rld/postprocess.hpp"
#include "support.hpp"

namespace rld {
namespace {

Detection Det(BBox b, double score, std::int64_t cat = 0,
              std::int64_t image = 0) {
  return {b, cat, score, image};
}

TEST(StandardNmsTest, Examples) {
  EXPECT_TRUE(StandardNms({}, 0.5).empty());

  const std::vector<Detection> twins = {Det({0, 0, 10, 10}, 0.8),
                                        Det({0, 0, 10, 10}, 0.9)};
  const auto kept = StandardNms(twins, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].score, 0.9);

  const std::vector<Detection> three = {Det({0, 0, 10, 10}, 0.9),
                                        Det({0, 0, 10, 6}, 0.8),
                                        Det({50, 50, 60, 60}, 0.7)};
  ASSERT_NEAR(Iou(three[0].bbox, three[1].bbox), 0.6, 1e-12);
  const auto out = StandardNms(three, 0.5);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], three[0]);
  EXPECT_EQ(out[1], three[2]);
}

TEST(StandardNmsTest, RejectsBadThreshold) {
  EXPECT_THROW(StandardNms({}, 0.0), InvalidArgument);
  EXPECT_THROW(StandardNms({}, 1.5), InvalidArgument);
}

TEST(StandardNmsTest, CategoriesDoNotSuppressEachOther) {
  const std::vector<Detection> d = {Det({0, 0, 10, 10}, 0.9, 1),
                                    Det({0, 0, 10, 10}, 0.8, 2)};
  EXPECT_EQ(StandardNms(d, 0.5).size(), 2u);
}

TEST(StandardNmsTest, ThresholdOneKeepsEverything) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto dets = testing::MakeRandomDetections(seed, 12);
    EXPECT_EQ(StandardNms(dets, 1.0).size(), dets.size());
  }
}

TEST(StandardNmsTest, Properties) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto dets = testing::MakeRandomDetections(seed, 15);
    const auto out = StandardNms(dets, 0.5);
    EXPECT_LE(out.size(), dets.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_NE(std::find(dets.begin(), dets.end(), out[i]), dets.end());
      if (i > 0) EXPECT_GE(out[i - 1].score, out[i].score);
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        if (out[i].category_id == out[j].category_id) {
          EXPECT_LE(Iou(out[i].bbox, out[j].bbox), 0.5);
        }
      }
    }
    EXPECT_EQ(StandardNms(out, 0.5), out);
    std::vector<Detection> rev(dets.rbegin(), dets.rend());
    EXPECT_EQ(StandardNms(rev, 0.5), out);
  }
}

TEST(SoftNmsTest, SingleDetectionUnchanged) {
  const std::vector<Detection> one = {Det({1, 2, 3, 4}, 0.7)};
  EXPECT_EQ(SoftNms(one, SoftNmsConfig{}), one);
}

TEST(SoftNmsTest, GaussianIdenticalBoxes) {
  const std::vector<Detection> twins = {Det({0, 0, 10, 10}, 0.9),
                                        Det({0, 0, 10, 10}, 0.8)};
  const auto out = SoftNms(twins, SoftNmsConfig{});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].score, 0.9);
  // 0.8 * exp(-2), 40-digit reference.
  EXPECT_NEAR(out[1].score, 0.1082682265892901535, 1e-12);
  EXPECT_EQ(out[1].bbox, twins[1].bbox);
}

TEST(SoftNmsTest, DecayFunctions) {
  SoftNmsConfig cfg;
  cfg.sigma = 0.5;
  EXPECT_EQ(SoftNmsDecay(0.0, cfg), 1.0);
  EXPECT_NEAR(SoftNmsDecay(0.5, cfg), std::exp(-0.5), 1e-15);
  cfg.method = SuppressionMethod::kLinear;
  EXPECT_EQ(SoftNmsDecay(0.4, cfg), 1.0);
  EXPECT_NEAR(SoftNmsDecay(0.7, cfg), 0.3, 1e-15);
  cfg.method = SuppressionMethod::kHard;
  EXPECT_EQ(SoftNmsDecay(0.5, cfg), 1.0);
  EXPECT_EQ(SoftNmsDecay(0.51, cfg), 0.0);
}

TEST(SoftNmsTest, ScoreFloorDrops) {
  SoftNmsConfig cfg;
  cfg.score_floor = 0.2;
  const std::vector<Detection> twins = {Det({0, 0, 10, 10}, 0.9),
                                        Det({0, 0, 10, 10}, 0.8)};
  EXPECT_EQ(SoftNms(twins, cfg).size(), 1u);
}

TEST(SoftNmsTest, RejectsBadConfig) {
  SoftNmsConfig cfg;
  cfg.sigma = 0.0;
  EXPECT_THROW(SoftNms({}, cfg), InvalidArgument);
  cfg = {};
  cfg.score_floor = 1.0;
  EXPECT_THROW(SoftNms({}, cfg), InvalidArgument);
  cfg = {};
  cfg.iou_threshold = 0.0;
  EXPECT_THROW(Validate(cfg), InvalidArgument);
}

TEST(SoftNmsTest, MethodNames) {
  for (auto m : {SuppressionMethod::kHard, SuppressionMethod::kLinear,
                 SuppressionMethod::kGaussian}) {
    EXPECT_EQ(ParseSuppressionMethod(ToString(m)), m);
  }
  EXPECT_THROW(ParseSuppressionMethod("soft"), InvalidArgument);
}

// Pairs every output detection with the input it came from (same box,
// category and image); checks scores never rise.
void ExpectNoScoreIncrease(const std::vector<Detection>& in,
                           const std::vector<Detection>& out) {
  std::vector<bool> used(in.size(), false);
  for (const Detection& o : out) {
    bool found = false;
    for (std::size_t i = 0; i < in.size() && !found; ++i) {
      if (used[i] || in[i].bbox != o.bbox ||
          in[i].category_id != o.category_id || in[i].image_id != o.image_id ||
          in[i].score < o.score) {
        continue;
      }
      used[i] = true;
      found = true;
    }
    EXPECT_TRUE(found) << "score rose or box changed";
  }
}

TEST(SoftNmsTest, Properties) {
  for (auto method : {SuppressionMethod::kLinear, SuppressionMethod::kGaussian}) {
    SoftNmsConfig cfg;
    cfg.method = method;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto dets = testing::MakeRandomDetections(seed, 15);
      const auto out = SoftNms(dets, cfg);
      EXPECT_LE(out.size(), dets.size());
      ExpectNoScoreIncrease(dets, out);
      for (const auto& d : out) EXPECT_GE(d.score, cfg.score_floor);
      std::vector<Detection> rev(dets.rbegin(), dets.rend());
      EXPECT_EQ(SoftNms(rev, cfg), out);
    }
  }
}

TEST(SoftNmsTest, HardMatchesStandard) {
  SoftNmsConfig cfg;
  cfg.method = SuppressionMethod::kHard;
  cfg.score_floor = 0.0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto dets = testing::MakeRandomDetections(seed, 15);
    EXPECT_EQ(SoftNms(dets, cfg), StandardNms(dets, cfg.iou_threshold));
  }
}

TEST(PerImageTest, ImagesAreIndependent) {
  const std::vector<Detection> d = {Det({0, 0, 10, 10}, 0.9, 0, 1),
                                    Det({0, 0, 10, 10}, 0.8, 0, 2),
                                    Det({0, 0, 10, 10}, 0.7, 0, 2)};
  const auto hard = StandardNmsPerImage(d, 0.5);
  ASSERT_EQ(hard.size(), 2u);
  std::map<std::int64_t, int> per_image;
  for (const auto& x : hard) per_image[x.image_id]++;
  EXPECT_EQ(per_image[1], 1);
  EXPECT_EQ(per_image[2], 1);
  EXPECT_EQ(SoftNmsPerImage(d, SoftNmsConfig{}).size(), 3u);
}

}  // namespace
}  // namespace rld
