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

#include <cmath>

#include "rld/geometry.hpp"
#include "rld/multiscale.hpp"
#include "rld/random.hpp"

namespace rld {
namespace {

TEST(PlanTest, Default) {
  const ScalePlan p = DefaultScalePlan();
  EXPECT_EQ(p.short_side_targets, (std::vector<std::uint32_t>{800, 900, 1000, 1100}));
  EXPECT_EQ(p.max_long_side, 1333u);
  EXPECT_NO_THROW(Validate(p));
}

TEST(PlanTest, Validation) {
  ScalePlan p = DefaultScalePlan();
  p.short_side_targets = {900, 800};
  EXPECT_THROW(Validate(p), InvalidArgument);
  p.short_side_targets = {1400};
  EXPECT_THROW(Validate(p), InvalidArgument);
  p.short_side_targets = {};
  EXPECT_THROW(Validate(p), InvalidArgument);
}

TEST(ResizeTest, WorkedExamples) {
  const double f1 = ResizeFactor({1000, 1500}, 800, 1333);
  EXPECT_EQ(f1, 0.8);
  EXPECT_EQ(ResizedSize({1000, 1500}, f1), (ImageSize{800, 1200}));

  const double f2 = ResizeFactor({800, 800}, 800, 1333);
  EXPECT_EQ(f2, 1.0);
  EXPECT_EQ(ResizedSize({800, 800}, f2), (ImageSize{800, 800}));

  const double f3 = ResizeFactor({100, 4000}, 800, 1333);
  EXPECT_EQ(f3, 0.33325);
  EXPECT_EQ(ResizedSize({100, 4000}, f3), (ImageSize{33, 1333}));
}

TEST(ResizeTest, RoundsHalfToEvenWithMinimumOne) {
  EXPECT_EQ(ResizedSize({5, 3}, 0.5), (ImageSize{2, 2}));
  EXPECT_EQ(ResizedSize({1, 1}, 0.01), (ImageSize{1, 1}));
}

TEST(ResizeTest, Properties) {
  CounterRng rng(41);
  const ScalePlan plan = DefaultScalePlan();
  for (int i = 0; i < 2000; ++i) {
    const ImageSize s{1 + static_cast<std::uint32_t>(rng.NextBelow(5000)),
                      1 + static_cast<std::uint32_t>(rng.NextBelow(5000))};
    double prev = 0.0;
    for (const ResolvedScale& r : ResolvePlan(s, plan)) {
      const std::uint32_t lo = std::max(r.size.width, r.size.height);
      const std::uint32_t sh = std::min(r.size.width, r.size.height);
      EXPECT_LE(lo, plan.max_long_side);
      const double short_factor =
          static_cast<double>(r.target_short) / std::min(s.width, s.height);
      const double long_factor =
          static_cast<double>(plan.max_long_side) / std::max(s.width, s.height);
      if (short_factor < long_factor) EXPECT_EQ(sh, r.target_short);
      EXPECT_GE(r.factor, prev);
      prev = r.factor;
    }
  }
}

TEST(ScaleBoxesTest, Examples) {
  const std::vector<BBox> b = {{1, 2, 3, 4}};
  EXPECT_EQ(ScaleBoxes(b, 1.0), b);
  EXPECT_EQ(ScaleBoxes(b, 2.0), (std::vector<BBox>{{2, 4, 6, 8}}));
  EXPECT_THROW(ScaleBoxes(b, 0.0), InvalidArgument);
}

TEST(ScaleBoxesTest, RoundTrip) {
  CounterRng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.NextUniform(0, 2000), y = rng.NextUniform(0, 2000);
    const std::vector<BBox> b = {{x, y, x + rng.NextUniform(0, 500),
                                  y + rng.NextUniform(0, 500)}};
    const double f = rng.NextUniform(0.1, 4.0);
    const auto back = ScaleBoxes(ScaleBoxes(b, f), 1.0 / f);
    EXPECT_NEAR(back[0].x_min, b[0].x_min, 1e-9);
    EXPECT_NEAR(back[0].y_min, b[0].y_min, 1e-9);
    EXPECT_NEAR(back[0].x_max, b[0].x_max, 1e-9);
    EXPECT_NEAR(back[0].y_max, b[0].y_max, 1e-9);
  }
}

TEST(FuseTest, SingleScaleIsSoftNms) {
  ScaledDetections s;
  s.factor = 1.0;
  s.detections = {{{0, 0, 10, 10}, 1, 0.9, 0}, {{0, 0, 10, 10}, 1, 0.8, 0},
                  {{50, 50, 60, 60}, 1, 0.4, 0}};
  const std::vector<ScaledDetections> scales = {s};
  EXPECT_EQ(FuseMultiscale(scales, SoftNmsConfig{}),
            SoftNmsPerImage(s.detections, SoftNmsConfig{}));
}

TEST(FuseTest, SameObjectAtTwoScales) {
  ScaledDetections a, b;
  a.factor = 0.5;
  a.detections = {{{5, 5, 15, 15}, 1, 0.9, 0}};
  b.factor = 2.0;
  b.detections = {{{20, 20, 60, 60}, 1, 0.8, 0}};
  const std::vector<ScaledDetections> scales = {a, b};
  const auto out = FuseMultiscale(scales, SoftNmsConfig{});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].bbox, (BBox{10, 10, 30, 30}));
  EXPECT_EQ(out[0].score, 0.9);
  EXPECT_NEAR(out[1].score, 0.1082682265892901535, 1e-12);
}

TEST(FuseTest, EmptyAndInvalid) {
  EXPECT_TRUE(FuseMultiscale({}, SoftNmsConfig{}).empty());
  ScaledDetections bad;
  bad.factor = 0.0;
  const std::vector<ScaledDetections> scales = {bad};
  EXPECT_THROW(FuseMultiscale(scales, SoftNmsConfig{}), InvalidArgument);
}

}  // namespace
}  // namespace rld
