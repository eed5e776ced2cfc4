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
#include "rld/network_sim.hpp"
#include "rld/random.hpp"

namespace rld::sim {
namespace {

FeatureMap RandomMap(int h, int w, int c, std::uint64_t seed) {
  CounterRng rng(seed);
  FeatureMap m(h, w, c);
  for (double& v : m.values()) v = rng.NextUniform(-1.0, 1.0);
  return m;
}

void ZeroFeedback(StageSpec& spec) {
  for (auto& st : spec.stages) {
    std::fill(st.feedback.weight.begin(), st.feedback.weight.end(), 0.0);
    std::fill(st.feedback.bias.begin(), st.feedback.bias.end(), 0.0);
  }
}

TEST(RfpTest, StageShapesHalve) {
  const StageSpec spec = SeededStageSpec(3, 4, 3, 2, 7);
  const auto f = RfpForward(RandomMap(32, 32, 3, 1), spec);
  ASSERT_EQ(f.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(f[i].height(), 16 >> i);
    EXPECT_EQ(f[i].width(), 16 >> i);
    EXPECT_EQ(f[i].channels(), 4);
  }
}

TEST(RfpTest, ZeroFeedbackIsUnrollInvariant) {
  StageSpec one = SeededStageSpec(3, 4, 3, 1, 8);
  ZeroFeedback(one);
  StageSpec two = one;
  two.unrolls = 2;
  StageSpec three = one;
  three.unrolls = 3;
  const FeatureMap x = RandomMap(32, 32, 3, 2);
  const auto a = RfpForward(x, one);
  EXPECT_EQ(a, RfpForward(x, two));
  EXPECT_EQ(a, RfpForward(x, three));
}

TEST(RfpTest, FeedbackChangesOutput) {
  StageSpec one = SeededStageSpec(3, 4, 3, 1, 9);
  StageSpec two = one;
  two.unrolls = 2;
  const FeatureMap x = RandomMap(32, 32, 3, 3);
  EXPECT_NE(RfpForward(x, one), RfpForward(x, two));
}

TEST(RfpTest, RejectsShapeMismatch) {
  const StageSpec spec = SeededStageSpec(3, 4, 3, 2, 7);
  EXPECT_THROW(RfpForward(RandomMap(30, 32, 3, 1), spec), InvalidArgument);
  EXPECT_THROW(RfpForward(RandomMap(32, 32, 2, 1), spec), InvalidArgument);
}

TEST(RfpTest, Deterministic) {
  const FeatureMap x = RandomMap(16, 16, 3, 4);
  const auto a = RfpForward(x, SeededStageSpec(3, 4, 2, 2, 10));
  const auto b = RfpForward(x, SeededStageSpec(3, 4, 2, 2, 10));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(Checksum(a[i]), Checksum(b[i]));
  }
}

TEST(SacTest, SwitchReductions) {
  const SacParams p = SeededSacParams(3, 4, 11);
  const FeatureMap x = RandomMap(9, 7, 3, 5);
  EXPECT_EQ(SacApplyWithSwitch(x, p, FeatureMap(9, 7, 1, 1.0)),
            DilatedConv(x, p, 1));
  EXPECT_EQ(SacApplyWithSwitch(x, p, FeatureMap(9, 7, 1, 0.0)),
            DilatedConv(x, p, 3));
}

TEST(SacTest, FrozenSwitchIsLinear) {
  const SacParams p = SeededSacParams(3, 3, 12);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const FeatureMap x = RandomMap(8, 8, 3, 100 + s);
    const FeatureMap y = RandomMap(8, 8, 3, 200 + s);
    const FeatureMap sw = SwitchMap(RandomMap(8, 8, 3, 300 + s), p);
    const double a = 0.7 + 0.1 * s, b = -1.3;
    const FeatureMap lhs = SacApplyWithSwitch(Axpby(a, x, b, y), p, sw);
    const FeatureMap rhs = Axpby(a, SacApplyWithSwitch(x, p, sw), b,
                                 SacApplyWithSwitch(y, p, sw));
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      EXPECT_NEAR(lhs.values()[i], rhs.values()[i], 1e-9);
    }
  }
}

TEST(SacTest, ConstantInputWithAveragingKernel) {
  SacParams p = SeededSacParams(2, 2, 13);
  std::fill(p.kernel.begin(), p.kernel.end(), 1.0 / 18.0);
  const FeatureMap x(6, 6, 2, 3.0);
  const FeatureMap y = SacApply(x, p);
  ASSERT_TRUE(y.SameShape(FeatureMap(6, 6, 2)));
  for (double v : y.values()) EXPECT_NEAR(v, 3.0, 1e-12);
}

TEST(SacTest, SwitchInUnitInterval) {
  const SacParams p = SeededSacParams(3, 3, 14);
  const FeatureMap s = SwitchMap(RandomMap(8, 8, 3, 6), p);
  for (double v : s.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(SeTest, ZeroAffineHalves) {
  SeParams p = SeededSeParams(3, 15);
  std::fill(p.weight.begin(), p.weight.end(), 0.0);
  std::fill(p.bias.begin(), p.bias.end(), 0.0);
  const FeatureMap x = RandomMap(4, 5, 3, 7);
  const FeatureMap y = SeFuse(x, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(y.values()[i], 0.5 * x.values()[i]);
  }
}

TEST(SeTest, ZeroInputZeroOutput) {
  const FeatureMap y = SeFuse(FeatureMap(4, 4, 3), SeededSeParams(3, 16));
  for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(SeTest, PreservesZeroPositions) {
  FeatureMap x = RandomMap(4, 4, 3, 8);
  x.at(1, 2, 0) = 0.0;
  x.at(3, 3, 2) = 0.0;
  const FeatureMap y = SeFuse(x, SeededSeParams(3, 17));
  EXPECT_EQ(y.at(1, 2, 0), 0.0);
  EXPECT_EQ(y.at(3, 3, 2), 0.0);
}

TEST(SeTest, ChannelPermutationEquivariance) {
  const int c = 3;
  const int perm[c] = {2, 0, 1};
  const SeParams p = SeededSeParams(c, 18);
  SeParams q = p;
  for (int o = 0; o < c; ++o) {
    q.bias[perm[o]] = p.bias[o];
    for (int k = 0; k < c; ++k) q.weight[perm[o] * c + perm[k]] = p.weight[o * c + k];
  }
  const FeatureMap x = RandomMap(4, 4, c, 9);
  FeatureMap xp(4, 4, c);
  for (int y = 0; y < 4; ++y) {
    for (int xx = 0; xx < 4; ++xx) {
      for (int k = 0; k < c; ++k) xp.at(y, xx, perm[k]) = x.at(y, xx, k);
    }
  }
  const FeatureMap a = SeFuse(x, p);
  const FeatureMap b = SeFuse(xp, q);
  for (int y = 0; y < 4; ++y) {
    for (int xx = 0; xx < 4; ++xx) {
      for (int k = 0; k < c; ++k) {
        EXPECT_NEAR(b.at(y, xx, perm[k]), a.at(y, xx, k), 1e-12);
      }
    }
  }
}

TEST(CascadeTest, IdentityDeltas) {
  CascadeSpec spec;
  spec.heads = {{{}, 0.5}, {{}, 0.6}, {{}, 0.7}};
  const std::vector<BBox> b0 = {{1, 2, 5, 9}, {0, 0, 3, 3}};
  const auto stages = CascadeRefine(b0, spec);
  ASSERT_EQ(stages.size(), 3u);
  for (const auto& s : stages) EXPECT_EQ(s, b0);
}

TEST(CascadeTest, ShrinkTwice) {
  CascadeSpec spec;
  spec.heads = {{{0, 0, 0.9, 0.9}, 0.5}, {{0, 0, 0.9, 0.9}, 0.6}};
  const auto stages = CascadeRefine({{0, 0, 10, 20}}, spec);
  ASSERT_EQ(stages.size(), 2u);
  EXPECT_NEAR(stages[1][0].width(), 8.1, 1e-12);
  EXPECT_NEAR(stages[1][0].height(), 16.2, 1e-12);
  EXPECT_NEAR(stages[1][0].x_min + stages[1][0].x_max, 10.0, 1e-12);
}

TEST(CascadeTest, StructureAndValidation) {
  const CascadeSpec spec = SeededCascadeSpec(19);
  ASSERT_EQ(spec.heads.size(), 3u);
  EXPECT_EQ(spec.heads[0].iou_threshold, 0.5);
  EXPECT_EQ(spec.heads[1].iou_threshold, 0.6);
  EXPECT_EQ(spec.heads[2].iou_threshold, 0.7);
  const auto stages = CascadeRefine({{0, 0, 4, 4}, {2, 2, 9, 9}}, spec);
  ASSERT_EQ(stages.size(), 3u);
  for (const auto& s : stages) EXPECT_EQ(s.size(), 2u);

  CascadeSpec bad;
  bad.heads = {{{}, 0.6}, {{}, 0.6}};
  EXPECT_THROW(Validate(bad), InvalidArgument);
}

TEST(SimulationTest, Deterministic) {
  const SimulationConfig cfg;
  EXPECT_EQ(RunSimulation(4, cfg), RunSimulation(4, cfg));
  EXPECT_NE(RunSimulation(4, cfg), RunSimulation(5, cfg));
}

TEST(OpsTest, PoolAndUpsample) {
  const FeatureMap x = RandomMap(4, 6, 2, 10);
  const FeatureMap p = AvgPool2(x);
  EXPECT_EQ(p.height(), 2);
  EXPECT_EQ(p.width(), 3);
  EXPECT_NEAR(p.at(0, 0, 1),
              (x.at(0, 0, 1) + x.at(0, 1, 1) + x.at(1, 0, 1) + x.at(1, 1, 1)) / 4,
              1e-15);
  const FeatureMap u = Upsample2(p);
  EXPECT_EQ(u.height(), 4);
  EXPECT_EQ(u.at(3, 5, 0), p.at(1, 2, 0));
}

}  // namespace
}  // namespace rld::sim
