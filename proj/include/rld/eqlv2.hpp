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
#ifndef RLD_EQLV2_HPP_
#define RLD_EQLV2_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rld::eqlv2 {

// Gradient-guided equalization loss.
//
// Every category j keeps running sums of the reweighted positive and
// negative gradient magnitudes it has received. Their ratio g_j drives a
// logistic gate f(g) = 1 / (1 + exp(-gamma (g - mu))) which sets
//
//   q_j = 1 + alpha (1 - f(g_j))   (positive gradient weight)
//   r_j = f(g_j)                   (negative gradient weight)
//
// so categories that have seen mostly negatives (tail classes, g near 0) get
// their positives amplified and their negatives silenced.

struct Config {
  double gamma = 12.0;
  double mu = 0.8;
  double alpha = 4.0;
  // Replaces the gate with f == 1. Together with alpha == 0 the loss reduces
  // to plain per-category sigmoid cross-entropy.
  bool unit_gate = false;
};

// Throws rld::InvalidArgument unless gamma > 0, 0 < mu < 1 and alpha >= 0.
void Validate(const Config& cfg);

// Throws rld::InvalidArgument when g is negative or not finite.
double WeightFn(double g, const Config& cfg);

struct Weights {
  double q = 1.0;
  double r = 1.0;
};

Weights PosNegWeights(double g, const Config& cfg);

// Per-category cumulative gradient statistics. g starts at 0 for every
// category, and stays 0 while no negative gradient has been seen.
class GradientAccumulator {
 public:
  explicit GradientAccumulator(std::size_t num_categories);

  std::size_t num_categories() const { return g_.size(); }
  std::uint64_t iteration() const { return t_; }
  std::span<const double> cum_pos() const { return cum_pos_; }
  std::span<const double> cum_neg() const { return cum_neg_; }
  std::span<const double> ratio() const { return g_; }

  // Adds one iteration's reweighted magnitudes, recomputes every ratio and
  // advances the iteration counter. Throws rld::InvalidArgument on size
  // mismatch.
  void Update(std::span<const double> pos, std::span<const double> neg);

 private:
  std::vector<double> cum_pos_;
  std::vector<double> cum_neg_;
  std::vector<double> g_;
  std::uint64_t t_ = 0;
};

struct Reweighted {
  std::vector<double> pos;
  std::vector<double> neg;
};

// pos'_j = q_j pos_j and neg'_j = r_j neg_j with weights taken from the
// accumulator's current ratios.
Reweighted ReweightGradients(std::span<const double> pos_grad,
                             std::span<const double> neg_grad,
                             const GradientAccumulator& acc,
                             const Config& cfg);

// Masked softmax-style loss: -sum_j W_j log(p_j). Throws
// rld::InvalidArgument when some p_j <= 0 has W_j != 0, or on size mismatch.
double EqlV1Loss(std::span<const double> probs, std::span<const double> w);

// Target value for a background sample.
inline constexpr int kBackground = -1;

struct LossAndGrad {
  double loss = 0.0;
  // d loss / d logits, with the per-category weights held constant.
  std::vector<double> grad;
  // Reweighted gradient magnitudes, split by sign of the target. Feed these
  // to GradientAccumulator::Update once per iteration.
  std::vector<double> pos_magnitude;
  std::vector<double> neg_magnitude;
};

// Per-category sigmoid cross-entropy with the positive term of the target
// category scaled by q[target] and each negative term scaled by r[j].
// `target` is a category index or kBackground.
LossAndGrad WeightedSigmoidLossAndGrad(std::span<const double> logits,
                                       int target, std::span<const double> q,
                                       std::span<const double> r);

// As above with q and r drawn from the accumulator's current state.
LossAndGrad SigmoidLossAndGrad(std::span<const double> logits, int target,
                               const GradientAccumulator& acc,
                               const Config& cfg);

// ---------------------------------------------------------------------------
// Long-tailed toy experiment.

struct DemoConfig {
  // Categories per frequency group.
  int categories_per_group = 3;
  int head_samples = 1000;
  int mid_samples = 100;
  int tail_samples = 10;
  int background_samples = 300;
  int test_samples_per_category = 200;
  // Category centers sit on a circle of this radius; each blob is an
  // isotropic Gaussian with the given spread.
  double center_radius = 3.0;
  double spread = 1.0;
  int epochs = 40;
  int batch_size = 64;
  double learning_rate = 0.1;
  Config eql;
};

struct GroupRecall {
  double head = 0.0;
  double mid = 0.0;
  double tail = 0.0;
};

struct DemoReport {
  std::uint64_t seed = 0;
  int num_categories = 0;
  std::vector<std::string> group_of_category;
  std::vector<double> ce_recall;
  std::vector<double> eql_recall;
  GroupRecall ce;
  GroupRecall eql;
  // Final g_j of the EQL-v2 run.
  std::vector<double> final_ratio;
};

// Builds the synthetic long-tailed dataset from `seed`, trains one linear
// classifier with plain sigmoid cross-entropy and one with the equalization
// loss (same initialization, same sample order), and reports per-category
// recall on a balanced test set.
DemoReport RunLongtailDemo(std::uint64_t seed, const DemoConfig& cfg);

// Human-readable report; ends with one `g[j] <value>` line per category.
std::string FormatReport(const DemoReport& report);

}  // namespace rld::eqlv2

#endif  // RLD_EQLV2_HPP_
