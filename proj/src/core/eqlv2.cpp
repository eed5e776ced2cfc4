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
#include "rld/eqlv2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rld/geometry.hpp"
#include "rld/random.hpp"

namespace rld::eqlv2 {
namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckSameSize(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": size mismatch");
}

struct Sample {
  double x = 0.0;
  double y = 0.0;
  int label = kBackground;
};

struct LinearHead {
  // Row-major C x 2 weights.
  std::vector<double> w;
  std::vector<double> b;

  void Logits(const Sample& s, std::vector<double>* out) const {
    const std::size_t c = b.size();
    out->resize(c);
    for (std::size_t j = 0; j < c; ++j) {
      (*out)[j] = w[2 * j] * s.x + w[2 * j + 1] * s.y + b[j];
    }
  }

  int Predict(const Sample& s) const {
    std::vector<double> z;
    Logits(s, &z);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
  }
};

std::vector<Sample> MakeBlobs(CounterRng& rng, int label, int count,
                              double cx, double cy, double spread) {
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double dx = rng.NextGaussian() * spread;
    const double dy = rng.NextGaussian() * spread;
    out.push_back({cx + dx, cy + dy, label});
  }
  return out;
}

int GroupSamples(const DemoConfig& cfg, int group) {
  switch (group) {
    case 0:
      return cfg.head_samples;
    case 1:
      return cfg.mid_samples;
    default:
      return cfg.tail_samples;
  }
}

const char* GroupName(int group) {
  switch (group) {
    case 0:
      return "head";
    case 1:
      return "mid";
    default:
      return "tail";
  }
}

// Trains a linear head; `acc` is null for the plain cross-entropy baseline.
LinearHead Train(const std::vector<Sample>& train, const LinearHead& init,
                 const DemoConfig& cfg, std::uint64_t order_seed,
                 GradientAccumulator* acc) {
  LinearHead head = init;
  const std::size_t c = head.b.size();
  const std::vector<double> unit(c, 1.0);
  std::vector<double> q(c, 1.0);
  std::vector<double> r(c, 1.0);
  std::vector<double> z;
  std::vector<double> gw(2 * c);
  std::vector<double> gb(c);
  std::vector<double> pos_sum(c);
  std::vector<double> neg_sum(c);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng shuffle_rng(order_seed);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the counter generator; identical for both runs.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.NextBelow(i)]);
    }
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      if (acc != nullptr) {
        for (std::size_t j = 0; j < c; ++j) {
          const Weights wts = PosNegWeights(acc->ratio()[j], cfg.eql);
          q[j] = wts.q;
          r[j] = wts.r;
        }
      }
      std::fill(gw.begin(), gw.end(), 0.0);
      std::fill(gb.begin(), gb.end(), 0.0);
      std::fill(pos_sum.begin(), pos_sum.end(), 0.0);
      std::fill(neg_sum.begin(), neg_sum.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const Sample& s = train[order[k]];
        head.Logits(s, &z);
        const LossAndGrad lg = acc != nullptr
                                   ? WeightedSigmoidLossAndGrad(z, s.label, q, r)
                                   : WeightedSigmoidLossAndGrad(z, s.label,
                                                                unit, unit);
        for (std::size_t j = 0; j < c; ++j) {
          gw[2 * j] += lg.grad[j] * s.x;
          gw[2 * j + 1] += lg.grad[j] * s.y;
          gb[j] += lg.grad[j];
          pos_sum[j] += lg.pos_magnitude[j];
          neg_sum[j] += lg.neg_magnitude[j];
        }
      }
      const double scale =
          cfg.learning_rate / static_cast<double>(end - start);
      for (std::size_t j = 0; j < 2 * c; ++j) head.w[j] -= scale * gw[j];
      for (std::size_t j = 0; j < c; ++j) head.b[j] -= scale * gb[j];
      if (acc != nullptr) acc->Update(pos_sum, neg_sum);
    }
  }
  return head;
}

std::vector<double> PerCategoryRecall(const LinearHead& head,
                                      const std::vector<Sample>& test,
                                      std::size_t num_categories) {
  std::vector<double> hits(num_categories, 0.0);
  std::vector<double> totals(num_categories, 0.0);
  for (const Sample& s : test) {
    const auto label = static_cast<std::size_t>(s.label);
    totals[label] += 1.0;
    if (head.Predict(s) == s.label) hits[label] += 1.0;
  }
  for (std::size_t j = 0; j < num_categories; ++j) {
    hits[j] = totals[j] > 0.0 ? hits[j] / totals[j] : 0.0;
  }
  return hits;
}

GroupRecall Summarize(const std::vector<double>& recall, int per_group) {
  double sums[3] = {0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < recall.size(); ++j) {
    sums[j / static_cast<std::size_t>(per_group)] += recall[j];
  }
  return {sums[0] / per_group, sums[1] / per_group, sums[2] / per_group};
}

}  // namespace

void Validate(const Config& cfg) {
  if (!(cfg.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) {
    throw InvalidArgument("mu must lie in (0, 1)");
  }
  if (!(cfg.alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
}

double WeightFn(double g, const Config& cfg) {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw InvalidArgument("gradient ratio must be finite and non-negative");
  }
  if (cfg.unit_gate) return 1.0;
  return 1.0 / (1.0 + std::exp(-cfg.gamma * (g - cfg.mu)));
}

Weights PosNegWeights(double g, const Config& cfg) {
  const double f = WeightFn(g, cfg);
  return {1.0 + cfg.alpha * (1.0 - f), f};
}

GradientAccumulator::GradientAccumulator(std::size_t num_categories)
    : cum_pos_(num_categories, 0.0),
      cum_neg_(num_categories, 0.0),
      g_(num_categories, 0.0) {}

void GradientAccumulator::Update(std::span<const double> pos,
                                 std::span<const double> neg) {
  CheckSameSize(pos.size(), g_.size(), "accumulator positive update");
  CheckSameSize(neg.size(), g_.size(), "accumulator negative update");
  for (std::size_t j = 0; j < g_.size(); ++j) {
    cum_pos_[j] += std::abs(pos[j]);
    cum_neg_[j] += std::abs(neg[j]);
    g_[j] = cum_neg_[j] > 0.0 ? cum_pos_[j] / cum_neg_[j] : 0.0;
  }
  ++t_;
}

Reweighted ReweightGradients(std::span<const double> pos_grad,
                             std::span<const double> neg_grad,
                             const GradientAccumulator& acc,
                             const Config& cfg) {
  CheckSameSize(pos_grad.size(), acc.num_categories(), "positive gradients");
  CheckSameSize(neg_grad.size(), acc.num_categories(), "negative gradients");
  Reweighted out;
  out.pos.resize(pos_grad.size());
  out.neg.resize(neg_grad.size());
  for (std::size_t j = 0; j < pos_grad.size(); ++j) {
    const Weights w = PosNegWeights(acc.ratio()[j], cfg);
    out.pos[j] = w.q * pos_grad[j];
    out.neg[j] = w.r * neg_grad[j];
  }
  return out;
}

double EqlV1Loss(std::span<const double> probs, std::span<const double> w) {
  CheckSameSize(probs.size(), w.size(), "EQL loss");
  double loss = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (w[j] == 0.0) continue;
    if (!(probs[j] > 0.0)) {
      throw InvalidArgument("probability of category " + std::to_string(j) +
                            " must be positive");
    }
    loss -= w[j] * std::log(probs[j]);
  }
  return loss;
}

LossAndGrad WeightedSigmoidLossAndGrad(std::span<const double> logits,
                                       int target, std::span<const double> q,
                                       std::span<const double> r) {
  const std::size_t c = logits.size();
  CheckSameSize(q.size(), c, "positive weights");
  CheckSameSize(r.size(), c, "negative weights");
  if (target != kBackground &&
      (target < 0 || static_cast<std::size_t>(target) >= c)) {
    throw InvalidArgument("target category out of range");
  }
  LossAndGrad out;
  out.grad.assign(c, 0.0);
  out.pos_magnitude.assign(c, 0.0);
  out.neg_magnitude.assign(c, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    const double z = logits[j];
    const double p = Sigmoid(z);
    if (static_cast<int>(j) == target) {
      // -log(sigmoid(z)); gradient p - 1.
      out.loss += q[j] * Softplus(-z);
      out.grad[j] = q[j] * (p - 1.0);
      out.pos_magnitude[j] = std::abs(out.grad[j]);
    } else {
      // -log(1 - sigmoid(z)); gradient p.
      out.loss += r[j] * Softplus(z);
      out.grad[j] = r[j] * p;
      out.neg_magnitude[j] = std::abs(out.grad[j]);
    }
  }
  return out;
}

LossAndGrad SigmoidLossAndGrad(std::span<const double> logits, int target,
                               const GradientAccumulator& acc,
                               const Config& cfg) {
  CheckSameSize(logits.size(), acc.num_categories(), "logits");
  std::vector<double> q(logits.size());
  std::vector<double> r(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    const Weights w = PosNegWeights(acc.ratio()[j], cfg);
    q[j] = w.q;
    r[j] = w.r;
  }
  return WeightedSigmoidLossAndGrad(logits, target, q, r);
}

DemoReport RunLongtailDemo(std::uint64_t seed, const DemoConfig& cfg) {
  Validate(cfg.eql);
  if (cfg.categories_per_group < 1 || cfg.head_samples < 1 ||
      cfg.mid_samples < 1 || cfg.tail_samples < 1 || cfg.epochs < 1 ||
      cfg.batch_size < 1 || cfg.background_samples < 0 ||
      cfg.test_samples_per_category < 1 || !(cfg.learning_rate > 0.0) ||
      !(cfg.spread > 0.0)) {
    throw InvalidArgument("invalid long-tail demo configuration");
  }
  const int c = 3 * cfg.categories_per_group;

  DemoReport report;
  report.seed = seed;
  report.num_categories = c;

  CounterRng train_rng(DeriveSeed(seed, 1));
  CounterRng test_rng(DeriveSeed(seed, 2));
  std::vector<Sample> train;
  std::vector<Sample> test;
  for (int j = 0; j < c; ++j) {
    const int group = j / cfg.categories_per_group;
    report.group_of_category.emplace_back(GroupName(group));
    const double angle = 2.0 * std::numbers::pi * j / c;
    const double cx = cfg.center_radius * std::cos(angle);
    const double cy = cfg.center_radius * std::sin(angle);
    auto tr = MakeBlobs(train_rng, j, GroupSamples(cfg, group), cx, cy,
                        cfg.spread);
    auto te = MakeBlobs(test_rng, j, cfg.test_samples_per_category, cx, cy,
                        cfg.spread);
    train.insert(train.end(), tr.begin(), tr.end());
    test.insert(test.end(), te.begin(), te.end());
  }
  // Background proposals cluster around the origin.
  auto bg = MakeBlobs(train_rng, kBackground, cfg.background_samples, 0.0,
                      0.0, cfg.spread);
  train.insert(train.end(), bg.begin(), bg.end());

  LinearHead init;
  CounterRng init_rng(DeriveSeed(seed, 3));
  for (int j = 0; j < 2 * c; ++j) init.w.push_back(0.01 * init_rng.NextGaussian());
  init.b.assign(static_cast<std::size_t>(c), 0.0);

  const std::uint64_t order_seed = DeriveSeed(seed, 4);
  const LinearHead ce_head = Train(train, init, cfg, order_seed, nullptr);
  GradientAccumulator acc(static_cast<std::size_t>(c));
  const LinearHead eql_head = Train(train, init, cfg, order_seed, &acc);

  report.ce_recall = PerCategoryRecall(ce_head, test, c);
  report.eql_recall = PerCategoryRecall(eql_head, test, c);
  report.ce = Summarize(report.ce_recall, cfg.categories_per_group);
  report.eql = Summarize(report.eql_recall, cfg.categories_per_group);
  report.final_ratio.assign(acc.ratio().begin(), acc.ratio().end());
  return report;
}

std::string FormatReport(const DemoReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "seed %llu categories %d\n",
                static_cast<unsigned long long>(report.seed),
                report.num_categories);
  os << line;
  os << "group  cross_entropy  eql_v2\n";
  const auto row = [&](const char* name, double a, double b) {
    std::snprintf(line, sizeof(line), "%-5s  %.6f       %.6f\n", name, a, b);
    os << line;
  };
  row("head", report.ce.head, report.eql.head);
  row("mid", report.ce.mid, report.eql.mid);
  row("tail", report.ce.tail, report.eql.tail);
  std::snprintf(line, sizeof(line),
                "tail_recall cross_entropy %.6f eql_v2 %.6f\n",
                report.ce.tail, report.eql.tail);
  os << line;
  for (std::size_t j = 0; j < report.final_ratio.size(); ++j) {
    std::snprintf(line, sizeof(line), "g[%zu] %.6f\n", j,
                  report.final_ratio[j]);
    os << line;
  }
  return os.str();
}

}  // namespace rld::eqlv2
