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
#include "rld/network_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rld/random.hpp"

namespace rld::sim {
namespace {

double Logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

void Require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

std::vector<double> SeededValues(std::size_t n, double scale,
                                 std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> v(n);
  for (double& e : v) e = scale * rng.NextUniform(-1.0, 1.0);
  return v;
}

}  // namespace

FeatureMap::FeatureMap(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  Require(height >= 1 && width >= 1 && channels >= 1,
          "feature map dimensions must be positive");
  values_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

double FeatureMap::clamped(int y, int x, int c) const {
  return at(std::clamp(y, 0, height_ - 1), std::clamp(x, 0, width_ - 1), c);
}

FeatureMap Axpby(double a, const FeatureMap& x, double b,
                 const FeatureMap& y) {
  Require(x.SameShape(y), "Axpby: shape mismatch");
  FeatureMap out(x.height(), x.width(), x.channels());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = a * x.values()[i] + b * y.values()[i];
  }
  return out;
}

SacParams SeededSacParams(int in_channels, int out_channels,
                          std::uint64_t seed) {
  SacParams p;
  p.in_channels = in_channels;
  p.out_channels = out_channels;
  const double fan_in = 9.0 * in_channels;
  p.kernel = SeededValues(static_cast<std::size_t>(out_channels) *
                              in_channels * 9,
                          1.0 / std::sqrt(fan_in), DeriveSeed(seed, 1));
  p.switch_weight =
      SeededValues(static_cast<std::size_t>(in_channels), 1.0,
                   DeriveSeed(seed, 2));
  p.switch_bias = SeededValues(1, 0.5, DeriveSeed(seed, 3))[0];
  return p;
}

FeatureMap DilatedConv(const FeatureMap& x, const SacParams& p, int dilation) {
  Require(x.channels() == p.in_channels, "SAC: input channel mismatch");
  Require(p.kernel.size() ==
              static_cast<std::size_t>(p.out_channels) * p.in_channels * 9,
          "SAC: kernel size mismatch");
  FeatureMap out(x.height(), x.width(), p.out_channels);
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      for (int o = 0; o < p.out_channels; ++o) {
        double acc = 0.0;
        for (int i = 0; i < p.in_channels; ++i) {
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              acc += p.k(o, i, ky, kx) *
                     x.clamped(y + (ky - 1) * dilation,
                               xx + (kx - 1) * dilation, i);
            }
          }
        }
        out.at(y, xx, o) = acc;
      }
    }
  }
  return out;
}

FeatureMap SwitchMap(const FeatureMap& x, const SacParams& p) {
  Require(p.switch_weight.size() == static_cast<std::size_t>(x.channels()),
          "SAC: switch weight size mismatch");
  FeatureMap s(x.height(), x.width(), 1);
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      double v = p.switch_bias;
      for (int i = 0; i < x.channels(); ++i) {
        double avg = 0.0;
        for (int dy = -2; dy <= 2; ++dy) {
          for (int dx = -2; dx <= 2; ++dx) avg += x.clamped(y + dy, xx + dx, i);
        }
        v += p.switch_weight[static_cast<std::size_t>(i)] * (avg / 25.0);
      }
      s.at(y, xx, 0) = Logistic(v);
    }
  }
  return s;
}

FeatureMap SacApplyWithSwitch(const FeatureMap& x, const SacParams& p,
                              const FeatureMap& switch_map) {
  Require(switch_map.height() == x.height() &&
              switch_map.width() == x.width() && switch_map.channels() == 1,
          "SAC: switch map shape mismatch");
  const FeatureMap narrow = DilatedConv(x, p, 1);
  const FeatureMap wide = DilatedConv(x, p, 3);
  FeatureMap out(x.height(), x.width(), p.out_channels);
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      const double s = switch_map.at(y, xx, 0);
      for (int o = 0; o < p.out_channels; ++o) {
        out.at(y, xx, o) =
            s * narrow.at(y, xx, o) + (1.0 - s) * wide.at(y, xx, o);
      }
    }
  }
  return out;
}

FeatureMap SacApply(const FeatureMap& x, const SacParams& p) {
  return SacApplyWithSwitch(x, p, SwitchMap(x, p));
}

SeParams SeededSeParams(int channels, std::uint64_t seed) {
  SeParams p;
  p.channels = channels;
  p.weight = SeededValues(static_cast<std::size_t>(channels) * channels,
                          1.0 / std::sqrt(static_cast<double>(channels)),
                          DeriveSeed(seed, 1));
  p.bias = SeededValues(static_cast<std::size_t>(channels), 0.5,
                        DeriveSeed(seed, 2));
  return p;
}

FeatureMap SeFuse(const FeatureMap& x, const SeParams& p) {
  const int c = x.channels();
  Require(p.channels == c &&
              p.weight.size() == static_cast<std::size_t>(c) * c &&
              p.bias.size() == static_cast<std::size_t>(c),
          "SE: parameter size mismatch");
  std::vector<double> mean(static_cast<std::size_t>(c), 0.0);
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      for (int k = 0; k < c; ++k) mean[k] += x.at(y, xx, k);
    }
  }
  const double hw = static_cast<double>(x.height()) * x.width();
  for (double& m : mean) m /= hw;
  std::vector<double> scale(static_cast<std::size_t>(c));
  for (int o = 0; o < c; ++o) {
    double v = p.bias[o];
    for (int k = 0; k < c; ++k) {
      v += p.weight[static_cast<std::size_t>(o) * c + k] * mean[k];
    }
    scale[o] = Logistic(v);
  }
  FeatureMap out = x;
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      for (int k = 0; k < c; ++k) out.at(y, xx, k) *= scale[k];
    }
  }
  return out;
}

PointwiseParams SeededPointwise(int in_channels, int out_channels,
                                double scale, std::uint64_t seed) {
  PointwiseParams p;
  p.in_channels = in_channels;
  p.out_channels = out_channels;
  p.weight = SeededValues(static_cast<std::size_t>(out_channels) * in_channels,
                          scale / std::sqrt(static_cast<double>(in_channels)),
                          DeriveSeed(seed, 1));
  p.bias = SeededValues(static_cast<std::size_t>(out_channels), 0.1 * scale,
                        DeriveSeed(seed, 2));
  return p;
}

FeatureMap Pointwise(const FeatureMap& x, const PointwiseParams& p) {
  Require(x.channels() == p.in_channels, "pointwise: input channel mismatch");
  FeatureMap out(x.height(), x.width(), p.out_channels);
  for (int y = 0; y < x.height(); ++y) {
    for (int xx = 0; xx < x.width(); ++xx) {
      for (int o = 0; o < p.out_channels; ++o) {
        double v = p.bias[o];
        for (int i = 0; i < p.in_channels; ++i) {
          v += p.weight[static_cast<std::size_t>(o) * p.in_channels + i] *
               x.at(y, xx, i);
        }
        out.at(y, xx, o) = v;
      }
    }
  }
  return out;
}

FeatureMap AvgPool2(const FeatureMap& x) {
  Require(x.height() % 2 == 0 && x.width() % 2 == 0,
          "pooling needs even spatial dimensions");
  FeatureMap out(x.height() / 2, x.width() / 2, x.channels());
  for (int y = 0; y < out.height(); ++y) {
    for (int xx = 0; xx < out.width(); ++xx) {
      for (int c = 0; c < x.channels(); ++c) {
        out.at(y, xx, c) =
            0.25 * (x.at(2 * y, 2 * xx, c) + x.at(2 * y, 2 * xx + 1, c) +
                    x.at(2 * y + 1, 2 * xx, c) +
                    x.at(2 * y + 1, 2 * xx + 1, c));
      }
    }
  }
  return out;
}

FeatureMap Upsample2(const FeatureMap& x) {
  FeatureMap out(x.height() * 2, x.width() * 2, x.channels());
  for (int y = 0; y < out.height(); ++y) {
    for (int xx = 0; xx < out.width(); ++xx) {
      for (int c = 0; c < x.channels(); ++c) {
        out.at(y, xx, c) = x.at(y / 2, xx / 2, c);
      }
    }
  }
  return out;
}

StageSpec SeededStageSpec(int input_channels, int channels, int num_stages,
                          int unrolls, std::uint64_t seed,
                          double feedback_scale) {
  Require(input_channels >= 1 && channels >= 1 && num_stages >= 1,
          "stage spec dimensions must be positive");
  Require(unrolls >= 1, "unroll count must be at least 1");
  StageSpec spec;
  spec.input_channels = input_channels;
  spec.channels = channels;
  spec.unrolls = unrolls;
  for (int i = 0; i < num_stages; ++i) {
    const std::uint64_t s = DeriveSeed(seed, static_cast<std::uint64_t>(i));
    const int in = i == 0 ? input_channels : channels;
    StageParams st;
    st.mix = SeededPointwise(in, channels, 1.0, DeriveSeed(s, 10));
    st.sac = SeededSacParams(channels, channels, DeriveSeed(s, 11));
    st.feedback =
        SeededPointwise(channels, channels, feedback_scale, DeriveSeed(s, 12));
    st.lateral = SeededPointwise(channels, channels, 1.0, DeriveSeed(s, 13));
    st.se = SeededSeParams(channels, DeriveSeed(s, 14));
    spec.stages.push_back(std::move(st));
  }
  return spec;
}

std::vector<FeatureMap> RfpForward(const FeatureMap& x0,
                                   const StageSpec& spec) {
  const int num_stages = static_cast<int>(spec.stages.size());
  Require(num_stages >= 1, "RFP needs at least one stage");
  Require(spec.unrolls >= 1, "unroll count must be at least 1");
  Require(x0.channels() == spec.input_channels,
          "RFP: input channel count does not match the stage spec");
  const int factor = 1 << num_stages;
  Require(x0.height() % factor == 0 && x0.width() % factor == 0,
          "RFP: input spatial dims must be divisible by 2^stages");

  std::vector<FeatureMap> f;
  std::vector<FeatureMap> x(static_cast<std::size_t>(num_stages));
  for (int pass = 0; pass < spec.unrolls; ++pass) {
    const FeatureMap* prev = &x0;
    for (int i = 0; i < num_stages; ++i) {
      const StageParams& st = spec.stages[static_cast<std::size_t>(i)];
      FeatureMap m = Pointwise(AvgPool2(*prev), st.mix);
      if (pass > 0) {
        m = Axpby(1.0, m, 1.0,
                  Pointwise(f[static_cast<std::size_t>(i)], st.feedback));
      }
      x[static_cast<std::size_t>(i)] = SacApply(m, st.sac);
      prev = &x[static_cast<std::size_t>(i)];
    }
    std::vector<FeatureMap> next(static_cast<std::size_t>(num_stages));
    for (int i = num_stages - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      const StageParams& st = spec.stages[ui];
      FeatureMap lat = Pointwise(x[ui], st.lateral);
      if (i + 1 < num_stages) lat = Axpby(1.0, lat, 1.0, Upsample2(next[ui + 1]));
      next[ui] = SeFuse(lat, st.se);
    }
    f = std::move(next);
  }
  return f;
}

void Validate(const CascadeSpec& spec) {
  for (std::size_t k = 0; k < spec.heads.size(); ++k) {
    const CascadeHead& h = spec.heads[k];
    Require(h.delta.sw > 0.0 && h.delta.sh > 0.0,
            "cascade: scale factors must be positive");
    Require(k == 0 || h.iou_threshold > spec.heads[k - 1].iou_threshold,
            "cascade: IoU thresholds must be strictly increasing");
  }
}

CascadeSpec SeededCascadeSpec(std::uint64_t seed) {
  CascadeSpec spec;
  CounterRng rng(seed);
  for (double t : {0.5, 0.6, 0.7}) {
    CascadeHead h;
    h.delta.dx = rng.NextUniform(-0.05, 0.05);
    h.delta.dy = rng.NextUniform(-0.05, 0.05);
    h.delta.sw = rng.NextUniform(0.9, 1.1);
    h.delta.sh = rng.NextUniform(0.9, 1.1);
    h.iou_threshold = t;
    spec.heads.push_back(h);
  }
  return spec;
}

BBox ApplyDelta(const BBox& b, const BoxDelta& d) {
  const double w = b.width();
  const double h = b.height();
  const double cx = 0.5 * (b.x_min + b.x_max) + d.dx * w;
  const double cy = 0.5 * (b.y_min + b.y_max) + d.dy * h;
  const double hw = 0.5 * d.sw * w;
  const double hh = 0.5 * d.sh * h;
  return BBox{cx - hw, cy - hh, cx + hw, cy + hh};
}

std::vector<std::vector<BBox>> CascadeRefine(const std::vector<BBox>& proposals,
                                             const CascadeSpec& spec) {
  Validate(spec);
  for (const BBox& b : proposals) {
    Require(IsValid(b), "cascade: invalid proposal box");
  }
  std::vector<std::vector<BBox>> stages;
  const std::vector<BBox>* prev = &proposals;
  for (const CascadeHead& head : spec.heads) {
    std::vector<BBox> cur;
    cur.reserve(prev->size());
    for (const BBox& b : *prev) cur.push_back(ApplyDelta(b, head.delta));
    stages.push_back(std::move(cur));
    prev = &stages.back();
  }
  return stages;
}

std::uint64_t Checksum(const FeatureMap& m) {
  // FNV-1a over little-endian value bits, shape first.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  feed(static_cast<std::uint64_t>(m.height()));
  feed(static_cast<std::uint64_t>(m.width()));
  feed(static_cast<std::uint64_t>(m.channels()));
  for (double v : m.values()) feed(std::bit_cast<std::uint64_t>(v));
  return h;
}

std::string RunSimulation(std::uint64_t seed, const SimulationConfig& cfg) {
  Require(cfg.input_size >= 1 && cfg.input_channels >= 1 &&
              cfg.channels >= 1 && cfg.stages >= 1 && cfg.unrolls >= 1,
          "simulation configuration values must be positive");
  FeatureMap x0(cfg.input_size, cfg.input_size, cfg.input_channels);
  CounterRng rng(DeriveSeed(seed, 100));
  for (double& v : x0.values()) v = rng.NextUniform();

  const StageSpec spec = SeededStageSpec(cfg.input_channels, cfg.channels,
                                         cfg.stages, cfg.unrolls,
                                         DeriveSeed(seed, 200));
  const std::vector<FeatureMap> f = RfpForward(x0, spec);

  std::ostringstream os;
  char line[200];
  std::snprintf(line, sizeof(line),
                "input %dx%dx%d stages %d unrolls %d seed %llu\n",
                x0.height(), x0.width(), x0.channels(), cfg.stages,
                cfg.unrolls, static_cast<unsigned long long>(seed));
  os << line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double sum = 0.0;
    for (double v : f[i].values()) sum += v;
    std::snprintf(line, sizeof(line),
                  "stage %zu shape %dx%dx%d sum %.6f checksum %016llx\n", i + 1,
                  f[i].height(), f[i].width(), f[i].channels(), sum,
                  static_cast<unsigned long long>(Checksum(f[i])));
    os << line;
  }

  const CascadeSpec cascade = SeededCascadeSpec(DeriveSeed(seed, 300));
  const double s = cfg.input_size;
  const std::vector<BBox> proposals = {{0.25 * s, 0.25 * s, 0.75 * s, 0.75 * s}};
  const auto refined = CascadeRefine(proposals, cascade);
  std::snprintf(line, sizeof(line), "cascade B0 [%.6f, %.6f, %.6f, %.6f]\n",
                proposals[0].x_min, proposals[0].y_min, proposals[0].x_max,
                proposals[0].y_max);
  os << line;
  for (std::size_t k = 0; k < refined.size(); ++k) {
    const BBox& b = refined[k][0];
    std::snprintf(line, sizeof(line),
                  "cascade B%zu iou_threshold %.2f [%.6f, %.6f, %.6f, %.6f]\n",
                  k + 1, cascade.heads[k].iou_threshold, b.x_min, b.y_min,
                  b.x_max, b.y_max);
    os << line;
  }
  return os.str();
}

}  // namespace rld::sim
