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
#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "rld/augment.hpp"
#include "rld/image_io.hpp"
#include "rld/random.hpp"

namespace rld::testing {

double ReferenceIou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = (a.x_max - a.x_min) * (a.y_max - a.y_min) +
                     (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

double ReferenceAp(const std::vector<std::pair<double, double>>& curve) {
  double total = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    double best = 0.0;
    for (const auto& [recall, precision] : curve) {
      if (recall >= r && precision > best) best = precision;
    }
    total += best;
  }
  return total / 101.0;
}

ReferenceResult ReferenceEvaluate(const std::vector<Detection>& dets,
                                  const std::vector<GroundTruthBox>& gts,
                                  const std::vector<double>& thresholds) {
  std::set<std::int64_t> cats;
  std::set<std::int64_t> images;
  for (const auto& g : gts) {
    cats.insert(g.category_id);
    images.insert(g.image_id);
  }
  for (const auto& d : dets) images.insert(d.image_id);

  ReferenceResult out;
  out.map_per_threshold.assign(thresholds.size(), 0.0);
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    for (std::int64_t c : cats) {
      std::vector<std::pair<double, bool>> pooled;
      std::size_t total_gt = 0;
      for (std::int64_t im : images) {
        std::vector<std::size_t> di;
        for (std::size_t i = 0; i < dets.size(); ++i) {
          if (dets[i].category_id == c && dets[i].image_id == im) {
            di.push_back(i);
          }
        }
        std::vector<std::size_t> gi;
        for (std::size_t i = 0; i < gts.size(); ++i) {
          if (gts[i].category_id == c && gts[i].image_id == im) {
            gi.push_back(i);
          }
        }
        total_gt += gi.size();
        // Selection sort by descending score.
        for (std::size_t a = 0; a < di.size(); ++a) {
          for (std::size_t b = a + 1; b < di.size(); ++b) {
            if (dets[di[b]].score > dets[di[a]].score) std::swap(di[a], di[b]);
          }
        }
        std::vector<bool> taken(gi.size(), false);
        for (std::size_t d : di) {
          double best = -1.0;
          int pick = -1;
          for (std::size_t g = 0; g < gi.size(); ++g) {
            if (taken[g]) continue;
            const double iou = ReferenceIou(dets[d].bbox, gts[gi[g]].bbox);
            if (iou >= thresholds[t] && iou > best) {
              best = iou;
              pick = static_cast<int>(g);
            }
          }
          if (pick >= 0) taken[static_cast<std::size_t>(pick)] = true;
          pooled.push_back({dets[d].score, pick >= 0});
        }
      }
      for (std::size_t a = 0; a < pooled.size(); ++a) {
        for (std::size_t b = a + 1; b < pooled.size(); ++b) {
          if (pooled[b].first > pooled[a].first) std::swap(pooled[a], pooled[b]);
        }
      }
      std::vector<std::pair<double, double>> curve;
      double tp = 0, fp = 0;
      for (const auto& [score, hit] : pooled) {
        (hit ? tp : fp) += 1;
        curve.push_back({tp / static_cast<double>(total_gt), tp / (tp + fp)});
      }
      const double ap = ReferenceAp(curve);
      out.ap[{c, t}] = ap;
      out.map_per_threshold[t] += ap;
    }
    if (!cats.empty()) out.map_per_threshold[t] /= static_cast<double>(cats.size());
  }
  for (double m : out.map_per_threshold) out.map_overall += m;
  if (!thresholds.empty()) {
    out.map_overall /= static_cast<double>(thresholds.size());
  }
  return out;
}

namespace {

BBox RandomBox(CounterRng& rng, double cx, double cy) {
  const double w = rng.NextUniform(4.0, 20.0);
  const double h = rng.NextUniform(4.0, 20.0);
  const double x = cx + rng.NextUniform(-6.0, 6.0);
  const double y = cy + rng.NextUniform(-6.0, 6.0);
  return {x, y, x + w, y + h};
}

BBox Jitter(CounterRng& rng, const BBox& b, double amount) {
  return {b.x_min + rng.NextUniform(-amount, amount),
          b.y_min + rng.NextUniform(-amount, amount),
          b.x_max + rng.NextUniform(-amount, amount),
          b.y_max + rng.NextUniform(-amount, amount)};
}

}  // namespace

RandomInstance MakeRandomInstance(std::uint64_t seed, int max_dets,
                                  int max_gts, int max_cats) {
  CounterRng rng(seed);
  RandomInstance inst;
  const int num_gts = static_cast<int>(rng.NextBelow(max_gts + 1));
  const int num_dets = static_cast<int>(rng.NextBelow(max_dets + 1));
  for (int i = 0; i < num_gts; ++i) {
    GroundTruthBox g;
    g.image_id = static_cast<std::int64_t>(rng.NextBelow(2));
    g.category_id = static_cast<std::int64_t>(rng.NextBelow(max_cats)) + 1;
    g.bbox = RandomBox(rng, 20.0, 20.0);
    inst.gts.push_back(g);
  }
  for (int i = 0; i < num_dets; ++i) {
    Detection d;
    if (!inst.gts.empty() && rng.NextUniform() < 0.7) {
      const auto& g = inst.gts[rng.NextBelow(inst.gts.size())];
      d.bbox = Jitter(rng, g.bbox, 3.0);
      if (d.bbox.x_max <= d.bbox.x_min) d.bbox.x_max = d.bbox.x_min + 1.0;
      if (d.bbox.y_max <= d.bbox.y_min) d.bbox.y_max = d.bbox.y_min + 1.0;
      d.image_id = g.image_id;
      d.category_id = rng.NextUniform() < 0.85
                          ? g.category_id
                          : static_cast<std::int64_t>(rng.NextBelow(max_cats)) + 1;
    } else {
      d.bbox = RandomBox(rng, 20.0, 20.0);
      d.image_id = static_cast<std::int64_t>(rng.NextBelow(2));
      d.category_id = static_cast<std::int64_t>(rng.NextBelow(max_cats)) + 1;
    }
    d.score = rng.NextUniform();
    inst.dets.push_back(d);
  }
  return inst;
}

std::vector<Detection> MakeRandomDetections(std::uint64_t seed, int n) {
  CounterRng rng(seed);
  std::vector<Detection> dets;
  const int count = static_cast<int>(rng.NextBelow(n + 1));
  for (int i = 0; i < count; ++i) {
    Detection d;
    if (!dets.empty() && rng.NextUniform() < 0.1) {
      d = dets[rng.NextBelow(dets.size())];
    } else if (!dets.empty() && rng.NextUniform() < 0.4) {
      d = dets[rng.NextBelow(dets.size())];
      d.bbox = Jitter(rng, d.bbox, 4.0);
      if (d.bbox.x_max <= d.bbox.x_min) d.bbox.x_max = d.bbox.x_min + 1.0;
      if (d.bbox.y_max <= d.bbox.y_min) d.bbox.y_max = d.bbox.y_min + 1.0;
      d.score = rng.NextUniform() < 0.1 ? d.score : rng.NextUniform();
    } else {
      d.bbox = RandomBox(rng, 30.0, 30.0);
      d.category_id = static_cast<std::int64_t>(rng.NextBelow(2));
      d.image_id = static_cast<std::int64_t>(rng.NextBelow(2));
      d.score = rng.NextUniform();
    }
    dets.push_back(d);
  }
  return dets;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void WriteFixtureDataset(const std::filesystem::path& dir, int num_images,
                         std::uint64_t seed) {
  std::filesystem::create_directories(dir / "images");
  static const char* kNames[] = {"acme", "globex", "initech"};
  static const std::uint8_t kColors[3][3] = {
      {220, 40, 40}, {40, 180, 60}, {50, 70, 230}};
  CounterRng rng(seed);
  nlohmann::json doc;
  doc["images"] = nlohmann::json::array();
  doc["annotations"] = nlohmann::json::array();
  doc["categories"] = nlohmann::json::array();
  for (int c = 0; c < 3; ++c) {
    doc["categories"].push_back({{"id", c + 1}, {"name", kNames[c]}});
  }
  int ann_id = 1;
  for (int i = 0; i < num_images; ++i) {
    const std::uint32_t w = 48 + static_cast<std::uint32_t>(rng.NextBelow(17));
    const std::uint32_t h = 40 + static_cast<std::uint32_t>(rng.NextBelow(17));
    augment::Image img(w, h);
    for (std::uint32_t y = 0; y < h; ++y) {
      for (std::uint32_t x = 0; x < w; ++x) {
        img.at(x, y, 0) = static_cast<std::uint8_t>(4 * x + y);
        img.at(x, y, 1) = static_cast<std::uint8_t>(3 * y + 20);
        img.at(x, y, 2) = static_cast<std::uint8_t>(128 + x - y);
      }
    }
    const std::string name = "images/img_" + std::to_string(i) + ".png";
    const int id = 100 + i;
    doc["images"].push_back(
        {{"id", id}, {"file_name", name}, {"width", w}, {"height", h}});
    const int boxes = 1 + static_cast<int>(rng.NextBelow(3));
    for (int b = 0; b < boxes; ++b) {
      const int cat = static_cast<int>(rng.NextBelow(3));
      const std::uint32_t bw = 8 + static_cast<std::uint32_t>(rng.NextBelow(12));
      const std::uint32_t bh = 6 + static_cast<std::uint32_t>(rng.NextBelow(10));
      const std::uint32_t x0 = static_cast<std::uint32_t>(rng.NextBelow(w - bw));
      const std::uint32_t y0 = static_cast<std::uint32_t>(rng.NextBelow(h - bh));
      for (std::uint32_t y = y0; y < y0 + bh; ++y) {
        for (std::uint32_t x = x0; x < x0 + bw; ++x) {
          for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = kColors[cat][ch];
        }
      }
      doc["annotations"].push_back({{"id", ann_id++},
                                    {"image_id", id},
                                    {"category_id", cat + 1},
                                    {"bbox", {x0, y0, bw, bh}},
                                    {"area", bw * bh}});
    }
    WritePng(dir / name, img);
  }
  std::ofstream(dir / "annotations.json") << doc.dump(2) << "\n";
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rld::testing
