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
#include "rld/rld.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "rld/config.hpp"
#include "rld/dataset.hpp"
#include "rld/eqlv2.hpp"
#include "rld/evaluation.hpp"
#include "rld/image_io.hpp"
#include "rld/io.hpp"
#include "rld/multiscale.hpp"
#include "rld/network_sim.hpp"
#include "rld/postprocess.hpp"

struct rld_config {
  rld::RunConfig cfg;
};

struct rld_annotations {
  rld::AnnotationFile file;
};

struct rld_detections {
  std::vector<rld::DetectionRecord> records;
};

struct rld_eval_result {
  rld::EvalResult result;
  std::map<std::int64_t, std::string> names;
};

namespace {

thread_local std::string g_last_error;

rld_status Fail(rld_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
rld_status Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const rld::ParseError& e) {
    return Fail(RLD_ERROR_PARSE, e.what());
  } catch (const rld::ValidationError& e) {
    return Fail(RLD_ERROR_VALIDATION, e.what());
  } catch (const rld::InvalidArgument& e) {
    return Fail(RLD_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const rld::IoError& e) {
    return Fail(RLD_ERROR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return Fail(RLD_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RLD_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RLD_ERROR_INTERNAL, e.what());
  }
}

rld_status NullArgument(const char* name) {
  return Fail(RLD_ERROR_INVALID_ARGUMENT,
              std::string(name) + " must not be null");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rld::BBox ToBox(const rld_box& b) {
  return {b.x_min, b.y_min, b.x_max, b.y_max};
}

rld_box FromBox(const rld::BBox& b) {
  return {b.x_min, b.y_min, b.x_max, b.y_max};
}

rld::Detection ToDetection(const rld_detection& d) {
  rld::Detection out;
  out.bbox = ToBox(d.bbox);
  out.category_id = d.category_id;
  out.score = d.score;
  out.image_id = d.image_id;
  return out;
}

std::vector<rld::Detection> Plain(const std::vector<rld::DetectionRecord>& r) {
  std::vector<rld::Detection> out;
  out.reserve(r.size());
  for (const auto& d : r) out.push_back(d.detection);
  return out;
}

}  // namespace

extern "C" {

const char* rld_last_error(void) { return g_last_error.c_str(); }

const char* rld_status_string(rld_status status) {
  switch (status) {
    case RLD_OK:
      return "ok";
    case RLD_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case RLD_ERROR_PARSE:
      return "parse error";
    case RLD_ERROR_VALIDATION:
      return "validation error";
    case RLD_ERROR_IO:
      return "i/o error";
    case RLD_ERROR_PARTIAL:
      return "partial failure";
    case RLD_ERROR_TOTAL_FAILURE:
      return "total failure";
    case RLD_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* rld_version(void) { return "0.1.0"; }

void rld_string_free(char* s) { std::free(s); }

double rld_box_iou(const rld_box* a, const rld_box* b) {
  if (a == nullptr || b == nullptr) return 0.0;
  return rld::Iou(ToBox(*a), ToBox(*b));
}

rld_status rld_config_create_default(rld_config** out) {
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new rld_config();
    return RLD_OK;
  });
}

rld_status rld_config_load(const char* path, rld_config** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    auto cfg = std::make_unique<rld_config>();
    cfg->cfg = rld::LoadRunConfig(path);
    *out = cfg.release();
    return RLD_OK;
  });
}

void rld_config_destroy(rld_config* cfg) { delete cfg; }

uint64_t rld_config_seed(const rld_config* cfg) {
  return cfg == nullptr ? 0 : cfg->cfg.seed;
}

rld_status rld_config_set_seed(rld_config* cfg, uint64_t seed) {
  if (cfg == nullptr) return NullArgument("cfg");
  cfg->cfg.seed = seed;
  return RLD_OK;
}

rld_status rld_config_apply_env_seed(rld_config* cfg) {
  if (cfg == nullptr) return NullArgument("cfg");
  return Guard([&] {
    try {
      rld::ApplySeedFromEnvironment(cfg->cfg);
    } catch (const rld::InvalidArgument& e) {
      throw rld::InvalidArgument(std::string(rld::kSeedEnvVar) + ": " +
                                 e.what());
    }
    return RLD_OK;
  });
}

rld_status rld_parse_seed(const char* text, uint64_t* out) {
  if (text == nullptr) return NullArgument("text");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = rld::ParseSeed(text);
    return RLD_OK;
  });
}

rld_status rld_config_to_json(const rld_config* cfg, char** out_text) {
  if (cfg == nullptr) return NullArgument("cfg");
  if (out_text == nullptr) return NullArgument("out_text");
  return Guard([&] {
    *out_text = CopyString(rld::SerializeRunConfig(cfg->cfg));
    return RLD_OK;
  });
}

rld_status rld_annotations_load(const char* path, rld_annotations** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    auto ann = std::make_unique<rld_annotations>();
    ann->file = rld::LoadAnnotations(path);
    *out = ann.release();
    return RLD_OK;
  });
}

void rld_annotations_destroy(rld_annotations* ann) { delete ann; }

size_t rld_annotations_image_count(const rld_annotations* ann) {
  return ann == nullptr ? 0 : ann->file.images.size();
}

size_t rld_annotations_annotation_count(const rld_annotations* ann) {
  return ann == nullptr ? 0 : ann->file.annotations.size();
}

size_t rld_annotations_category_count(const rld_annotations* ann) {
  return ann == nullptr ? 0 : ann->file.categories.size();
}

rld_status rld_detections_create(rld_detections** out) {
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    *out = new rld_detections();
    return RLD_OK;
  });
}

rld_status rld_detections_load(const char* path, rld_detections** out) {
  if (path == nullptr) return NullArgument("path");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    auto dets = std::make_unique<rld_detections>();
    dets->records = rld::LoadDetections(path);
    *out = dets.release();
    return RLD_OK;
  });
}

rld_status rld_detections_save(const rld_detections* dets, const char* path) {
  if (dets == nullptr) return NullArgument("dets");
  if (path == nullptr) return NullArgument("path");
  return Guard([&] {
    rld::SaveDetections(path, dets->records);
    return RLD_OK;
  });
}

void rld_detections_destroy(rld_detections* dets) { delete dets; }

size_t rld_detections_count(const rld_detections* dets) {
  return dets == nullptr ? 0 : dets->records.size();
}

rld_status rld_detections_get(const rld_detections* dets, size_t index,
                              rld_detection* out) {
  if (dets == nullptr) return NullArgument("dets");
  if (out == nullptr) return NullArgument("out");
  if (index >= dets->records.size()) {
    return Fail(RLD_ERROR_INVALID_ARGUMENT, "detection index out of range");
  }
  const rld::Detection& d = dets->records[index].detection;
  out->bbox = FromBox(d.bbox);
  out->category_id = d.category_id;
  out->score = d.score;
  out->image_id = d.image_id;
  return RLD_OK;
}

double rld_detections_scale(const rld_detections* dets, size_t index) {
  if (dets == nullptr || index >= dets->records.size()) return 0.0;
  return dets->records[index].scale.value_or(0.0);
}

rld_status rld_detections_push(rld_detections* dets, const rld_detection* det,
                               double scale) {
  if (dets == nullptr) return NullArgument("dets");
  if (det == nullptr) return NullArgument("det");
  return Guard([&] {
    rld::DetectionRecord r;
    r.detection = ToDetection(*det);
    if (!rld::IsValid(r.detection)) {
      throw rld::InvalidArgument("detection violates box or score invariants");
    }
    if (scale > 0.0) r.scale = scale;
    dets->records.push_back(r);
    return RLD_OK;
  });
}

rld_status rld_evaluate(const rld_annotations* ann, const rld_detections* dets,
                        const rld_config* cfg, rld_eval_result** out) {
  if (ann == nullptr) return NullArgument("ann");
  if (dets == nullptr) return NullArgument("dets");
  if (cfg == nullptr) return NullArgument("cfg");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    rld::CheckDetectionImages(ann->file, dets->records, "detections");
    auto res = std::make_unique<rld_eval_result>();
    const std::vector<rld::Detection> plain = Plain(dets->records);
    const std::vector<rld::GroundTruthBox> gts = ann->file.GroundTruth();
    res->result = rld::Evaluate(plain, gts, cfg->cfg.iou_thresholds);
    for (const auto& c : ann->file.categories) res->names[c.id] = c.name;
    *out = res.release();
    return RLD_OK;
  });
}

rld_status rld_evaluate_arrays(const rld_detection* dets, size_t num_dets,
                               const rld_ground_truth* gts, size_t num_gts,
                               const double* thresholds, size_t num_thresholds,
                               rld_eval_result** out) {
  if (dets == nullptr && num_dets > 0) return NullArgument("dets");
  if (gts == nullptr && num_gts > 0) return NullArgument("gts");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    std::vector<rld::Detection> d;
    d.reserve(num_dets);
    for (size_t i = 0; i < num_dets; ++i) d.push_back(ToDetection(dets[i]));
    std::vector<rld::GroundTruthBox> g;
    g.reserve(num_gts);
    for (size_t i = 0; i < num_gts; ++i) {
      g.push_back({ToBox(gts[i].bbox), gts[i].category_id, gts[i].image_id});
    }
    std::vector<double> t;
    if (thresholds == nullptr || num_thresholds == 0) {
      t = rld::DefaultIouThresholds();
    } else {
      t.assign(thresholds, thresholds + num_thresholds);
    }
    auto res = std::make_unique<rld_eval_result>();
    res->result = rld::Evaluate(d, g, t);
    *out = res.release();
    return RLD_OK;
  });
}

void rld_eval_result_destroy(rld_eval_result* res) { delete res; }

double rld_eval_result_map(const rld_eval_result* res) {
  return res == nullptr ? 0.0 : res->result.map_overall;
}

size_t rld_eval_result_threshold_count(const rld_eval_result* res) {
  return res == nullptr ? 0 : res->result.thresholds.size();
}

double rld_eval_result_threshold(const rld_eval_result* res, size_t index) {
  if (res == nullptr || index >= res->result.thresholds.size()) return 0.0;
  return res->result.thresholds[index];
}

double rld_eval_result_map_at(const rld_eval_result* res,
                              size_t threshold_index) {
  if (res == nullptr || threshold_index >= res->result.map_per_threshold.size()) {
    return 0.0;
  }
  return res->result.map_per_threshold[threshold_index];
}

size_t rld_eval_result_category_count(const rld_eval_result* res) {
  return res == nullptr ? 0 : res->result.categories.size();
}

int64_t rld_eval_result_category(const rld_eval_result* res, size_t index) {
  if (res == nullptr || index >= res->result.categories.size()) return -1;
  return res->result.categories[index];
}

double rld_eval_result_ap(const rld_eval_result* res, size_t category_index,
                          size_t threshold_index) {
  if (res == nullptr || category_index >= res->result.categories.size() ||
      threshold_index >= res->result.thresholds.size()) {
    return 0.0;
  }
  return res->result.Ap(res->result.categories[category_index],
                        threshold_index);
}

rld_status rld_eval_result_report(const rld_eval_result* res,
                                  char** out_text) {
  if (res == nullptr) return NullArgument("res");
  if (out_text == nullptr) return NullArgument("out_text");
  return Guard([&] {
    *out_text = CopyString(rld::FormatEvalReport(res->result, res->names));
    return RLD_OK;
  });
}

rld_status rld_postprocess(const rld_detections* in, const rld_config* cfg,
                           int fuse, rld_detections** out) {
  if (in == nullptr) return NullArgument("in");
  if (cfg == nullptr) return NullArgument("cfg");
  if (out == nullptr) return NullArgument("out");
  return Guard([&] {
    const rld::SoftNmsConfig& nms = cfg->cfg.soft_nms;
    rld::Validate(nms);
    std::vector<rld::Detection> kept;
    if (fuse != 0) {
      std::map<double, rld::ScaledDetections> by_scale;
      for (std::size_t i = 0; i < in->records.size(); ++i) {
        const auto& r = in->records[i];
        if (!r.scale) {
          throw rld::ValidationError(
              "detections: [" + std::to_string(i) +
                  "].scale: fusion needs a scale tag on every detection",
              "[" + std::to_string(i) + "].scale", 0);
        }
        auto& group = by_scale[*r.scale];
        group.factor = *r.scale;
        group.detections.push_back(r.detection);
      }
      std::vector<rld::ScaledDetections> scales;
      for (auto& [factor, group] : by_scale) scales.push_back(std::move(group));
      if (nms.method == rld::SuppressionMethod::kHard) {
        std::vector<rld::Detection> merged;
        for (const auto& s : scales) {
          for (rld::Detection d : s.detections) {
            d.bbox = {d.bbox.x_min / s.factor, d.bbox.y_min / s.factor,
                      d.bbox.x_max / s.factor, d.bbox.y_max / s.factor};
            merged.push_back(d);
          }
        }
        kept = rld::StandardNmsPerImage(merged, nms.iou_threshold);
      } else {
        kept = rld::FuseMultiscale(scales, nms);
      }
    } else {
      const std::vector<rld::Detection> plain = Plain(in->records);
      kept = nms.method == rld::SuppressionMethod::kHard
                 ? rld::StandardNmsPerImage(plain, nms.iou_threshold)
                 : rld::SoftNmsPerImage(plain, nms);
    }
    auto res = std::make_unique<rld_detections>();
    res->records.reserve(kept.size());
    for (const auto& d : kept) res->records.push_back({d, std::nullopt});
    *out = res.release();
    return RLD_OK;
  });
}

rld_status rld_corrupt_dataset(const char* dataset_dir, const char* out_dir,
                               const rld_config* cfg,
                               rld_corrupt_summary* summary) {
  if (dataset_dir == nullptr) return NullArgument("dataset_dir");
  if (out_dir == nullptr) return NullArgument("out_dir");
  if (cfg == nullptr) return NullArgument("cfg");
  if (summary != nullptr) *summary = {0, 0, 0};
  return Guard([&] {
    const rld::CorruptionReport report = rld::CorruptDataset(
        dataset_dir, out_dir, cfg->cfg.corruption_suite, cfg->cfg.seed,
        cfg->cfg.file_prefix);
    if (summary != nullptr) {
      summary->total_images = report.total_images;
      summary->corrupted_images = report.manifest.size();
      summary->failed_images = report.failures.size();
    }
    if (report.failures.empty()) return RLD_OK;
    const std::string first = report.failures.front().reason;
    if (report.manifest.empty()) {
      return Fail(RLD_ERROR_TOTAL_FAILURE,
                  "no image could be corrupted; first error: " + first);
    }
    return Fail(RLD_ERROR_PARTIAL,
                std::to_string(report.failures.size()) + " of " +
                    std::to_string(report.total_images) +
                    " images failed; first error: " + first);
  });
}

rld_status rld_plan_scales(const rld_config* cfg, uint32_t width,
                           uint32_t height, rld_scale* out, size_t capacity,
                           size_t* count) {
  if (cfg == nullptr) return NullArgument("cfg");
  if (count == nullptr) return NullArgument("count");
  if (out == nullptr && capacity > 0) return NullArgument("out");
  return Guard([&] {
    const auto scales =
        rld::ResolvePlan(rld::ImageSize{width, height}, cfg->cfg.scale_plan);
    *count = scales.size();
    for (size_t i = 0; i < scales.size() && i < capacity; ++i) {
      out[i] = {scales[i].target_short, scales[i].factor,
                scales[i].size.width, scales[i].size.height};
    }
    return RLD_OK;
  });
}

rld_status rld_simulate(const rld_config* cfg, char** out_text) {
  if (cfg == nullptr) return NullArgument("cfg");
  if (out_text == nullptr) return NullArgument("out_text");
  return Guard([&] {
    *out_text = CopyString(
        rld::sim::RunSimulation(cfg->cfg.seed, cfg->cfg.simulation));
    return RLD_OK;
  });
}

rld_status rld_eql_demo(const rld_config* cfg, char** out_text) {
  if (cfg == nullptr) return NullArgument("cfg");
  if (out_text == nullptr) return NullArgument("out_text");
  return Guard([&] {
    const auto report = rld::eqlv2::RunLongtailDemo(cfg->cfg.seed, cfg->cfg.demo);
    *out_text = CopyString(rld::eqlv2::FormatReport(report));
    return RLD_OK;
  });
}

}  // extern "C"
