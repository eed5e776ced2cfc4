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
// Command-line front end over the rld C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rld/rld.h"

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalid = 2,
  kExitPartial = 3,
  kExitTotalFailure = 4,
  kExitInternal = 5,
};

int ExitFor(rld_status status) {
  switch (status) {
    case RLD_OK:
      return kExitOk;
    case RLD_ERROR_PARTIAL:
      return kExitPartial;
    case RLD_ERROR_TOTAL_FAILURE:
      return kExitTotalFailure;
    case RLD_ERROR_INTERNAL:
      return kExitInternal;
    default:
      return kExitInvalid;
  }
}

int Report(rld_status status) {
  if (status != RLD_OK) {
    std::fprintf(stderr, "rld: %s: %s\n", rld_status_string(status),
                 rld_last_error());
  }
  return ExitFor(status);
}

struct ConfigDeleter {
  void operator()(rld_config* c) const { rld_config_destroy(c); }
};
struct AnnotationsDeleter {
  void operator()(rld_annotations* a) const { rld_annotations_destroy(a); }
};
struct DetectionsDeleter {
  void operator()(rld_detections* d) const { rld_detections_destroy(d); }
};
struct EvalDeleter {
  void operator()(rld_eval_result* r) const { rld_eval_result_destroy(r); }
};
struct StringDeleter {
  void operator()(char* s) const { rld_string_free(s); }
};

using ConfigPtr = std::unique_ptr<rld_config, ConfigDeleter>;
using AnnotationsPtr = std::unique_ptr<rld_annotations, AnnotationsDeleter>;
using DetectionsPtr = std::unique_ptr<rld_detections, DetectionsDeleter>;
using EvalPtr = std::unique_ptr<rld_eval_result, EvalDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct GlobalOptions {
  std::string config_path;
  std::string seed_text;
};

// Seed precedence: --seed, then the environment, then the config file.
rld_status LoadConfig(const GlobalOptions& opts, ConfigPtr* out) {
  rld_config* raw = nullptr;
  rld_status s = opts.config_path.empty()
                     ? rld_config_create_default(&raw)
                     : rld_config_load(opts.config_path.c_str(), &raw);
  if (s != RLD_OK) return s;
  out->reset(raw);
  s = rld_config_apply_env_seed(raw);
  if (s != RLD_OK) return s;
  if (!opts.seed_text.empty()) {
    uint64_t seed = 0;
    s = rld_parse_seed(opts.seed_text.c_str(), &seed);
    if (s != RLD_OK) return s;
    s = rld_config_set_seed(raw, seed);
  }
  return s;
}

// Prints `text` and, when `out_path` is set, also writes it there.
int EmitText(const char* text, const std::string& out_path) {
  std::fputs(text, stdout);
  if (out_path.empty()) return kExitOk;
  const std::string tmp = out_path + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (f == nullptr) {
    std::fprintf(stderr, "rld: cannot open %s for writing\n", tmp.c_str());
    return kExitInvalid;
  }
  const bool ok = std::fputs(text, f) >= 0;
  if (std::fclose(f) != 0 || !ok ||
      std::rename(tmp.c_str(), out_path.c_str()) != 0) {
    std::remove(tmp.c_str());
    std::fprintf(stderr, "rld: cannot write %s\n", out_path.c_str());
    return kExitInvalid;
  }
  return kExitOk;
}

int RunEvaluate(const GlobalOptions& g, const std::string& ann_path,
                const std::string& det_path, const std::string& out_path) {
  ConfigPtr cfg;
  rld_status s = LoadConfig(g, &cfg);
  if (s != RLD_OK) return Report(s);
  rld_annotations* ann_raw = nullptr;
  s = rld_annotations_load(ann_path.c_str(), &ann_raw);
  if (s != RLD_OK) return Report(s);
  AnnotationsPtr ann(ann_raw);
  rld_detections* det_raw = nullptr;
  s = rld_detections_load(det_path.c_str(), &det_raw);
  if (s != RLD_OK) return Report(s);
  DetectionsPtr dets(det_raw);
  rld_eval_result* res_raw = nullptr;
  s = rld_evaluate(ann.get(), dets.get(), cfg.get(), &res_raw);
  if (s != RLD_OK) return Report(s);
  EvalPtr res(res_raw);
  char* text = nullptr;
  s = rld_eval_result_report(res.get(), &text);
  if (s != RLD_OK) return Report(s);
  StringPtr owned(text);
  return EmitText(text, out_path);
}

int RunCorrupt(const GlobalOptions& g, const std::string& dataset,
               const std::string& out_dir) {
  ConfigPtr cfg;
  rld_status s = LoadConfig(g, &cfg);
  if (s != RLD_OK) return Report(s);
  rld_corrupt_summary summary{};
  s = rld_corrupt_dataset(dataset.c_str(), out_dir.c_str(), cfg.get(),
                          &summary);
  if (s == RLD_OK || s == RLD_ERROR_PARTIAL || s == RLD_ERROR_TOTAL_FAILURE) {
    std::printf("images %zu corrupted %zu failed %zu\n", summary.total_images,
                summary.corrupted_images, summary.failed_images);
  }
  return Report(s);
}

int RunPostprocess(const GlobalOptions& g, const std::string& det_path,
                   const std::string& out_path, bool fuse) {
  ConfigPtr cfg;
  rld_status s = LoadConfig(g, &cfg);
  if (s != RLD_OK) return Report(s);
  rld_detections* in_raw = nullptr;
  s = rld_detections_load(det_path.c_str(), &in_raw);
  if (s != RLD_OK) return Report(s);
  DetectionsPtr in(in_raw);
  rld_detections* out_raw = nullptr;
  s = rld_postprocess(in.get(), cfg.get(), fuse ? 1 : 0, &out_raw);
  if (s != RLD_OK) return Report(s);
  DetectionsPtr out(out_raw);
  s = rld_detections_save(out.get(), out_path.c_str());
  if (s != RLD_OK) return Report(s);
  std::printf("detections in %zu out %zu\n", rld_detections_count(in.get()),
              rld_detections_count(out.get()));
  return kExitOk;
}

int RunPlanScales(const GlobalOptions& g, uint32_t width, uint32_t height) {
  ConfigPtr cfg;
  rld_status s = LoadConfig(g, &cfg);
  if (s != RLD_OK) return Report(s);
  size_t count = 0;
  s = rld_plan_scales(cfg.get(), width, height, nullptr, 0, &count);
  if (s != RLD_OK) return Report(s);
  std::vector<rld_scale> scales(count);
  s = rld_plan_scales(cfg.get(), width, height, scales.data(), scales.size(),
                      &count);
  if (s != RLD_OK) return Report(s);
  std::printf("target factor width height\n");
  for (const rld_scale& sc : scales) {
    std::printf("%u %.6f %u %u\n", sc.target_short, sc.factor, sc.width,
                sc.height);
  }
  return kExitOk;
}

using TextFn = rld_status (*)(const rld_config*, char**);

int RunTextCommand(const GlobalOptions& g, TextFn fn,
                   const std::string& out_path) {
  ConfigPtr cfg;
  rld_status s = LoadConfig(g, &cfg);
  if (s != RLD_OK) return Report(s);
  char* text = nullptr;
  s = fn(cfg.get(), &text);
  if (s != RLD_OK) return Report(s);
  StringPtr owned(text);
  return EmitText(text, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust logo detection toolkit"};
  app.set_version_flag("--version", std::string(rld_version()));
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed_text,
                 "Master seed; overrides RLD_SEED and the config");

  std::string ann_path, det_path, out_path, dataset_dir;
  bool fuse = false;
  uint32_t width = 0, height = 0;

  auto* evaluate = app.add_subcommand("evaluate", "Compute mAP for detections");
  evaluate->add_option("annotations", ann_path, "Annotation file")
      ->required();
  evaluate->add_option("detections", det_path, "Detection file")->required();
  evaluate->add_option("--out", out_path, "Also write the report here");

  auto* corrupt = app.add_subcommand("corrupt", "Corrupt a dataset directory");
  corrupt->add_option("dataset", dataset_dir, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  corrupt->add_option("--out", out_path, "Output directory")->required();

  auto* postprocess =
      app.add_subcommand("postprocess", "Suppress overlapping detections");
  postprocess->add_option("detections", det_path, "Detection file")
      ->required();
  postprocess->add_option("--out", out_path, "Output detection file")
      ->required();
  postprocess->add_flag("--fuse", fuse,
                        "Fuse scale-tagged detections before suppression");

  auto* plan = app.add_subcommand("plan-scales", "Resolve the test scales");
  plan->add_option("width", width, "Image width")
      ->required()
      ->check(CLI::PositiveNumber);
  plan->add_option("height", height, "Image height")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* simulate =
      app.add_subcommand("simulate", "Run the feature pyramid simulation");
  simulate->add_option("--out", out_path, "Also write the report here");

  auto* demo = app.add_subcommand("eql-demo", "Run the long-tail loss demo");
  demo->add_option("--out", out_path, "Also write the report here");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*evaluate) return RunEvaluate(g, ann_path, det_path, out_path);
  if (*corrupt) return RunCorrupt(g, dataset_dir, out_path);
  if (*postprocess) return RunPostprocess(g, det_path, out_path, fuse);
  if (*plan) return RunPlanScales(g, width, height);
  if (*simulate) return RunTextCommand(g, rld_simulate, out_path);
  if (*demo) return RunTextCommand(g, rld_eql_demo, out_path);
  return kExitUsage;
}
