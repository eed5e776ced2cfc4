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
#include "rld/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <limits>
#include <set>

#include "json.hpp"
#include "rld/evaluation.hpp"
#include "rld/image_io.hpp"
#include "rld/io.hpp"

namespace rld {
namespace {

using nlohmann::json;

// A JSON object whose keys must all be consumed.
class Section {
 public:
  Section(const json& value, std::string path, const std::string& source)
      : value_(value), path_(std::move(path)), source_(source) {
    if (!value_.is_object()) Fail("", "expected an object");
  }

  ~Section() = default;

  [[noreturn]] void Fail(const std::string& key,
                         const std::string& what) const {
    const std::string p = Join(key);
    throw ValidationError(source_ + ": " + (p.empty() ? "<root>" : p) + ": " +
                              what,
                          p, 0);
  }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = value_.find(key);
    return it == value_.end() ? nullptr : &*it;
  }

  void Real(const std::string& key, double* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number()) Fail(key, "expected a number");
      *out = v->get<double>();
    }
  }

  void Int(const std::string& key, int* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number_integer()) Fail(key, "expected an integer");
      const auto i = v->get<std::int64_t>();
      if (i < std::numeric_limits<int>::min() ||
          i > std::numeric_limits<int>::max()) {
        Fail(key, "integer out of range");
      }
      *out = static_cast<int>(i);
    }
  }

  void U32(const std::string& key, std::uint32_t* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0 ||
          v->get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        Fail(key, "expected a nonnegative 32-bit integer");
      }
      *out = static_cast<std::uint32_t>(v->get<std::int64_t>());
    }
  }

  void U64(const std::string& key, std::uint64_t* out) {
    if (const json* v = Get(key)) {
      if (!v->is_number_unsigned() &&
          !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        Fail(key, "expected a nonnegative integer");
      }
      *out = v->get<std::uint64_t>();
    }
  }

  void Bool(const std::string& key, bool* out) {
    if (const json* v = Get(key)) {
      if (!v->is_boolean()) Fail(key, "expected true or false");
      *out = v->get<bool>();
    }
  }

  void String(const std::string& key, std::string* out) {
    if (const json* v = Get(key)) {
      if (!v->is_string()) Fail(key, "expected a string");
      *out = v->get<std::string>();
    }
  }

  // Consumed key that a validator message opens with, or empty.
  std::string KeyNamedBy(const std::string& message) const {
    std::string best;
    for (const std::string& k : seen_) {
      if (message.size() > k.size() && message.compare(0, k.size(), k) == 0 &&
          message[k.size()] == ' ' && k.size() > best.size()) {
        best = k;
      }
    }
    return best;
  }

  std::string Child(const std::string& key) const { return Join(key); }
  const std::string& source() const { return source_; }

  // Rejects keys that no accessor asked for.
  void Finish() const {
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!seen_.contains(it.key())) Fail(it.key(), "unknown key");
    }
  }

 private:
  std::string Join(const std::string& key) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& value_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

// Re-throws InvalidArgument from module validators as a ValidationError
// carrying the offending key path.
template <typename Fn>
void CheckSection(const Section& s, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    s.Fail(s.KeyNamedBy(e.what()), e.what());
  }
}

augment::CorruptionSpec ParseCorruption(const json& v, const std::string& path,
                                        const std::string& source) {
  Section s(v, path, source);
  augment::CorruptionSpec spec;
  std::string kind;
  s.String("kind", &kind);
  if (kind.empty()) s.Fail("kind", "missing field");
  CheckSection(s, [&] { spec.kind = augment::ParseCorruptionKind(kind); });
  s.Real("severity", &spec.severity);
  s.Real("sigma", &spec.sigma);
  s.Real("density", &spec.density);
  s.Real("angle", &spec.angle_deg);
  s.Real("attenuation", &spec.attenuation);
  s.Real("airlight", &spec.airlight);
  s.Real("radius", &spec.radius);
  s.U64("seed", &spec.seed);
  s.Finish();
  CheckSection(s, [&] { augment::Validate(spec); });
  return spec;
}

std::vector<augment::CorruptionSpec> DefaultSuite() {
  using augment::CorruptionKind;
  std::vector<augment::CorruptionSpec> suite(4);
  suite[0].kind = CorruptionKind::kGaussianNoise;
  suite[1].kind = CorruptionKind::kRain;
  suite[2].kind = CorruptionKind::kFog;
  suite[3].kind = CorruptionKind::kBlur;
  return suite;
}

json CorruptionToJson(const augment::CorruptionSpec& s) {
  json j = {{"kind", std::string(augment::ToString(s.kind))},
            {"severity", s.severity}};
  switch (s.kind) {
    case augment::CorruptionKind::kGaussianNoise:
      j["sigma"] = s.sigma;
      break;
    case augment::CorruptionKind::kRain:
      j["density"] = s.density;
      j["angle"] = s.angle_deg;
      break;
    case augment::CorruptionKind::kFog:
      j["attenuation"] = s.attenuation;
      j["airlight"] = s.airlight;
      break;
    case augment::CorruptionKind::kBlur:
      j["radius"] = s.radius;
      break;
  }
  if (s.seed != 0) j["seed"] = s.seed;
  return j;
}

}  // namespace

RunConfig::RunConfig()
    : iou_thresholds(DefaultIouThresholds()),
      scale_plan(DefaultScalePlan()),
      corruption_suite(DefaultSuite()) {}

RunConfig ParseRunConfig(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": offset " + std::to_string(e.byte) +
                         ": malformed JSON: " + e.what(),
                     e.byte);
  }
  RunConfig cfg;
  Section top(root, "", source);
  top.U64("seed", &cfg.seed);

  if (const json* v = top.Get("evaluation")) {
    Section s(*v, "evaluation", source);
    if (const json* t = s.Get("iou_thresholds")) {
      if (!t->is_array()) s.Fail("iou_thresholds", "expected an array");
      cfg.iou_thresholds.clear();
      for (const json& e : *t) {
        if (!e.is_number()) s.Fail("iou_thresholds", "expected numbers");
        cfg.iou_thresholds.push_back(e.get<double>());
      }
    }
    s.Finish();
  }

  if (const json* v = top.Get("postprocess")) {
    Section s(*v, "postprocess", source);
    std::string method(ToString(cfg.soft_nms.method));
    s.String("method", &method);
    CheckSection(s, [&] { cfg.soft_nms.method = ParseSuppressionMethod(method); });
    s.Real("iou_threshold", &cfg.soft_nms.iou_threshold);
    s.Real("sigma", &cfg.soft_nms.sigma);
    s.Real("score_floor", &cfg.soft_nms.score_floor);
    s.Finish();
    CheckSection(s, [&] { Validate(cfg.soft_nms); });
  }

  if (const json* v = top.Get("multiscale")) {
    Section s(*v, "multiscale", source);
    if (const json* t = s.Get("short_side_targets")) {
      if (!t->is_array()) s.Fail("short_side_targets", "expected an array");
      cfg.scale_plan.short_side_targets.clear();
      for (const json& e : *t) {
        if (!e.is_number_integer() || e.get<std::int64_t>() <= 0 ||
            e.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
          s.Fail("short_side_targets", "expected positive integers");
        }
        cfg.scale_plan.short_side_targets.push_back(
            static_cast<std::uint32_t>(e.get<std::int64_t>()));
      }
    }
    s.U32("max_long_side", &cfg.scale_plan.max_long_side);
    s.Finish();
    CheckSection(s, [&] { Validate(cfg.scale_plan); });
  }

  if (const json* v = top.Get("augment")) {
    Section s(*v, "augment", source);
    s.String("file_prefix", &cfg.file_prefix);
    if (const json* suite = s.Get("suite")) {
      if (!suite->is_array() || suite->empty()) {
        s.Fail("suite", "expected a nonempty array");
      }
      cfg.corruption_suite.clear();
      for (std::size_t i = 0; i < suite->size(); ++i) {
        cfg.corruption_suite.push_back(ParseCorruption(
            (*suite)[i], s.Child("suite[" + std::to_string(i) + "]"), source));
      }
    }
    s.Finish();
  }

  if (const json* v = top.Get("eqlv2")) {
    Section s(*v, "eqlv2", source);
    s.Real("gamma", &cfg.demo.eql.gamma);
    s.Real("mu", &cfg.demo.eql.mu);
    s.Real("alpha", &cfg.demo.eql.alpha);
    s.Bool("unit_gate", &cfg.demo.eql.unit_gate);
    if (const json* d = s.Get("demo")) {
      Section ds(*d, "eqlv2.demo", source);
      ds.Int("categories_per_group", &cfg.demo.categories_per_group);
      ds.Int("head_samples", &cfg.demo.head_samples);
      ds.Int("mid_samples", &cfg.demo.mid_samples);
      ds.Int("tail_samples", &cfg.demo.tail_samples);
      ds.Int("background_samples", &cfg.demo.background_samples);
      ds.Int("test_samples_per_category", &cfg.demo.test_samples_per_category);
      ds.Real("center_radius", &cfg.demo.center_radius);
      ds.Real("spread", &cfg.demo.spread);
      ds.Int("epochs", &cfg.demo.epochs);
      ds.Int("batch_size", &cfg.demo.batch_size);
      ds.Real("learning_rate", &cfg.demo.learning_rate);
      ds.Finish();
    }
    s.Finish();
    CheckSection(s, [&] { eqlv2::Validate(cfg.demo.eql); });
  }

  if (const json* v = top.Get("simulate")) {
    Section s(*v, "simulate", source);
    s.Int("input_size", &cfg.simulation.input_size);
    s.Int("input_channels", &cfg.simulation.input_channels);
    s.Int("channels", &cfg.simulation.channels);
    s.Int("stages", &cfg.simulation.stages);
    s.Int("unrolls", &cfg.simulation.unrolls);
    s.Finish();
  }

  top.Finish();
  CheckSection(top, [&] { Validate(cfg); });
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  return ParseRunConfig(ReadFileText(path), path.string());
}

std::string SerializeRunConfig(const RunConfig& cfg) {
  json suite = json::array();
  for (const auto& s : cfg.corruption_suite) suite.push_back(CorruptionToJson(s));
  const eqlv2::DemoConfig& d = cfg.demo;
  json root = {
      {"seed", cfg.seed},
      {"evaluation", {{"iou_thresholds", cfg.iou_thresholds}}},
      {"postprocess",
       {{"method", std::string(ToString(cfg.soft_nms.method))},
        {"iou_threshold", cfg.soft_nms.iou_threshold},
        {"sigma", cfg.soft_nms.sigma},
        {"score_floor", cfg.soft_nms.score_floor}}},
      {"multiscale",
       {{"short_side_targets", cfg.scale_plan.short_side_targets},
        {"max_long_side", cfg.scale_plan.max_long_side}}},
      {"augment", {{"file_prefix", cfg.file_prefix}, {"suite", suite}}},
      {"eqlv2",
       {{"gamma", d.eql.gamma},
        {"mu", d.eql.mu},
        {"alpha", d.eql.alpha},
        {"unit_gate", d.eql.unit_gate},
        {"demo",
         {{"categories_per_group", d.categories_per_group},
          {"head_samples", d.head_samples},
          {"mid_samples", d.mid_samples},
          {"tail_samples", d.tail_samples},
          {"background_samples", d.background_samples},
          {"test_samples_per_category", d.test_samples_per_category},
          {"center_radius", d.center_radius},
          {"spread", d.spread},
          {"epochs", d.epochs},
          {"batch_size", d.batch_size},
          {"learning_rate", d.learning_rate}}}}},
      {"simulate",
       {{"input_size", cfg.simulation.input_size},
        {"input_channels", cfg.simulation.input_channels},
        {"channels", cfg.simulation.channels},
        {"stages", cfg.simulation.stages},
        {"unrolls", cfg.simulation.unrolls}}}};
  return root.dump(2) + "\n";
}

void Validate(const RunConfig& cfg) {
  if (cfg.iou_thresholds.empty()) {
    throw InvalidArgument("evaluation.iou_thresholds must not be empty");
  }
  for (std::size_t i = 0; i < cfg.iou_thresholds.size(); ++i) {
    const double t = cfg.iou_thresholds[i];
    if (!(t > 0.0 && t < 1.0)) {
      throw InvalidArgument("evaluation.iou_thresholds entries must lie in (0, 1)");
    }
    if (i > 0 && !(t > cfg.iou_thresholds[i - 1])) {
      throw InvalidArgument("evaluation.iou_thresholds must be strictly increasing");
    }
  }
  Validate(cfg.soft_nms);
  Validate(cfg.scale_plan);
  if (cfg.corruption_suite.empty()) {
    throw InvalidArgument("augment.suite must not be empty");
  }
  for (const auto& s : cfg.corruption_suite) augment::Validate(s);
  eqlv2::Validate(cfg.demo.eql);
}

std::uint64_t ParseSeed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw InvalidArgument("seed must be a nonnegative decimal integer, got '" +
                          text + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno == ERANGE) throw InvalidArgument("seed out of range: " + text);
  return static_cast<std::uint64_t>(v);
}

void ApplySeedFromEnvironment(RunConfig& cfg) {
  if (const char* v = std::getenv(kSeedEnvVar); v != nullptr && *v != '\0') {
    cfg.seed = ParseSeed(v);
  }
}

}  // namespace rld
