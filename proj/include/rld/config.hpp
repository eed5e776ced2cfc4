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
#ifndef RLD_CONFIG_HPP_
#define RLD_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rld/augment.hpp"
#include "rld/eqlv2.hpp"
#include "rld/multiscale.hpp"
#include "rld/network_sim.hpp"
#include "rld/postprocess.hpp"

namespace rld {

// Environment variable that overrides RunConfig::seed.
inline constexpr const char* kSeedEnvVar = "RLD_SEED";

// Artifact-wide settings, one JSON section per module:
//
//   {
//     "seed": 7,
//     "evaluation":  {"iou_thresholds": [0.5, ...]},
//     "postprocess": {"method": "gaussian", "iou_threshold": 0.5,
//                     "sigma": 0.5, "score_floor": 0.001},
//     "multiscale":  {"short_side_targets": [800, ...], "max_long_side": 1333},
//     "augment":     {"file_prefix": "", "suite": [{"kind": "fog", ...}]},
//     "eqlv2":       {"gamma": 12, "mu": 0.8, "alpha": 4, "demo": {...}},
//     "simulate":    {"input_size": 32, "channels": 4, "stages": 3, ...}
//   }
//
// Every section and key is optional; unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<double> iou_thresholds;
  SoftNmsConfig soft_nms;
  ScalePlan scale_plan;
  std::vector<augment::CorruptionSpec> corruption_suite;
  std::string file_prefix;
  eqlv2::DemoConfig demo;
  sim::SimulationConfig simulation;

  RunConfig();
};

// Throws ValidationError (rld/io.hpp) naming the offending key path, or
// ParseError on malformed JSON.
RunConfig ParseRunConfig(const std::string& text,
                         const std::string& source = "<config>");
RunConfig LoadRunConfig(const std::filesystem::path& path);
std::string SerializeRunConfig(const RunConfig& cfg);

// Checks every nested invariant; throws InvalidArgument.
void Validate(const RunConfig& cfg);

// Parses a decimal seed override. Throws InvalidArgument when the text is not
// an unsigned 64-bit integer.
std::uint64_t ParseSeed(const std::string& text);

// Applies the seed environment variable when it is set.
void ApplySeedFromEnvironment(RunConfig& cfg);

}  // namespace rld

#endif  // RLD_CONFIG_HPP_
