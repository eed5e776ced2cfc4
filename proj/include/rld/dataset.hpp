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
#ifndef RLD_DATASET_HPP_
#define RLD_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rld/augment.hpp"

namespace rld {

// Layout of a dataset directory: an annotation file plus the images it
// references, with file names relative to the directory.
inline constexpr const char* kAnnotationFileName = "annotations.json";
inline constexpr const char* kManifestFileName = "manifest.tsv";
inline constexpr const char* kErrorManifestFileName = "errors.tsv";

struct ManifestEntry {
  std::int64_t image_id = 0;
  augment::CorruptionKind kind = augment::CorruptionKind::kGaussianNoise;
  std::string params;
  std::uint64_t seed = 0;
};

struct CorruptionFailure {
  std::int64_t image_id = 0;
  std::string file_name;
  std::string reason;
};

struct CorruptionReport {
  std::size_t total_images = 0;
  std::vector<ManifestEntry> manifest;
  std::vector<CorruptionFailure> failures;
};

// Per-image seed for corrupting image `image_id` under `master_seed`.
std::uint64_t ImageSeed(std::uint64_t master_seed, std::int64_t image_id);

// Corrupts every image of the dataset at `dataset_dir` into `out_dir`.
// Image i (in annotation-file order) uses specs[i % specs.size()] with its
// seed replaced by ImageSeed(master_seed, image_id). Output images keep their
// relative names, prefixed by `file_prefix`. With an empty prefix the
// annotation file is copied byte for byte; otherwise only file names change.
// Unreadable images are recorded as failures and skipped. Writes the
// manifest and error manifest next to the images.
//
// Throws ValidationError/ParseError for a bad annotation file and
// InvalidArgument for an empty or invalid suite.
CorruptionReport CorruptDataset(const std::filesystem::path& dataset_dir,
                                const std::filesystem::path& out_dir,
                                std::span<const augment::CorruptionSpec> specs,
                                std::uint64_t master_seed,
                                const std::string& file_prefix = "");

// One tab-separated line per entry: image_id, kind, params, seed.
std::string FormatManifest(std::span<const ManifestEntry> entries);
// One tab-separated line per failure: image_id, file_name, reason.
std::string FormatErrorManifest(std::span<const CorruptionFailure> failures);

}  // namespace rld

#endif  // RLD_DATASET_HPP_
