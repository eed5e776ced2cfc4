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
#include "rld/dataset.hpp"

#include <sstream>

#include "rld/geometry.hpp"
#include "rld/image_io.hpp"
#include "rld/io.hpp"
#include "rld/random.hpp"

namespace rld {
namespace {

std::string Sanitize(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::uint64_t ImageSeed(std::uint64_t master_seed, std::int64_t image_id) {
  return DeriveSeed(master_seed, static_cast<std::uint64_t>(image_id));
}

CorruptionReport CorruptDataset(const std::filesystem::path& dataset_dir,
                                const std::filesystem::path& out_dir,
                                std::span<const augment::CorruptionSpec> specs,
                                std::uint64_t master_seed,
                                const std::string& file_prefix) {
  if (specs.empty()) throw InvalidArgument("corruption suite is empty");
  for (const auto& s : specs) augment::Validate(s);

  const std::filesystem::path ann_path = dataset_dir / kAnnotationFileName;
  const std::string ann_text = ReadFileText(ann_path);
  AnnotationFile annotations = ParseAnnotations(ann_text, ann_path.string());

  std::filesystem::create_directories(out_dir);
  if (std::filesystem::equivalent(dataset_dir, out_dir)) {
    throw InvalidArgument(
        "output directory must differ from the dataset directory");
  }
  CorruptionReport report;
  report.total_images = annotations.images.size();

  for (std::size_t i = 0; i < annotations.images.size(); ++i) {
    const ImageRecord& im = annotations.images[i];
    augment::CorruptionSpec spec = specs[i % specs.size()];
    spec.seed = ImageSeed(master_seed, im.id);
    try {
      const augment::Image src = ReadPng(dataset_dir / im.file_name);
      const augment::Image dst = augment::ApplyCorruption(src, spec);
      const std::filesystem::path target = out_dir / (file_prefix + im.file_name);
      if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path());
      }
      WritePng(target, dst);
      report.manifest.push_back(
          {im.id, spec.kind, augment::DescribeParams(spec), spec.seed});
    } catch (const IoError& e) {
      report.failures.push_back({im.id, im.file_name, e.what()});
    }
  }

  if (file_prefix.empty()) {
    WriteFileAtomic(out_dir / kAnnotationFileName, ann_text);
  } else {
    for (ImageRecord& im : annotations.images) im.file_name = file_prefix + im.file_name;
    SaveAnnotations(out_dir / kAnnotationFileName, annotations);
  }
  WriteFileAtomic(out_dir / kManifestFileName, FormatManifest(report.manifest));
  WriteFileAtomic(out_dir / kErrorManifestFileName,
                  FormatErrorManifest(report.failures));
  return report;
}

std::string FormatManifest(std::span<const ManifestEntry> entries) {
  std::ostringstream os;
  for (const ManifestEntry& e : entries) {
    os << e.image_id << '\t' << augment::ToString(e.kind) << '\t' << e.params
       << '\t' << e.seed << '\n';
  }
  return os.str();
}

std::string FormatErrorManifest(std::span<const CorruptionFailure> failures) {
  std::ostringstream os;
  for (const CorruptionFailure& f : failures) {
    os << f.image_id << '\t' << Sanitize(f.file_name) << '\t'
       << Sanitize(f.reason) << '\n';
  }
  return os.str();
}

}  // namespace rld
