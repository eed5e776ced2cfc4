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
#ifndef RLD_IO_HPP_
#define RLD_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rld/geometry.hpp"

namespace rld {

// Malformed JSON. `offset` is the byte position reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed JSON that violates a schema invariant. The message names the
// file, the byte offset of the offending record, the field path and (when it
// has one) the record id.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& msg, std::string field_path,
                  std::size_t offset)
      : std::runtime_error(msg),
        field_path_(std::move(field_path)),
        offset_(offset) {}
  const std::string& field_path() const { return field_path_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string field_path_;
  std::size_t offset_;
};

struct ImageRecord {
  std::int64_t id = 0;
  std::string file_name;
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  bool operator==(const ImageRecord&) const = default;
};

struct AnnotationRecord {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  // [x, y, w, h].
  std::array<double, 4> bbox{};
  double area = 0.0;

  bool operator==(const AnnotationRecord&) const = default;
};

struct CategoryRecord {
  std::int64_t id = 0;
  std::string name;

  bool operator==(const CategoryRecord&) const = default;
};

// COCO-style annotation file.
struct AnnotationFile {
  std::vector<ImageRecord> images;
  std::vector<AnnotationRecord> annotations;
  std::vector<CategoryRecord> categories;

  std::vector<GroundTruthBox> GroundTruth() const;
  const ImageRecord* FindImage(std::int64_t id) const;

  bool operator==(const AnnotationFile&) const = default;
};

// `source` labels error messages (usually the file path).
AnnotationFile ParseAnnotations(const std::string& text,
                                const std::string& source = "<memory>");
AnnotationFile LoadAnnotations(const std::filesystem::path& path);
std::string SerializeAnnotations(const AnnotationFile& file);
void SaveAnnotations(const std::filesystem::path& path,
                     const AnnotationFile& file);

struct DetectionRecord {
  Detection detection;
  // Resize factor the detection was produced at, for multi-scale fusion.
  std::optional<double> scale;

  bool operator==(const DetectionRecord&) const = default;
};

std::vector<DetectionRecord> ParseDetections(
    const std::string& text, const std::string& source = "<memory>");
std::vector<DetectionRecord> LoadDetections(const std::filesystem::path& path);
std::string SerializeDetections(const std::vector<DetectionRecord>& dets);
void SaveDetections(const std::filesystem::path& path,
                    const std::vector<DetectionRecord>& dets);

// Throws ValidationError naming the first detection whose image id is not in
// the annotation file.
void CheckDetectionImages(const AnnotationFile& annotations,
                          const std::vector<DetectionRecord>& dets,
                          const std::string& source = "<detections>");

}  // namespace rld

#endif  // RLD_IO_HPP_
