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
#include "rld/io.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "json.hpp"
#include "rld/image_io.hpp"

namespace rld {
namespace {

using nlohmann::json;

// Byte offsets of the elements of the root array, or of the arrays stored
// directly under keys of the root object. Only used to point error messages
// at the offending record.
struct OffsetIndex {
  std::vector<std::size_t> root;
  std::map<std::string, std::vector<std::size_t>> by_key;

  std::size_t Find(const std::string& key, std::size_t index) const {
    const std::vector<std::size_t>* v = &root;
    if (!key.empty()) {
      auto it = by_key.find(key);
      if (it == by_key.end()) return 0;
      v = &it->second;
    }
    return index < v->size() ? (*v)[index] : 0;
  }
};

OffsetIndex IndexOffsets(const std::string& text) {
  OffsetIndex idx;
  std::vector<char> stack;
  std::vector<std::size_t>* tracked = nullptr;
  std::size_t tracked_depth = 0;
  bool expect_element = false;
  bool in_string = false;
  std::size_t string_start = 0;
  std::string last_key;

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
        if (stack.size() == 1 && stack[0] == '{') {
          last_key = text.substr(string_start, i - string_start);
        }
      }
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (tracked != nullptr && expect_element && stack.size() == tracked_depth &&
        c != ']') {
      tracked->push_back(i);
      expect_element = false;
    }
    switch (c) {
      case '"':
        in_string = true;
        string_start = i + 1;
        break;
      case '{':
      case '[':
        stack.push_back(c);
        if (c == '[' && stack.size() == 1) {
          tracked = &idx.root;
          tracked_depth = 1;
          expect_element = true;
        } else if (c == '[' && stack.size() == 2 && stack[0] == '{') {
          tracked = &idx.by_key[last_key];
          tracked_depth = 2;
          expect_element = true;
        }
        break;
      case '}':
      case ']':
        if (tracked != nullptr && stack.size() == tracked_depth) {
          tracked = nullptr;
        }
        if (!stack.empty()) stack.pop_back();
        break;
      case ',':
        if (tracked != nullptr && stack.size() == tracked_depth) {
          expect_element = true;
        }
        break;
      default:
        break;
    }
  }
  return idx;
}

json ParseJson(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": offset " + std::to_string(e.byte) +
                         ": malformed JSON: " + e.what(),
                     e.byte);
  }
}

// Validation context for one record.
class Record {
 public:
  Record(const std::string& source, const OffsetIndex& offsets,
         std::string array_key, std::size_t index, const json& value)
      : source_(source),
        array_key_(std::move(array_key)),
        index_(index),
        offset_(offsets.Find(array_key_, index)),
        value_(value) {}

  [[noreturn]] void Fail(const std::string& field,
                         const std::string& what) const {
    std::string path = array_key_.empty()
                           ? "[" + std::to_string(index_) + "]"
                           : array_key_ + "[" + std::to_string(index_) + "]";
    if (!field.empty()) path += "." + field;
    std::string msg = source_ + ": offset " + std::to_string(offset_) + ": " +
                      path + ": " + what;
    if (value_.is_object() && value_.contains("id") &&
        value_["id"].is_number_integer()) {
      msg += " (record id " + std::to_string(value_["id"].get<std::int64_t>()) +
             ")";
    }
    throw ValidationError(msg, path, offset_);
  }

  const json& Field(const std::string& name) const {
    if (!value_.is_object()) Fail("", "expected an object");
    auto it = value_.find(name);
    if (it == value_.end()) Fail(name, "missing field");
    return *it;
  }

  std::int64_t Int(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_number_integer()) Fail(name, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t NonNegativeInt(const std::string& name) const {
    const std::int64_t v = Int(name);
    if (v < 0) Fail(name, "must be nonnegative");
    return v;
  }

  double Real(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_number()) Fail(name, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) Fail(name, "must be finite");
    return d;
  }

  std::string String(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_string()) Fail(name, "expected a string");
    return v.get<std::string>();
  }

  std::array<double, 4> Xywh(const std::string& name) const {
    const json& v = Field(name);
    if (!v.is_array() || v.size() != 4) {
      Fail(name, "expected [x, y, w, h]");
    }
    std::array<double, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
      if (!v[k].is_number()) Fail(name, "expected [x, y, w, h]");
      out[k] = v[k].get<double>();
      if (!std::isfinite(out[k])) Fail(name, "coordinates must be finite");
    }
    if (out[2] < 0.0 || out[3] < 0.0) {
      Fail(name, "width and height must be nonnegative");
    }
    return out;
  }

  bool Has(const std::string& name) const {
    return value_.is_object() && value_.contains(name);
  }

 private:
  const std::string& source_;
  std::string array_key_;
  std::size_t index_;
  std::size_t offset_;
  const json& value_;
};

const json& TopArray(const json& root, const std::string& key,
                     const std::string& source) {
  auto it = root.find(key);
  if (it == root.end() || !it->is_array()) {
    throw ValidationError(source + ": offset 0: " + key +
                              ": missing or not an array",
                          key, 0);
  }
  return *it;
}

}  // namespace

std::vector<GroundTruthBox> AnnotationFile::GroundTruth() const {
  std::vector<GroundTruthBox> out;
  out.reserve(annotations.size());
  for (const AnnotationRecord& a : annotations) {
    out.push_back({FromXywh(a.bbox[0], a.bbox[1], a.bbox[2], a.bbox[3]),
                   a.category_id, a.image_id});
  }
  return out;
}

const ImageRecord* AnnotationFile::FindImage(std::int64_t id) const {
  for (const ImageRecord& im : images) {
    if (im.id == id) return &im;
  }
  return nullptr;
}

AnnotationFile ParseAnnotations(const std::string& text,
                                const std::string& source) {
  const json root = ParseJson(text, source);
  if (!root.is_object()) {
    throw ValidationError(source + ": offset 0: root must be an object", "",
                          0);
  }
  const OffsetIndex offsets = IndexOffsets(text);
  AnnotationFile file;

  std::set<std::int64_t> image_ids;
  const json& images = TopArray(root, "images", source);
  for (std::size_t i = 0; i < images.size(); ++i) {
    Record r(source, offsets, "images", i, images[i]);
    ImageRecord im;
    im.id = r.NonNegativeInt("id");
    im.file_name = r.String("file_name");
    const std::int64_t w = r.Int("width");
    const std::int64_t h = r.Int("height");
    if (w < 1 || w > std::numeric_limits<std::uint32_t>::max()) {
      r.Fail("width", "must be a positive integer");
    }
    if (h < 1 || h > std::numeric_limits<std::uint32_t>::max()) {
      r.Fail("height", "must be a positive integer");
    }
    im.width = static_cast<std::uint32_t>(w);
    im.height = static_cast<std::uint32_t>(h);
    if (!image_ids.insert(im.id).second) r.Fail("id", "duplicate image id");
    file.images.push_back(std::move(im));
  }

  std::set<std::int64_t> category_ids;
  const json& categories = TopArray(root, "categories", source);
  for (std::size_t i = 0; i < categories.size(); ++i) {
    Record r(source, offsets, "categories", i, categories[i]);
    CategoryRecord c;
    c.id = r.NonNegativeInt("id");
    c.name = r.String("name");
    if (!category_ids.insert(c.id).second) {
      r.Fail("id", "duplicate category id");
    }
    file.categories.push_back(std::move(c));
  }

  std::set<std::int64_t> annotation_ids;
  const json& annotations = TopArray(root, "annotations", source);
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    Record r(source, offsets, "annotations", i, annotations[i]);
    AnnotationRecord a;
    a.id = r.NonNegativeInt("id");
    a.image_id = r.NonNegativeInt("image_id");
    a.category_id = r.NonNegativeInt("category_id");
    a.bbox = r.Xywh("bbox");
    a.area = r.Has("area") ? r.Real("area") : a.bbox[2] * a.bbox[3];
    if (!annotation_ids.insert(a.id).second) {
      r.Fail("id", "duplicate annotation id");
    }
    if (!image_ids.contains(a.image_id)) {
      r.Fail("image_id", "image " + std::to_string(a.image_id) +
                             " does not exist");
    }
    if (!category_ids.contains(a.category_id)) {
      r.Fail("category_id", "category " + std::to_string(a.category_id) +
                                " does not exist");
    }
    file.annotations.push_back(a);
  }
  return file;
}

AnnotationFile LoadAnnotations(const std::filesystem::path& path) {
  return ParseAnnotations(ReadFileText(path), path.string());
}

std::string SerializeAnnotations(const AnnotationFile& file) {
  json root = json::object();
  root["images"] = json::array();
  for (const ImageRecord& im : file.images) {
    root["images"].push_back({{"id", im.id},
                              {"file_name", im.file_name},
                              {"width", im.width},
                              {"height", im.height}});
  }
  root["annotations"] = json::array();
  for (const AnnotationRecord& a : file.annotations) {
    root["annotations"].push_back({{"id", a.id},
                                   {"image_id", a.image_id},
                                   {"category_id", a.category_id},
                                   {"bbox", a.bbox},
                                   {"area", a.area}});
  }
  root["categories"] = json::array();
  for (const CategoryRecord& c : file.categories) {
    root["categories"].push_back({{"id", c.id}, {"name", c.name}});
  }
  return root.dump(2) + "\n";
}

void SaveAnnotations(const std::filesystem::path& path,
                     const AnnotationFile& file) {
  WriteFileAtomic(path, SerializeAnnotations(file));
}

std::vector<DetectionRecord> ParseDetections(const std::string& text,
                                             const std::string& source) {
  const json root = ParseJson(text, source);
  if (!root.is_array()) {
    throw ValidationError(source + ": offset 0: root must be an array", "", 0);
  }
  const OffsetIndex offsets = IndexOffsets(text);
  std::vector<DetectionRecord> out;
  out.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    Record r(source, offsets, "", i, root[i]);
    DetectionRecord d;
    d.detection.image_id = r.NonNegativeInt("image_id");
    d.detection.category_id = r.NonNegativeInt("category_id");
    const auto xywh = r.Xywh("bbox");
    d.detection.bbox = FromXywh(xywh[0], xywh[1], xywh[2], xywh[3]);
    d.detection.score = r.Real("score");
    if (d.detection.score < 0.0 || d.detection.score > 1.0) {
      r.Fail("score", "must lie in [0, 1]");
    }
    if (r.Has("scale")) {
      const double s = r.Real("scale");
      if (!(s > 0.0)) r.Fail("scale", "must be positive");
      d.scale = s;
    }
    out.push_back(d);
  }
  return out;
}

std::vector<DetectionRecord> LoadDetections(const std::filesystem::path& path) {
  return ParseDetections(ReadFileText(path), path.string());
}

std::string SerializeDetections(const std::vector<DetectionRecord>& dets) {
  json root = json::array();
  for (const DetectionRecord& d : dets) {
    json item = {{"image_id", d.detection.image_id},
                 {"category_id", d.detection.category_id},
                 {"bbox", ToXywh(d.detection.bbox)},
                 {"score", d.detection.score}};
    if (d.scale) item["scale"] = *d.scale;
    root.push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

void SaveDetections(const std::filesystem::path& path,
                    const std::vector<DetectionRecord>& dets) {
  WriteFileAtomic(path, SerializeDetections(dets));
}

void CheckDetectionImages(const AnnotationFile& annotations,
                          const std::vector<DetectionRecord>& dets,
                          const std::string& source) {
  std::set<std::int64_t> ids;
  for (const ImageRecord& im : annotations.images) ids.insert(im.id);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!ids.contains(dets[i].detection.image_id)) {
      const std::string path = "[" + std::to_string(i) + "].image_id";
      throw ValidationError(
          source + ": " + path + ": image " +
              std::to_string(dets[i].detection.image_id) +
              " is not in the annotation file",
          path, 0);
    }
  }
}

}  // namespace rld
