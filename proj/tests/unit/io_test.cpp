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
#include <gtest/gtest.h>

#include "rld/io.hpp"
#include "support.hpp"

namespace rld {
namespace {

constexpr const char* kMinimal = R"({
  "images": [{"id": 1, "file_name": "a.png", "width": 10, "height": 8}],
  "annotations": [{"id": 5, "image_id": 1, "category_id": 2,
                   "bbox": [1, 2, 3, 4], "area": 12}],
  "categories": [{"id": 2, "name": "acme"}]
})";

TEST(AnnotationsTest, MinimalFileLoads) {
  const AnnotationFile f = ParseAnnotations(kMinimal);
  ASSERT_EQ(f.images.size(), 1u);
  ASSERT_EQ(f.annotations.size(), 1u);
  ASSERT_EQ(f.categories.size(), 1u);
  EXPECT_EQ(f.images[0].file_name, "a.png");
  const auto gt = f.GroundTruth();
  ASSERT_EQ(gt.size(), 1u);
  EXPECT_EQ(gt[0].bbox, (BBox{1, 2, 4, 6}));
  EXPECT_EQ(gt[0].category_id, 2);
  EXPECT_EQ(f.FindImage(1)->width, 10u);
  EXPECT_EQ(f.FindImage(9), nullptr);
}

TEST(AnnotationsTest, AreaDefaultsToBoxArea) {
  const AnnotationFile f = ParseAnnotations(R"({
    "images": [{"id": 1, "file_name": "a.png", "width": 10, "height": 8}],
    "annotations": [{"id": 5, "image_id": 1, "category_id": 2,
                     "bbox": [1, 2, 3, 4]}],
    "categories": [{"id": 2, "name": "acme"}]})");
  EXPECT_EQ(f.annotations[0].area, 12.0);
}

TEST(AnnotationsTest, DanglingImageNamesRecord) {
  const std::string text = R"({
  "images": [{"id": 1, "file_name": "a.png", "width": 10, "height": 8}],
  "annotations": [{"id": 1, "image_id": 1, "category_id": 2, "bbox": [0, 0, 1, 1]},
                  {"id": 77, "image_id": 3, "category_id": 2, "bbox": [0, 0, 1, 1]}],
  "categories": [{"id": 2, "name": "acme"}]
})";
  try {
    ParseAnnotations(text, "ann.json");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("ann.json"), std::string::npos);
    EXPECT_NE(msg.find("annotations[1].image_id"), std::string::npos);
    EXPECT_NE(msg.find("record id 77"), std::string::npos);
    EXPECT_EQ(e.field_path(), "annotations[1].image_id");
    EXPECT_EQ(text.compare(e.offset(), 1, "{"), 0);
    EXPECT_GT(e.offset(), text.find("\"id\": 1, \"image_id\": 1"));
  }
}

TEST(AnnotationsTest, ValidationErrors) {
  const auto expect_field = [](const std::string& text, const std::string& path) {
    try {
      ParseAnnotations(text);
      ADD_FAILURE() << "expected failure for " << path;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field_path(), path);
    }
  };
  expect_field(R"({"images": [], "annotations": [{"id": 1, "image_id": 0,
      "category_id": 0, "bbox": [0, 0, -1, 1]}], "categories": []})",
               "annotations[0].bbox");
  expect_field(R"({"images": [{"id": 1, "file_name": "a", "width": 1, "height": 1},
      {"id": 1, "file_name": "b", "width": 1, "height": 1}],
      "annotations": [], "categories": []})",
               "images[1].id");
  expect_field(R"({"images": [{"id": 1, "file_name": "a", "width": 0, "height": 1}],
      "annotations": [], "categories": []})",
               "images[0].width");
  expect_field(R"({"images": [], "annotations": [], "categories": [{"id": 1}]})",
               "categories[0].name");
  expect_field(R"({"images": [], "categories": []})", "annotations");
}

TEST(AnnotationsTest, MalformedSyntax) {
  try {
    ParseAnnotations("{\"images\": [", "broken.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.json"), std::string::npos);
  }
}

TEST(AnnotationsTest, RoundTrip) {
  testing::TempDir dir;
  testing::WriteFixtureDataset(dir.path(), 6);
  const AnnotationFile a = LoadAnnotations(dir.path() / "annotations.json");
  SaveAnnotations(dir.path() / "copy.json", a);
  const AnnotationFile b = LoadAnnotations(dir.path() / "copy.json");
  EXPECT_EQ(a, b);
  EXPECT_EQ(SerializeAnnotations(a), SerializeAnnotations(b));
}

TEST(AnnotationsTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadAnnotations("/nonexistent/ann.json"), std::runtime_error);
}

TEST(DetectionsTest, ParseAndRoundTrip) {
  const std::string text = R"([
    {"image_id": 1, "category_id": 2, "bbox": [1, 2, 3, 4], "score": 0.5},
    {"image_id": 1, "category_id": 3, "bbox": [0, 0, 2, 2], "score": 1, "scale": 0.8}
  ])";
  const auto d = ParseDetections(text);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].detection.bbox, (BBox{1, 2, 4, 6}));
  EXPECT_FALSE(d[0].scale.has_value());
  EXPECT_EQ(*d[1].scale, 0.8);
  EXPECT_EQ(ParseDetections(SerializeDetections(d)), d);
}

TEST(DetectionsTest, Errors) {
  try {
    ParseDetections(R"([{"image_id": 1, "category_id": 2, "bbox": [1, 2, 3, 4],
                         "score": 1.5}])");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field_path(), "[0].score");
  }
  EXPECT_THROW(ParseDetections(R"({"a": 1})"), ValidationError);
  EXPECT_THROW(ParseDetections(R"([{"image_id": 1, "category_id": 2,
      "bbox": [1, 2, 3, 4], "score": 0.5, "scale": 0}])"),
               ValidationError);
}

TEST(DetectionsTest, UnknownImageRejected) {
  const AnnotationFile f = ParseAnnotations(kMinimal);
  const auto ok = ParseDetections(
      R"([{"image_id": 1, "category_id": 9, "bbox": [1, 2, 3, 4], "score": 0.5}])");
  EXPECT_NO_THROW(CheckDetectionImages(f, ok));
  const auto bad = ParseDetections(
      R"([{"image_id": 4, "category_id": 2, "bbox": [1, 2, 3, 4], "score": 0.5}])");
  try {
    CheckDetectionImages(f, bad, "dets.json");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field_path(), "[0].image_id");
  }
}

}  // namespace
}  // namespace rld
