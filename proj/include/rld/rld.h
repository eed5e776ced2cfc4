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
/*
 * C interface to the robust logo detection toolkit.
 *
 * Objects are opaque handles created by *_create / *_load functions and
 * released with the matching *_destroy. Every fallible call returns an
 * rld_status; on failure rld_last_error() describes the problem (the message
 * is thread-local and valid until the next failing call on that thread).
 * Strings returned through `char**` out-parameters are owned by the caller
 * and released with rld_string_free().
 */
#ifndef RLD_RLD_H_
#define RLD_RLD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RLD_BUILDING_LIBRARY)
#define RLD_API __declspec(dllexport)
#else
#define RLD_API __declspec(dllimport)
#endif
#else
#define RLD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rld_status {
  RLD_OK = 0,
  RLD_ERROR_INVALID_ARGUMENT = 1,
  RLD_ERROR_PARSE = 2,
  RLD_ERROR_VALIDATION = 3,
  RLD_ERROR_IO = 4,
  /* Some work items failed; the rest completed. */
  RLD_ERROR_PARTIAL = 5,
  /* Every work item failed. */
  RLD_ERROR_TOTAL_FAILURE = 6,
  RLD_ERROR_INTERNAL = 7
} rld_status;

RLD_API const char* rld_last_error(void);
RLD_API const char* rld_status_string(rld_status status);
RLD_API const char* rld_version(void);
RLD_API void rld_string_free(char* s);

/* Corner-corner box in continuous pixel coordinates. */
typedef struct rld_box {
  double x_min;
  double y_min;
  double x_max;
  double y_max;
} rld_box;

typedef struct rld_detection {
  rld_box bbox;
  int64_t category_id;
  double score;
  int64_t image_id;
} rld_detection;

typedef struct rld_ground_truth {
  rld_box bbox;
  int64_t category_id;
  int64_t image_id;
} rld_ground_truth;

RLD_API double rld_box_iou(const rld_box* a, const rld_box* b);

/* ---- Run configuration ------------------------------------------------- */

typedef struct rld_config rld_config;

RLD_API rld_status rld_config_create_default(rld_config** out);
RLD_API rld_status rld_config_load(const char* path, rld_config** out);
RLD_API void rld_config_destroy(rld_config* cfg);
RLD_API uint64_t rld_config_seed(const rld_config* cfg);
RLD_API rld_status rld_config_set_seed(rld_config* cfg, uint64_t seed);
/* Applies the RLD_SEED environment variable, when set. */
RLD_API rld_status rld_config_apply_env_seed(rld_config* cfg);
/* Parses a decimal seed string. */
RLD_API rld_status rld_parse_seed(const char* text, uint64_t* out);
RLD_API rld_status rld_config_to_json(const rld_config* cfg, char** out_text);

/* ---- Annotation files -------------------------------------------------- */

typedef struct rld_annotations rld_annotations;

RLD_API rld_status rld_annotations_load(const char* path,
                                        rld_annotations** out);
RLD_API void rld_annotations_destroy(rld_annotations* ann);
RLD_API size_t rld_annotations_image_count(const rld_annotations* ann);
RLD_API size_t rld_annotations_annotation_count(const rld_annotations* ann);
RLD_API size_t rld_annotations_category_count(const rld_annotations* ann);

/* ---- Detection lists --------------------------------------------------- */

typedef struct rld_detections rld_detections;

RLD_API rld_status rld_detections_create(rld_detections** out);
RLD_API rld_status rld_detections_load(const char* path, rld_detections** out);
RLD_API rld_status rld_detections_save(const rld_detections* dets,
                                       const char* path);
RLD_API void rld_detections_destroy(rld_detections* dets);
RLD_API size_t rld_detections_count(const rld_detections* dets);
RLD_API rld_status rld_detections_get(const rld_detections* dets, size_t index,
                                      rld_detection* out);
/* Scale factor the detection was produced at, or 0 when untagged. */
RLD_API double rld_detections_scale(const rld_detections* dets, size_t index);
/* Appends a detection; pass scale <= 0 for an untagged detection. */
RLD_API rld_status rld_detections_push(rld_detections* dets,
                                       const rld_detection* det, double scale);

/* ---- Evaluation --------------------------------------------------------- */

typedef struct rld_eval_result rld_eval_result;

/* Evaluates detections against the annotation file using the configured IoU
 * thresholds. Detections naming an image absent from the annotation file
 * fail with RLD_ERROR_VALIDATION. */
RLD_API rld_status rld_evaluate(const rld_annotations* ann,
                                const rld_detections* dets,
                                const rld_config* cfg, rld_eval_result** out);
RLD_API rld_status rld_evaluate_arrays(const rld_detection* dets,
                                       size_t num_dets,
                                       const rld_ground_truth* gts,
                                       size_t num_gts,
                                       const double* thresholds,
                                       size_t num_thresholds,
                                       rld_eval_result** out);
RLD_API void rld_eval_result_destroy(rld_eval_result* res);
RLD_API double rld_eval_result_map(const rld_eval_result* res);
RLD_API size_t rld_eval_result_threshold_count(const rld_eval_result* res);
RLD_API double rld_eval_result_threshold(const rld_eval_result* res,
                                         size_t index);
RLD_API double rld_eval_result_map_at(const rld_eval_result* res,
                                      size_t threshold_index);
RLD_API size_t rld_eval_result_category_count(const rld_eval_result* res);
RLD_API int64_t rld_eval_result_category(const rld_eval_result* res,
                                         size_t index);
RLD_API double rld_eval_result_ap(const rld_eval_result* res,
                                  size_t category_index,
                                  size_t threshold_index);
/* Text report; the last line is exactly "mAP <value>". */
RLD_API rld_status rld_eval_result_report(const rld_eval_result* res,
                                          char** out_text);

/* ---- Post-processing ---------------------------------------------------- */

/* Applies the configured suppression per image and category: standard NMS
 * for method "hard", Soft-NMS otherwise. With fuse != 0 every detection must
 * carry a scale tag; boxes are mapped back to the original frame before
 * suppression. */
RLD_API rld_status rld_postprocess(const rld_detections* in,
                                   const rld_config* cfg, int fuse,
                                   rld_detections** out);

/* ---- Corruption --------------------------------------------------------- */

typedef struct rld_corrupt_summary {
  size_t total_images;
  size_t corrupted_images;
  size_t failed_images;
} rld_corrupt_summary;

/* Corrupts a dataset directory into out_dir with the configured suite and
 * seed. Returns RLD_ERROR_PARTIAL or RLD_ERROR_TOTAL_FAILURE when images
 * could not be processed; the summary is filled in either way. */
RLD_API rld_status rld_corrupt_dataset(const char* dataset_dir,
                                       const char* out_dir,
                                       const rld_config* cfg,
                                       rld_corrupt_summary* summary);

/* ---- Multi-scale planning ----------------------------------------------- */

typedef struct rld_scale {
  uint32_t target_short;
  double factor;
  uint32_t width;
  uint32_t height;
} rld_scale;

/* Writes up to `capacity` resolved scales; *count receives the number the
 * plan produces (call with capacity 0 to size the buffer). */
RLD_API rld_status rld_plan_scales(const rld_config* cfg, uint32_t width,
                                   uint32_t height, rld_scale* out,
                                   size_t capacity, size_t* count);

/* ---- Demos -------------------------------------------------------------- */

RLD_API rld_status rld_simulate(const rld_config* cfg, char** out_text);
RLD_API rld_status rld_eql_demo(const rld_config* cfg, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* RLD_RLD_H_ */
