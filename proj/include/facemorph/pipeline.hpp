#ifndef FACEMORPH_PIPELINE_HPP
#define FACEMORPH_PIPELINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "facemorph/geometry.hpp"
#include "facemorph/morphometrics.hpp"
#include "facemorph/stats.hpp"

namespace facemorph {

struct PipelineConfig {
    int margin = 30;                       // crop extension around the detected box
    int working_size = 600;                // square working frame
    std::string detector = "external-bbox";  // "haar" | "hog" | "external-bbox"
    std::optional<BoundingBox> external_bbox;
    std::string cascade_model;             // Haar cascade JSON, for detector "haar"
    std::string svm_model;                 // HOG/SVM JSON, for detector "hog" and refinement
    std::string shape5_model;              // 5pt localizer for alignment
    std::string shape68_model;             // 68pt localizer
    LandmarkIndexMap landmark_map;
    int median_radius = 1;
    bool equalize_before_median = true;    // stage-1 order flag
    TTestVariant t_test = TTestVariant::Welch;
    std::string output_dir = "out";
    bool landmarks_only = false;           // ingest only landmark JSON files

    void validate() const;
};

PipelineConfig load_pipeline_config(const std::string& path);

struct ImageRecord {
    std::string input;          // path as enumerated
    std::string cohort;         // "a" or "b"
    std::string status;         // "ok" | "failed"
    std::string reason;         // machine-readable failure reason
    std::vector<std::string> stages;  // completed stage names, in order
    std::optional<BoundingBox> bbox;
    std::string landmark_file;  // written (image path) or consumed (landmark path)
    std::optional<FeatureVector> features;
};

struct RunManifest {
    std::vector<ImageRecord> images;  // one row per input, enumeration order
};

// Executes stages 1-6 over two cohort directories. Image files run the full
// chain; landmark JSON files (standalone or sidecar to an image) skip stages
// 1-4. Per-image failures are recorded without aborting the run; a cohort
// left with fewer than 2 rows throws "cohort too small". Deterministic for
// fixed inputs and config.
std::pair<CohortReport, RunManifest> run_pipeline(const std::string& cohort_a_dir,
                                                  const std::string& cohort_b_dir,
                                                  const PipelineConfig& config);

// Writes table1.csv, boxplots.tsv, manifest.json and, when mean faces are
// present, meanface.json. Returns the written paths. Byte-stable across
// reruns with identical inputs.
std::vector<std::string> export_reports(const CohortReport& report, const RunManifest& manifest,
                                        const std::string& dir);

// Stages 1-4 for a single image: detection (or the supplied box), crop,
// alignment when a 5pt model is configured, and 68pt localization.
LandmarkSet locate_landmarks(const std::string& image_path, const PipelineConfig& config);

}  // namespace facemorph

#endif
