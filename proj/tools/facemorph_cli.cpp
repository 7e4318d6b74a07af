// facemorph command line: batch cohort analysis, desk-scale shape-model
// training, and single-image landmark extraction.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "facemorph/image_io.hpp"
#include "facemorph/imgops.hpp"
#include "facemorph/landmarks.hpp"
#include "facemorph/pipeline.hpp"
#include "facemorph/shape_model.hpp"

namespace fs = std::filesystem;
using namespace facemorph;

namespace {

BoundingBox parse_bbox(const std::string& s) {
    int x, y, w, h;
    if (std::sscanf(s.c_str(), "%d,%d,%d,%d", &x, &y, &w, &h) != 4)
        throw CLI::ValidationError("--bbox expects x,y,w,h");
    return {x, y, w, h};
}

ShapeTrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;

    ShapeTrainConfig cfg;
    cfg.stages = j.value("stages", cfg.stages);
    cfg.trees_per_stage = j.value("trees_per_stage", cfg.trees_per_stage);
    cfg.tree_depth = j.value("tree_depth", cfg.tree_depth);
    cfg.nu = j.value("nu", cfg.nu);
    cfg.feature_pool_size = j.value("feature_pool_size", cfg.feature_pool_size);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.candidate_splits = j.value("candidate_splits", cfg.candidate_splits);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

// Training pairs: every image with a same-stem landmark JSON. The face box
// is the landmark extent padded by 10% per side.
std::vector<TrainingExample> load_training_dir(const std::string& dir) {
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());

    std::vector<TrainingExample> out;
    for (const fs::path& p : entries) {
        std::string ext = p.extension().string();
        if (ext != ".jpg" && ext != ".jpeg" && ext != ".png") continue;
        fs::path sidecar = p;
        sidecar.replace_extension(".json");
        if (!fs::exists(sidecar)) continue;

        TrainingExample ex;
        ex.image = to_grayscale(load_image(p.string()));
        ex.shape = load_landmarks(sidecar.string());

        double min_x = ex.shape.points[0].x, max_x = min_x;
        double min_y = ex.shape.points[0].y, max_y = min_y;
        for (const Point& pt : ex.shape.points) {
            min_x = std::min(min_x, pt.x);
            max_x = std::max(max_x, pt.x);
            min_y = std::min(min_y, pt.y);
            max_y = std::max(max_y, pt.y);
        }
        const double pad_x = 0.1 * (max_x - min_x);
        const double pad_y = 0.1 * (max_y - min_y);
        ex.box = BoundingBox(static_cast<int>(min_x - pad_x), static_cast<int>(min_y - pad_y),
                             static_cast<int>(max_x - min_x + 2 * pad_x) + 1,
                             static_cast<int>(max_y - min_y + 2 * pad_y) + 1);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"facemorph: facial morphometry batch pipeline"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "compare two cohort directories");
    std::string dir_a, dir_b, config_path, out_dir = "out", bbox_str;
    bool landmarks_only = false;
    analyze->add_option("--cohort-a", dir_a, "first cohort directory")->required();
    analyze->add_option("--cohort-b", dir_b, "second cohort directory")->required();
    analyze->add_option("--config", config_path, "pipeline config JSON");
    analyze->add_option("--bbox", bbox_str, "external face box x,y,w,h (bypasses detection)");
    analyze->add_flag("--landmarks-only", landmarks_only, "ingest only landmark JSON files");
    analyze->add_option("--out", out_dir, "output directory")->required();

    // train-shape
    auto* train = app.add_subcommand("train-shape", "train a landmark localizer");
    std::string train_dir, train_config, model_out;
    train->add_option("--data", train_dir, "directory of images with landmark JSON sidecars")
        ->required();
    train->add_option("--config", train_config, "training config JSON");
    train->add_option("--out", model_out, "output model path")->required();

    // extract
    auto* extract = app.add_subcommand("extract", "locate landmarks on a single image");
    std::string image_path, json_out, ex_config_path, ex_bbox_str;
    extract->add_option("--image", image_path, "input image")->required();
    extract->add_option("--out", json_out, "output landmark JSON")->required();
    extract->add_option("--config", ex_config_path, "pipeline config JSON");
    extract->add_option("--bbox", ex_bbox_str, "external face box x,y,w,h");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
    }

    try {
        if (*analyze) {
            PipelineConfig cfg;
            if (!config_path.empty()) cfg = load_pipeline_config(config_path);
            if (!bbox_str.empty()) {
                cfg.external_bbox = parse_bbox(bbox_str);
                cfg.detector = "external-bbox";
            }
            if (landmarks_only) cfg.landmarks_only = true;
            cfg.output_dir = out_dir;

            auto [report, manifest] = run_pipeline(dir_a, dir_b, cfg);
            const auto written = export_reports(report, manifest, out_dir);
            for (const std::string& path : written) std::cout << path << '\n';

            std::cout << "\nfeature          p-value\n";
            for (const auto& row : report.rows) {
                std::printf("%-12s ", row.feature.c_str());
                if (row.error.empty())
                    std::printf("%12.6g\n", row.test.p);
                else
                    std::printf("   error: %s\n", row.error.c_str());
            }
        } else if (*train) {
            ShapeTrainConfig cfg = ShapeTrainConfig::desk_scale();
            if (!train_config.empty()) cfg = load_train_config(train_config);
            const auto dataset = load_training_dir(train_dir);
            std::cout << "training on " << dataset.size() << " examples\n";
            const ShapeModel model = train_shape_model(dataset, cfg);
            save_shape_model(model, model_out);
            std::printf("training rms error: %.6f (normalized units)\n",
                        std::sqrt(shape_training_error(dataset, model)));
            std::cout << "wrote " << model_out << '\n';
        } else if (*extract) {
            PipelineConfig cfg;
            if (!ex_config_path.empty()) cfg = load_pipeline_config(ex_config_path);
            if (!ex_bbox_str.empty()) {
                cfg.external_bbox = parse_bbox(ex_bbox_str);
                cfg.detector = "external-bbox";
            }
            const LandmarkSet lm = locate_landmarks(image_path, cfg);
            save_landmarks(lm, json_out);
            std::cout << "wrote " << json_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
