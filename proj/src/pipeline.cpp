#include "facemorph/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "facemorph/align.hpp"
#include "facemorph/haar.hpp"
#include "facemorph/image_io.hpp"
#include "facemorph/imgops.hpp"
#include "facemorph/shape_model.hpp"
#include "facemorph/svm.hpp"

namespace fs = std::filesystem;

namespace facemorph {

namespace {

bool has_extension(const fs::path& p, std::initializer_list<const char*> exts) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const char* x : exts)
        if (e == x) return true;
    return false;
}

bool is_image_file(const fs::path& p) { return has_extension(p, {".jpg", ".jpeg", ".png"}); }
bool is_landmark_file(const fs::path& p) { return has_extension(p, {".json"}); }

// Lazily loaded detector/localizer bundle shared across a run.
struct Models {
    std::optional<HaarCascade> cascade;
    std::optional<LinearSvmModel> svm;
    std::optional<ShapeModel> shape5;
    std::optional<ShapeModel> shape68;

    static Models load(const PipelineConfig& cfg) {
        Models m;
        if (!cfg.cascade_model.empty()) m.cascade = load_cascade(cfg.cascade_model);
        if (!cfg.svm_model.empty()) m.svm = load_svm(cfg.svm_model);
        if (!cfg.shape5_model.empty()) m.shape5 = load_shape_model(cfg.shape5_model);
        if (!cfg.shape68_model.empty()) m.shape68 = load_shape_model(cfg.shape68_model);
        return m;
    }
};

// Window sizes covering 35%..90% of the shorter image side.
std::vector<double> scale_ladder(int base_window, int min_dim) {
    std::vector<double> scales;
    for (double frac : {0.35, 0.5, 0.65, 0.8, 0.9}) {
        const double scale = frac * min_dim / base_window;
        if (scale * base_window >= 8.0) scales.push_back(scale);
    }
    return scales;
}

BoundingBox detect_box(const Image& gray, const PipelineConfig& cfg, const Models& models) {
    if (cfg.detector == "external-bbox") {
        if (!cfg.external_bbox) throw std::runtime_error("no bounding box provided");
        return *cfg.external_bbox;
    }
    if (cfg.detector == "haar") {
        if (!models.cascade) throw std::runtime_error("no cascade model configured");
        const IntegralImage ii = integral_image(gray);
        const auto dets = cascade_detect(
            ii, *models.cascade, scale_ladder(models.cascade->base_window,
                                              std::min(gray.width, gray.height)),
            std::max(2, std::min(gray.width, gray.height) / 50));
        if (dets.empty()) throw std::runtime_error("no face detected");
        return dets.front().box;  // highest score; the rest stay in the NMS log
    }
    if (cfg.detector == "hog") {
        if (!models.svm) throw std::runtime_error("no SVM model configured");
        const auto dets = hog_scan(
            gray, *models.svm,
            std::max(2, std::min(gray.width, gray.height) / 50),
            scale_ladder(models.svm->descriptor_config.window_size,
                         std::min(gray.width, gray.height)));
        if (dets.empty()) throw std::runtime_error("no face detected");
        return dets.front().box;
    }
    throw std::runtime_error("unknown detector: " + cfg.detector);
}

LandmarkSet run_image_stages(const Image& input, const PipelineConfig& cfg, const Models& models,
                             ImageRecord* record) {
    auto mark = [record](const char* stage) {
        if (record) record->stages.push_back(stage);
    };

    // stage 1: normalization + coarse face region
    Image gray = to_grayscale(input);
    if (cfg.equalize_before_median) {
        gray = equalize_histogram(gray);
        gray = median_filter(gray, cfg.median_radius);
    } else {
        gray = median_filter(gray, cfg.median_radius);
        gray = equalize_histogram(gray);
    }
    mark("preprocess");

    const BoundingBox box = detect_box(gray, cfg, models);
    if (record) record->bbox = box;
    Image crop = crop_with_margin(gray, box, cfg.margin);
    crop = resize(crop, cfg.working_size, cfg.working_size);
    mark("detect");

    // stage 2: refined detection on the working frame
    BoundingBox face_box(0, 0, crop.width, crop.height);
    if (models.svm && cfg.detector != "hog") {
        const auto dets = hog_scan(crop, *models.svm, std::max(2, cfg.working_size / 40),
                                   scale_ladder(models.svm->descriptor_config.window_size,
                                                cfg.working_size));
        if (!dets.empty()) face_box = dets.front().box;
        mark("refine");
    }

    // stage 3: five-point alignment
    Image aligned = crop;
    if (models.shape5) {
        const LandmarkSet five = predict_shape(crop, face_box, *models.shape5);
        AlignedFace af = align_face(crop, FivePointLandmarks::from_set(five), cfg.working_size);
        aligned = std::move(af.image);
        face_box = BoundingBox(0, 0, aligned.width, aligned.height);
        mark("align");
    }

    // stage 4: dense landmarks
    if (!models.shape68) throw std::runtime_error("no 68pt shape model configured");
    const LandmarkSet landmarks = predict_shape(aligned, face_box, *models.shape68);
    mark("landmarks");
    return landmarks;
}

struct CohortInput {
    std::string path;     // enumerated input
    std::string sidecar;  // landmark JSON next to an image, when present
    bool is_landmarks = false;
};

std::vector<CohortInput> enumerate_cohort(const std::string& dir, bool landmarks_only) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);

    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());

    // landmark JSONs that shadow an image of the same stem act as sidecars
    std::vector<CohortInput> inputs;
    for (const fs::path& p : entries) {
        if (is_image_file(p)) {
            if (landmarks_only) continue;
            CohortInput in;
            in.path = p.string();
            fs::path sidecar = p;
            sidecar.replace_extension(".json");
            if (fs::exists(sidecar)) in.sidecar = sidecar.string();
            inputs.push_back(std::move(in));
        } else if (is_landmark_file(p)) {
            fs::path stem = p;
            bool shadowed = false;
            for (const char* ext : {".jpg", ".jpeg", ".png"}) {
                stem.replace_extension(ext);
                if (fs::exists(stem)) {
                    shadowed = true;
                    break;
                }
            }
            if (shadowed && !landmarks_only) continue;  // consumed by its image
            inputs.push_back({p.string(), "", true});
        }
    }
    return inputs;
}

void process_cohort(const std::vector<CohortInput>& inputs, const std::string& cohort_tag,
                    const PipelineConfig& cfg, const Models& models, Cohort& cohort,
                    RunManifest& manifest) {
    const fs::path lm_dir = fs::path(cfg.output_dir) / "landmarks" / cohort_tag;
    fs::create_directories(lm_dir);

    for (const CohortInput& in : inputs) {
        ImageRecord rec;
        rec.input = in.path;
        rec.cohort = cohort_tag;
        try {
            LandmarkSet lm;
            if (in.is_landmarks) {
                lm = load_landmarks(in.path);
                rec.landmark_file = in.path;
                rec.stages.push_back("landmarks-from-file");
            } else if (!in.sidecar.empty()) {
                lm = load_landmarks(in.sidecar);
                rec.landmark_file = in.sidecar;
                rec.stages.push_back("landmarks-from-file");
            } else {
                const Image img = load_image(in.path);
                lm = run_image_stages(img, cfg, models, &rec);
                const fs::path out = lm_dir / (fs::path(in.path).stem().string() + ".json");
                save_landmarks(lm, out.string());
                rec.landmark_file = out.string();
            }
            rec.features = extract_features(lm, cfg.landmark_map);
            rec.stages.push_back("features");
            rec.status = "ok";
            cohort.feature_rows.push_back(*rec.features);
            cohort.shapes.push_back(std::move(lm));
        } catch (const std::exception& e) {
            rec.status = "failed";
            rec.reason = e.what();
        }
        manifest.images.push_back(std::move(rec));
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void PipelineConfig::validate() const {
    if (margin < 0) throw std::invalid_argument("margin must be >= 0");
    if (working_size < 16) throw std::invalid_argument("working size too small");
    if (median_radius < 1) throw std::invalid_argument("median radius must be >= 1");
    if (detector != "haar" && detector != "hog" && detector != "external-bbox")
        throw std::invalid_argument("unknown detector: " + detector);
    landmark_map.validate();
    auto require = [](const std::string& path, const char* what) {
        if (!path.empty() && !fs::exists(path))
            throw std::invalid_argument(std::string(what) + " does not exist: " + path);
    };
    require(cascade_model, "cascade model");
    require(svm_model, "SVM model");
    require(shape5_model, "5pt shape model");
    require(shape68_model, "68pt shape model");
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;

    PipelineConfig cfg;
    cfg.margin = j.value("margin", cfg.margin);
    cfg.working_size = j.value("working_size", cfg.working_size);
    cfg.detector = j.value("detector", cfg.detector);
    if (j.contains("bbox")) {
        const auto& b = j["bbox"];
        cfg.external_bbox = BoundingBox(b.at(0).get<int>(), b.at(1).get<int>(),
                                        b.at(2).get<int>(), b.at(3).get<int>());
    }
    cfg.cascade_model = j.value("cascade_model", cfg.cascade_model);
    cfg.svm_model = j.value("svm_model", cfg.svm_model);
    cfg.shape5_model = j.value("shape5_model", cfg.shape5_model);
    cfg.shape68_model = j.value("shape68_model", cfg.shape68_model);
    cfg.median_radius = j.value("median_radius", cfg.median_radius);
    cfg.equalize_before_median = j.value("equalize_before_median", cfg.equalize_before_median);
    if (j.contains("t_test")) {
        const std::string v = j["t_test"].get<std::string>();
        if (v == "welch") cfg.t_test = TTestVariant::Welch;
        else if (v == "student") cfg.t_test = TTestVariant::Student;
        else throw std::runtime_error("unknown t_test variant: " + v);
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.landmarks_only = j.value("landmarks_only", cfg.landmarks_only);

    if (j.contains("landmark_map")) {
        const auto& m = j["landmark_map"];
        auto pair_of = [&m](const char* key, std::pair<int, int>& into) {
            if (m.contains(key))
                into = {m[key].at(0).get<int>(), m[key].at(1).get<int>()};
        };
        pair_of("eyes_r1", cfg.landmark_map.eyes_r1);
        pair_of("nose_r2", cfg.landmark_map.nose_r2);
        pair_of("mouth_r3", cfg.landmark_map.mouth_r3);
        pair_of("temples_b1", cfg.landmark_map.temples_b1);
        pair_of("cheekbones_b2", cfg.landmark_map.cheekbones_b2);
        pair_of("jaw_b3", cfg.landmark_map.jaw_b3);
        pair_of("face_width", cfg.landmark_map.face_width);
        pair_of("mouth_vertical", cfg.landmark_map.mouth_vertical);
        if (m.contains("nose_apex")) cfg.landmark_map.nose_apex = m["nose_apex"].get<int>();
        if (m.contains("chin")) cfg.landmark_map.chin = m["chin"].get<int>();
        if (m.contains("brow_left")) cfg.landmark_map.brow_left = m["brow_left"].get<int>();
        if (m.contains("brow_right")) cfg.landmark_map.brow_right = m["brow_right"].get<int>();
    }
    return cfg;
}

std::pair<CohortReport, RunManifest> run_pipeline(const std::string& cohort_a_dir,
                                                  const std::string& cohort_b_dir,
                                                  const PipelineConfig& config) {
    config.validate();
    const Models models = Models::load(config);

    Cohort a, b;
    a.label = fs::path(cohort_a_dir).filename().string();
    b.label = fs::path(cohort_b_dir).filename().string();
    if (a.label.empty()) a.label = "cohort_a";
    if (b.label.empty()) b.label = "cohort_b";
    if (a.label == b.label) b.label += "_b";

    RunManifest manifest;
    process_cohort(enumerate_cohort(cohort_a_dir, config.landmarks_only), "a", config, models, a,
                   manifest);
    process_cohort(enumerate_cohort(cohort_b_dir, config.landmarks_only), "b", config, models, b,
                   manifest);

    if (a.feature_rows.size() < 2 || b.feature_rows.size() < 2)
        throw std::runtime_error("cohort too small");

    return {compare_cohorts(a, b, config.t_test), std::move(manifest)};
}

std::vector<std::string> export_reports(const CohortReport& report, const RunManifest& manifest,
                                        const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory: " + dir);

    std::vector<std::string> written;
    auto open = [&dir](const std::string& name) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
        if (!out) throw std::runtime_error("cannot write report file: " + path);
        return std::make_pair(std::move(out), path);
    };

    {
        auto [out, path] = open("table1.csv");
        out << "feature,p_value,t,df\n";
        for (const FeatureComparison& row : report.rows) {
            if (row.error.empty())
                out << row.feature << ',' << format_double(row.test.p) << ','
                    << format_double(row.test.t) << ',' << format_double(row.test.df) << '\n';
            else
                out << row.feature << ",error,error,error\n";
        }
        written.push_back(path);
    }

    {
        auto [out, path] = open("boxplots.tsv");
        out << "feature\tcohort\twhisker_low\tq1\tmedian\tq3\twhisker_high\toutliers\n";
        for (const FeatureComparison& row : report.rows) {
            if (!row.error.empty()) continue;
            const std::pair<const std::string&, const BoxplotSummary&> sides[] = {
                {report.label_a, row.box_a}, {report.label_b, row.box_b}};
            for (const auto& [label, box] : sides) {
                out << row.feature << '\t' << label << '\t' << format_double(box.whisker_low)
                    << '\t' << format_double(box.q1) << '\t' << format_double(box.median) << '\t'
                    << format_double(box.q3) << '\t' << format_double(box.whisker_high) << '\t';
                for (size_t i = 0; i < box.outliers.size(); ++i) {
                    if (i) out << ';';
                    out << format_double(box.outliers[i]);
                }
                out << '\n';
            }
        }
        written.push_back(path);
    }

    if (report.mean_face_a && report.mean_face_b) {
        auto [out, path] = open("meanface.json");
        nlohmann::json j;
        auto shape_json = [](const std::string& label, const LandmarkSet& lm) {
            nlohmann::json js;
            js["label"] = label;
            js["scheme"] = scheme_name(lm.scheme);
            js["points"] = nlohmann::json::array();
            for (const Point& p : lm.points) js["points"].push_back({p.x, p.y});
            return js;
        };
        j["cohort_a"] = shape_json(report.label_a, *report.mean_face_a);
        j["cohort_b"] = shape_json(report.label_b, *report.mean_face_b);
        out << j.dump(2) << '\n';
        written.push_back(path);
    }

    {
        auto [out, path] = open("manifest.json");
        nlohmann::json j;
        j["images"] = nlohmann::json::array();
        for (const ImageRecord& rec : manifest.images) {
            nlohmann::json jr;
            jr["input"] = rec.input;
            jr["cohort"] = rec.cohort;
            jr["status"] = rec.status;
            if (!rec.reason.empty()) jr["reason"] = rec.reason;
            jr["stages"] = rec.stages;
            if (rec.bbox)
                jr["bbox"] = {rec.bbox->x, rec.bbox->y, rec.bbox->w, rec.bbox->h};
            if (!rec.landmark_file.empty()) jr["landmark_file"] = rec.landmark_file;
            if (rec.features) {
                const auto v = rec.features->values();
                jr["features"] = std::vector<double>(v.begin(), v.end());
            }
            j["images"].push_back(std::move(jr));
        }
        out << j.dump(2) << '\n';
        written.push_back(path);
    }
    return written;
}

LandmarkSet locate_landmarks(const std::string& image_path, const PipelineConfig& config) {
    config.validate();
    const Models models = Models::load(config);
    const Image img = load_image(image_path);
    return run_image_stages(img, config, models, nullptr);
}

}  // namespace facemorph
