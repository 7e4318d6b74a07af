#include "facemorph/haar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace facemorph {

namespace {

// Pixel-aligned rectangle of a unit-window rect scaled into `window`.
BoundingBox scale_rect(const WeightedRect& r, const BoundingBox& window) {
    const int x0 = window.x + static_cast<int>(std::lround(r.x * window.w));
    const int y0 = window.y + static_cast<int>(std::lround(r.y * window.h));
    const int x1 = window.x + static_cast<int>(std::lround((r.x + r.w) * window.w));
    const int y1 = window.y + static_cast<int>(std::lround((r.y + r.h) * window.h));
    return {x0, y0, x1 - x0, y1 - y0};
}

// Stage sum when the window passes, NaN-free early exit otherwise.
bool eval_stages(const IntegralImage& ii, const HaarCascade& cascade,
                 const BoundingBox& window, double& total) {
    total = 0.0;
    for (const HaarStage& stage : cascade.stages) {
        double sum = 0.0;
        for (const HaarStump& stump : stage.stumps) {
            const double v = haar_feature_value(ii, stump.feature, window);
            sum += v < stump.threshold ? stump.left_value : stump.right_value;
        }
        if (sum < stage.threshold) return false;
        total += sum;
    }
    return true;
}

}  // namespace

double haar_feature_value(const IntegralImage& ii, const HaarFeature& f, const BoundingBox& window) {
    if (f.rects.size() < 2) throw std::invalid_argument("invalid feature geometry");
    double value = 0.0;
    for (const WeightedRect& r : f.rects) {
        const BoundingBox sr = scale_rect(r, window);
        if (sr.w < 0 || sr.h < 0 || sr.x < window.x || sr.y < window.y ||
            sr.right() > window.right() || sr.bottom() > window.bottom())
            throw std::invalid_argument("invalid feature geometry");
        if (sr.w == 0 || sr.h == 0) continue;  // rounded away at this scale
        value += r.weight * static_cast<double>(ii.rect_sum(sr));
    }
    return value;
}

std::vector<Detection> non_max_suppression(std::vector<Detection> dets, double iou_threshold) {
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Detection& a, const Detection& b) { return a.score > b.score; });
    std::vector<Detection> kept;
    for (const Detection& d : dets) {
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (iou(d.box, k.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

std::vector<Detection> cascade_detect(const IntegralImage& ii, const HaarCascade& cascade,
                                      const std::vector<double>& scales, int step,
                                      double iou_threshold) {
    if (cascade.stages.empty()) throw std::invalid_argument("empty cascade");
    if (scales.empty()) throw std::invalid_argument("empty scale list");
    if (step < 1) throw std::invalid_argument("step must be >= 1");

    std::vector<Detection> hits;
    for (double scale : scales) {
        const int win = static_cast<int>(std::lround(cascade.base_window * scale));
        if (win < 1 || win > ii.width || win > ii.height) continue;
        for (int y = 0; y + win <= ii.height; y += step) {
            for (int x = 0; x + win <= ii.width; x += step) {
                const BoundingBox window(x, y, win, win);
                double score = 0.0;
                if (eval_stages(ii, cascade, window, score))
                    hits.push_back({window, score});
            }
        }
    }
    return non_max_suppression(std::move(hits), iou_threshold);
}

HaarCascade load_cascade(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cascade file: " + path);
    nlohmann::json j;
    in >> j;

    HaarCascade cascade;
    cascade.base_window = j.value("base_window", 24);
    for (const auto& js : j.at("stages")) {
        HaarStage stage;
        stage.threshold = js.at("threshold").get<double>();
        for (const auto& jt : js.at("stumps")) {
            HaarStump stump;
            stump.threshold = jt.at("threshold").get<double>();
            stump.left_value = jt.at("left").get<double>();
            stump.right_value = jt.at("right").get<double>();
            for (const auto& jr : jt.at("rects")) {
                WeightedRect r;
                r.x = jr.at("x").get<double>();
                r.y = jr.at("y").get<double>();
                r.w = jr.at("w").get<double>();
                r.h = jr.at("h").get<double>();
                r.weight = jr.at("weight").get<double>();
                stump.feature.rects.push_back(r);
            }
            if (stump.feature.rects.size() < 2)
                throw std::runtime_error("cascade stump with fewer than 2 rects: " + path);
            stage.stumps.push_back(std::move(stump));
        }
        cascade.stages.push_back(std::move(stage));
    }
    if (cascade.stages.empty()) throw std::runtime_error("empty cascade: " + path);
    return cascade;
}

void save_cascade(const HaarCascade& cascade, const std::string& path) {
    nlohmann::json j;
    j["base_window"] = cascade.base_window;
    j["stages"] = nlohmann::json::array();
    for (const HaarStage& stage : cascade.stages) {
        nlohmann::json js;
        js["threshold"] = stage.threshold;
        js["stumps"] = nlohmann::json::array();
        for (const HaarStump& stump : stage.stumps) {
            nlohmann::json jt;
            jt["threshold"] = stump.threshold;
            jt["left"] = stump.left_value;
            jt["right"] = stump.right_value;
            jt["rects"] = nlohmann::json::array();
            for (const WeightedRect& r : stump.feature.rects)
                jt["rects"].push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}, {"weight", r.weight}});
            js["stumps"].push_back(std::move(jt));
        }
        j["stages"].push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cascade file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace facemorph
