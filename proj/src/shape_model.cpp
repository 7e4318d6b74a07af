#include "facemorph/shape_model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace facemorph {

namespace detail {

std::vector<Point> normalize_to_box(const std::vector<Point>& pts, const BoundingBox& box) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts)
        out.push_back({(p.x - box.x) / box.w, (p.y - box.y) / box.h});
    return out;
}

std::vector<Point> denormalize_from_box(const std::vector<Point>& pts, const BoundingBox& box) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts)
        out.push_back({box.x + p.x * box.w, box.y + p.y * box.h});
    return out;
}

}  // namespace detail

const std::vector<double>& RegressionTree::predict(const std::vector<double>& pixel_values) const {
    size_t i = 0;
    while (i < splits.size()) {
        const SplitFeature& s = splits[i];
        i = pixel_values[s.idx1] - pixel_values[s.idx2] > s.threshold ? 2 * i + 1 : 2 * i + 2;
    }
    return leaves[i - splits.size()];
}

std::vector<double> sample_indexed_pixels(const Image& img, const BoundingBox& box,
                                          const std::vector<Point>& estimate,
                                          const std::vector<Point>& mean_shape,
                                          const std::vector<PixelAnchor>& anchors) {
    if (img.channels != 1) throw std::invalid_argument("shape regression expects 1 channel");
    if (estimate.size() != mean_shape.size())
        throw std::invalid_argument("estimate/mean shape size mismatch");

    // only the rotation/scale part of the warp applies to anchor offsets
    const SimilarityTransform warp = find_similarity(mean_shape, estimate);
    const double c = std::cos(warp.rotation) * warp.scale;
    const double s = std::sin(warp.rotation) * warp.scale;

    std::vector<double> values;
    values.reserve(anchors.size());
    for (const PixelAnchor& a : anchors) {
        if (a.landmark < 0 || a.landmark >= static_cast<int>(estimate.size()))
            throw std::invalid_argument("anchor references invalid landmark index");
        const Point warped{c * a.offset.x - s * a.offset.y, s * a.offset.x + c * a.offset.y};
        const Point norm = estimate[a.landmark] + warped;
        const long px = std::lround(box.x + norm.x * box.w);
        const long py = std::lround(box.y + norm.y * box.h);
        if (px < 0 || py < 0 || px >= img.width || py >= img.height) {
            values.push_back(0.0);
        } else {
            values.push_back(static_cast<double>(img.at(static_cast<int>(px), static_cast<int>(py))));
        }
    }
    return values;
}

LandmarkSet predict_shape(const Image& img, const BoundingBox& box, const ShapeModel& model) {
    if (!box.valid()) throw std::invalid_argument("invalid bounding box");
    if (model.mean_shape.empty()) throw std::invalid_argument("model has no mean shape");

    std::vector<Point> shape = model.mean_shape;  // normalized frame
    for (const CascadeStage& stage : model.stages) {
        const std::vector<double> pix =
            sample_indexed_pixels(img, box, shape, model.mean_shape, stage.anchors);
        for (const RegressionTree& tree : stage.trees) {
            const std::vector<double>& leaf = tree.predict(pix);
            for (size_t i = 0; i < shape.size(); ++i) {
                shape[i].x += model.nu * leaf[2 * i];
                shape[i].y += model.nu * leaf[2 * i + 1];
            }
        }
    }

    LandmarkSet out;
    out.scheme = model.scheme;
    out.points = detail::denormalize_from_box(shape, box);
    out.validate();
    return out;
}

LandmarkSet mean_shape(const std::vector<LandmarkSet>& shapes) {
    if (shapes.empty()) throw std::invalid_argument("no shapes");
    const LandmarkScheme scheme = shapes.front().scheme;
    const size_t n = shapes.front().points.size();
    std::vector<Point> acc(n);
    for (const LandmarkSet& s : shapes) {
        if (s.scheme != scheme || s.points.size() != n)
            throw std::invalid_argument("scheme mismatch");
        for (size_t i = 0; i < n; ++i) acc[i] += s.points[i];
    }
    const double inv = 1.0 / static_cast<double>(shapes.size());
    for (Point& p : acc) p = p * inv;
    return LandmarkSet(scheme, std::move(acc));
}

ShapeModel load_shape_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open shape model file: " + path);
    nlohmann::json j;
    in >> j;

    ShapeModel model;
    model.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    model.nu = j.at("nu").get<double>();
    for (const auto& jp : j.at("mean_shape"))
        model.mean_shape.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});

    for (const auto& js : j.at("stages")) {
        CascadeStage stage;
        for (const auto& ja : js.at("anchors")) {
            PixelAnchor a;
            a.landmark = ja.at("landmark").get<int>();
            a.offset = {ja.at("offset").at(0).get<double>(), ja.at("offset").at(1).get<double>()};
            stage.anchors.push_back(a);
        }
        for (const auto& jt : js.at("trees")) {
            RegressionTree tree;
            for (const auto& jsp : jt.at("splits"))
                tree.splits.push_back({jsp.at("idx1").get<int>(), jsp.at("idx2").get<int>(),
                                       jsp.at("threshold").get<double>()});
            for (const auto& jl : jt.at("leaves"))
                tree.leaves.push_back(jl.get<std::vector<double>>());
            if (tree.leaves.size() != tree.splits.size() + 1)
                throw std::runtime_error("malformed regression tree in " + path);
            stage.trees.push_back(std::move(tree));
        }
        model.stages.push_back(std::move(stage));
    }
    return model;
}

void save_shape_model(const ShapeModel& model, const std::string& path) {
    nlohmann::json j;
    j["scheme"] = scheme_name(model.scheme);
    j["nu"] = model.nu;
    j["mean_shape"] = nlohmann::json::array();
    for (const Point& p : model.mean_shape) j["mean_shape"].push_back({p.x, p.y});

    j["stages"] = nlohmann::json::array();
    for (const CascadeStage& stage : model.stages) {
        nlohmann::json js;
        js["anchors"] = nlohmann::json::array();
        for (const PixelAnchor& a : stage.anchors)
            js["anchors"].push_back({{"landmark", a.landmark}, {"offset", {a.offset.x, a.offset.y}}});
        js["trees"] = nlohmann::json::array();
        for (const RegressionTree& tree : stage.trees) {
            nlohmann::json jt;
            jt["splits"] = nlohmann::json::array();
            for (const SplitFeature& s : tree.splits)
                jt["splits"].push_back({{"idx1", s.idx1}, {"idx2", s.idx2}, {"threshold", s.threshold}});
            jt["leaves"] = tree.leaves;
            js["trees"].push_back(std::move(jt));
        }
        j["stages"].push_back(std::move(js));
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write shape model file: " + path);
    out << j.dump() << '\n';
}

}  // namespace facemorph
