#include "facemorph/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "facemorph/rng.hpp"

namespace facemorph {

double LinearSvmModel::score(const std::vector<double>& descriptor) const {
    if (descriptor.size() != weights.size())
        throw std::invalid_argument("model/descriptor mismatch");
    double s = bias;
    for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * descriptor[i];
    return s;
}

SvmTrainResult train_linear_svm(const std::vector<HogDescriptor>& positives,
                                const std::vector<HogDescriptor>& negatives,
                                double C, int epochs, std::uint64_t seed) {
    if (positives.empty() || negatives.empty())
        throw std::invalid_argument("need at least one positive and one negative");
    if (C <= 0.0) throw std::invalid_argument("C must be positive");

    const size_t dim = positives.front().vector.size();
    std::vector<const std::vector<double>*> xs;
    std::vector<double> ys;
    for (const auto& d : positives) { xs.push_back(&d.vector); ys.push_back(1.0); }
    for (const auto& d : negatives) { xs.push_back(&d.vector); ys.push_back(-1.0); }
    for (const auto* x : xs)
        if (x->size() != dim) throw std::invalid_argument("model/descriptor mismatch");

    if (positives.size() == negatives.size()) {
        auto sorted_copy = [](const std::vector<HogDescriptor>& v) {
            std::vector<std::vector<double>> out;
            out.reserve(v.size());
            for (const auto& d : v) out.push_back(d.vector);
            std::sort(out.begin(), out.end());
            return out;
        };
        if (sorted_copy(positives) == sorted_copy(negatives))
            throw std::invalid_argument("inseparable degenerate data");
    }

    const size_t n = xs.size();
    const double lambda = 1.0 / (C * static_cast<double>(n));

    // bias folded in as a constant augmented feature so the 1/(lambda t)
    // schedule stays stable from the first steps
    std::vector<double> w(dim + 1, 0.0);
    Rng rng(seed);
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const std::vector<double>& x = *xs[idx];
            const double y = ys[idx];
            double margin = w[dim];
            for (size_t i = 0; i < dim; ++i) margin += w[i] * x[i];
            margin *= y;

            const double shrink = 1.0 - eta * lambda;
            for (double& wi : w) wi *= shrink;
            if (margin < 1.0) {
                for (size_t i = 0; i < dim; ++i) w[i] += eta * y * x[i];
                w[dim] += eta * y;
            }
        }
    }

    SvmTrainResult result;
    result.model.bias = w[dim];
    w.pop_back();
    result.model.weights = std::move(w);
    result.model.descriptor_config = positives.front().config;

    size_t correct = 0;
    for (size_t i = 0; i < n; ++i)
        if (result.model.score(*xs[i]) * ys[i] > 0.0) ++correct;
    result.training_accuracy = static_cast<double>(correct) / static_cast<double>(n);
    return result;
}

std::vector<Detection> hog_scan(const Image& img, const LinearSvmModel& model,
                                int stride, const std::vector<double>& scales,
                                double iou_threshold) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (scales.empty()) throw std::invalid_argument("empty scale list");
    const HogConfig& cfg = model.descriptor_config;
    if (model.weights.size() != static_cast<size_t>(cfg.descriptor_length()))
        throw std::invalid_argument("model/descriptor mismatch");

    std::vector<Detection> hits;
    for (double scale : scales) {
        const int win = static_cast<int>(std::lround(cfg.window_size * scale));
        if (win < cfg.block_size * cfg.cell_size || win > img.width || win > img.height) continue;
        for (int y = 0; y + win <= img.height; y += stride) {
            for (int x = 0; x + win <= img.width; x += stride) {
                const BoundingBox window(x, y, win, win);
                const double s = model.score(hog_descriptor(img, window, cfg).vector);
                if (s > 0.0) hits.push_back({window, s});
            }
        }
    }
    return non_max_suppression(std::move(hits), iou_threshold);
}

LinearSvmModel load_svm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open SVM model file: " + path);
    nlohmann::json j;
    in >> j;

    LinearSvmModel model;
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    if (j.contains("descriptor_config")) {
        const auto& jc = j["descriptor_config"];
        model.descriptor_config.window_size = jc.value("window_size", 64);
        model.descriptor_config.cell_size = jc.value("cell_size", 8);
        model.descriptor_config.block_size = jc.value("block_size", 2);
        model.descriptor_config.block_stride = jc.value("block_stride", 1);
        model.descriptor_config.bins = jc.value("bins", 9);
    }
    if (model.weights.size() != static_cast<size_t>(model.descriptor_config.descriptor_length()))
        throw std::runtime_error("model/descriptor mismatch in " + path);
    return model;
}

void save_svm(const LinearSvmModel& model, const std::string& path) {
    nlohmann::json j;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["descriptor_config"] = {{"window_size", model.descriptor_config.window_size},
                              {"cell_size", model.descriptor_config.cell_size},
                              {"block_size", model.descriptor_config.block_size},
                              {"block_stride", model.descriptor_config.block_stride},
                              {"bins", model.descriptor_config.bins}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write SVM model file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace facemorph
