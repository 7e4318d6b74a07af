#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "facemorph/rng.hpp"
#include "facemorph/shape_model.hpp"

namespace facemorph {

namespace detail {
std::vector<Point> normalize_to_box(const std::vector<Point>& pts, const BoundingBox& box);
}

namespace {

// Sends every sample right; used for nodes greedy splitting cannot improve.
constexpr double kDeadThreshold = 1e6;

struct SampleState {
    const Image* image = nullptr;
    BoundingBox box;
    std::vector<double> target;    // normalized, x/y interleaved
    std::vector<double> current;   // normalized, x/y interleaved
    std::vector<double> pixels;    // intensities for the running stage
};

std::vector<double> flatten(const std::vector<Point>& pts) {
    std::vector<double> out(pts.size() * 2);
    for (size_t i = 0; i < pts.size(); ++i) {
        out[2 * i] = pts[i].x;
        out[2 * i + 1] = pts[i].y;
    }
    return out;
}

std::vector<Point> unflatten(const std::vector<double>& v) {
    std::vector<Point> out(v.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) out[i] = {v[2 * i], v[2 * i + 1]};
    return out;
}

int nearest_landmark(const std::vector<Point>& shape, const Point& p) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < shape.size(); ++i) {
        const double d = distance(shape[i], p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

// Pool of candidate pixel positions over the mean-shape extent, each tied to
// its nearest landmark.
std::vector<PixelAnchor> sample_anchor_pool(const std::vector<Point>& mean, int pool_size,
                                            Rng& rng, std::vector<Point>& positions) {
    double min_x = mean[0].x, max_x = mean[0].x, min_y = mean[0].y, max_y = mean[0].y;
    for (const Point& p : mean) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double pad_x = 0.1 * (max_x - min_x) + 1e-6;
    const double pad_y = 0.1 * (max_y - min_y) + 1e-6;

    std::vector<PixelAnchor> anchors;
    anchors.reserve(pool_size);
    positions.clear();
    positions.reserve(pool_size);
    for (int i = 0; i < pool_size; ++i) {
        const Point pos{rng.uniform(min_x - pad_x, max_x + pad_x),
                        rng.uniform(min_y - pad_y, max_y + pad_y)};
        const int lm = nearest_landmark(mean, pos);
        anchors.push_back({lm, pos - mean[lm]});
        positions.push_back(pos);
    }
    return anchors;
}

// Pixel pair drawn with acceptance prior exp(-lambda * distance).
SplitFeature draw_split_candidate(const std::vector<Point>& positions, double lambda, Rng& rng) {
    const int pool = static_cast<int>(positions.size());
    for (int tries = 0; tries < 200; ++tries) {
        const int i = rng.uniform_int(0, pool - 1);
        const int j = rng.uniform_int(0, pool - 1);
        if (i == j) continue;
        const double d = distance(positions[i], positions[j]);
        if (rng.uniform() < std::exp(-lambda * d)) return {i, j, 0.0};
    }
    return {0, pool > 1 ? 1 : 0, 0.0};
}

struct NodeSplitResult {
    SplitFeature split;
    std::vector<int> left, right;
};

// Greedy variance-reduction split: maximize |sum_L|^2/n_L + |sum_R|^2/n_R
// of the residual vectors.
NodeSplitResult best_split(const std::vector<SampleState>& samples,
                           const std::vector<std::vector<double>>& residuals,
                           const std::vector<int>& node_samples,
                           const std::vector<Point>& positions,
                           double lambda, int candidates, Rng& rng) {
    NodeSplitResult result;
    result.split = {0, 0, kDeadThreshold};
    result.right = node_samples;
    if (node_samples.size() < 2) return result;

    const size_t dim = residuals.front().size();
    std::vector<double> sum_node(dim, 0.0);
    for (int s : node_samples)
        for (size_t k = 0; k < dim; ++k) sum_node[k] += residuals[s][k];

    double best_score = -1.0;
    std::vector<double> diffs(node_samples.size());
    std::vector<double> sum_left(dim);
    for (int c = 0; c < candidates; ++c) {
        SplitFeature cand = draw_split_candidate(positions, lambda, rng);

        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (size_t m = 0; m < node_samples.size(); ++m) {
            const auto& pix = samples[node_samples[m]].pixels;
            diffs[m] = pix[cand.idx1] - pix[cand.idx2];
            lo = std::min(lo, diffs[m]);
            hi = std::max(hi, diffs[m]);
        }
        if (hi <= lo) continue;  // feature constant on this node
        cand.threshold = rng.uniform(lo, hi);

        std::fill(sum_left.begin(), sum_left.end(), 0.0);
        size_t n_left = 0;
        for (size_t m = 0; m < node_samples.size(); ++m) {
            if (diffs[m] > cand.threshold) {
                const auto& r = residuals[node_samples[m]];
                for (size_t k = 0; k < dim; ++k) sum_left[k] += r[k];
                ++n_left;
            }
        }
        const size_t n_right = node_samples.size() - n_left;
        if (n_left == 0 || n_right == 0) continue;

        double sq_left = 0.0, sq_right = 0.0;
        for (size_t k = 0; k < dim; ++k) {
            sq_left += sum_left[k] * sum_left[k];
            const double sr = sum_node[k] - sum_left[k];
            sq_right += sr * sr;
        }
        const double score = sq_left / n_left + sq_right / n_right;
        if (score > best_score) {
            best_score = score;
            result.split = cand;
        }
    }

    result.left.clear();
    result.right.clear();
    if (best_score < 0.0) {  // no usable candidate
        result.split = {0, 0, kDeadThreshold};
        result.right = node_samples;
        return result;
    }
    for (int s : node_samples) {
        const auto& pix = samples[s].pixels;
        if (pix[result.split.idx1] - pix[result.split.idx2] > result.split.threshold)
            result.left.push_back(s);
        else
            result.right.push_back(s);
    }
    return result;
}

RegressionTree grow_tree(const std::vector<SampleState>& samples,
                         const std::vector<std::vector<double>>& residuals,
                         const std::vector<Point>& positions,
                         const ShapeTrainConfig& config, Rng& rng) {
    const int n_internal = (1 << config.tree_depth) - 1;
    const int n_leaves = 1 << config.tree_depth;
    const size_t dim = residuals.front().size();

    RegressionTree tree;
    tree.splits.resize(n_internal);
    tree.leaves.assign(n_leaves, std::vector<double>(dim, 0.0));

    // heap-ordered breadth-first construction of the complete tree
    std::vector<std::vector<int>> node_sets(n_internal + n_leaves);
    node_sets[0].resize(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) node_sets[0][i] = static_cast<int>(i);

    for (int node = 0; node < n_internal; ++node) {
        NodeSplitResult r = best_split(samples, residuals, node_sets[node], positions,
                                       config.lambda, config.candidate_splits, rng);
        tree.splits[node] = r.split;
        node_sets[2 * node + 1] = std::move(r.left);
        node_sets[2 * node + 2] = std::move(r.right);
        node_sets[node].clear();
    }

    for (int leaf = 0; leaf < n_leaves; ++leaf) {
        const std::vector<int>& members = node_sets[n_internal + leaf];
        if (members.empty()) continue;
        std::vector<double>& value = tree.leaves[leaf];
        for (int s : members)
            for (size_t k = 0; k < dim; ++k) value[k] += residuals[s][k];
        const double inv = 1.0 / static_cast<double>(members.size());
        for (double& v : value) v *= inv;
    }
    return tree;
}

}  // namespace

ShapeModel train_shape_model(const std::vector<TrainingExample>& dataset,
                             const ShapeTrainConfig& config) {
    if (dataset.size() < 2) throw std::invalid_argument("insufficient data");
    if (config.stages < 1 || config.trees_per_stage < 1 || config.tree_depth < 1 ||
        config.feature_pool_size < 2 || config.nu <= 0.0 || config.nu > 1.0)
        throw std::invalid_argument("invalid training configuration");

    const LandmarkScheme scheme = dataset.front().shape.scheme;
    for (const TrainingExample& ex : dataset) {
        if (ex.shape.scheme != scheme) throw std::invalid_argument("scheme mismatch");
        ex.shape.validate();
        if (!ex.box.valid()) throw std::invalid_argument("invalid bounding box");
        if (ex.image.channels != 1)
            throw std::invalid_argument("shape regression expects 1 channel");
    }

    ShapeModel model;
    model.scheme = scheme;
    model.nu = config.nu;

    // normalized targets and their mean
    std::vector<SampleState> samples(dataset.size());
    const size_t n_points = dataset.front().shape.points.size();
    std::vector<double> mean_flat(2 * n_points, 0.0);
    for (size_t i = 0; i < dataset.size(); ++i) {
        samples[i].image = &dataset[i].image;
        samples[i].box = dataset[i].box;
        samples[i].target =
            flatten(detail::normalize_to_box(dataset[i].shape.points, dataset[i].box));
        for (size_t k = 0; k < mean_flat.size(); ++k) mean_flat[k] += samples[i].target[k];
    }
    for (double& v : mean_flat) v /= static_cast<double>(dataset.size());
    model.mean_shape = unflatten(mean_flat);
    for (SampleState& s : samples) s.current = mean_flat;

    Rng rng(config.seed);
    std::vector<std::vector<double>> residuals(samples.size(),
                                               std::vector<double>(2 * n_points, 0.0));

    for (int stage = 0; stage < config.stages; ++stage) {
        CascadeStage cascade_stage;
        std::vector<Point> pool_positions;
        cascade_stage.anchors =
            sample_anchor_pool(model.mean_shape, config.feature_pool_size, rng, pool_positions);

        for (size_t i = 0; i < samples.size(); ++i) {
            samples[i].pixels = sample_indexed_pixels(*samples[i].image, samples[i].box,
                                                      unflatten(samples[i].current),
                                                      model.mean_shape, cascade_stage.anchors);
            for (size_t k = 0; k < residuals[i].size(); ++k)
                residuals[i][k] = samples[i].target[k] - samples[i].current[k];
        }

        for (int k = 0; k < config.trees_per_stage; ++k) {
            RegressionTree tree = grow_tree(samples, residuals, pool_positions, config, rng);
            for (size_t i = 0; i < samples.size(); ++i) {
                const std::vector<double>& leaf = tree.predict(samples[i].pixels);
                for (size_t d = 0; d < leaf.size(); ++d) {
                    samples[i].current[d] += config.nu * leaf[d];
                    residuals[i][d] -= config.nu * leaf[d];
                }
            }
            cascade_stage.trees.push_back(std::move(tree));
        }
        model.stages.push_back(std::move(cascade_stage));
    }
    return model;
}

double shape_training_error(const std::vector<TrainingExample>& dataset, const ShapeModel& model) {
    if (dataset.empty()) throw std::invalid_argument("insufficient data");
    double total = 0.0;
    size_t count = 0;
    for (const TrainingExample& ex : dataset) {
        const LandmarkSet pred = predict_shape(ex.image, ex.box, model);
        for (size_t i = 0; i < pred.points.size(); ++i) {
            const double dx = (pred.points[i].x - ex.shape.points[i].x) / ex.box.w;
            const double dy = (pred.points[i].y - ex.shape.points[i].y) / ex.box.h;
            total += dx * dx + dy * dy;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

}  // namespace facemorph
