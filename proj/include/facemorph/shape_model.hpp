#ifndef FACEMORPH_SHAPE_MODEL_HPP
#define FACEMORPH_SHAPE_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "facemorph/geometry.hpp"
#include "facemorph/image.hpp"
#include "facemorph/landmarks.hpp"

namespace facemorph {

// Branch left when pixel[idx1] - pixel[idx2] > threshold.
struct SplitFeature {
    int idx1 = 0;
    int idx2 = 0;
    double threshold = 0.0;
};

// Complete binary tree of fixed depth; leaves hold full-shape displacement
// vectors (x, y interleaved) in the normalized box frame.
struct RegressionTree {
    std::vector<SplitFeature> splits;          // 2^depth - 1, heap order
    std::vector<std::vector<double>> leaves;   // 2^depth

    const std::vector<double>& predict(const std::vector<double>& pixel_values) const;
};

// Sampled pixel position expressed relative to the nearest mean-shape
// landmark; the offset rides the similarity warp between mean shape and the
// current estimate.
struct PixelAnchor {
    int landmark = 0;
    Point offset;
};

struct CascadeStage {
    std::vector<PixelAnchor> anchors;
    std::vector<RegressionTree> trees;
};

struct ShapeModel {
    LandmarkScheme scheme = LandmarkScheme::SixtyEightPoint;
    std::vector<Point> mean_shape;  // normalized [0,1]^2 box coordinates
    double nu = 0.1;                // shrinkage
    std::vector<CascadeStage> stages;

    int point_count() const { return static_cast<int>(mean_shape.size()); }
};

struct ShapeTrainConfig {
    int stages = 10;             // cascade length T
    int trees_per_stage = 500;   // K
    int tree_depth = 4;          // 2^4 leaves per tree
    double nu = 0.1;             // shrinkage
    int feature_pool_size = 400; // P pixels sampled per stage
    double lambda = 0.1;         // pair prior exp(-lambda * distance)
    int candidate_splits = 20;   // candidate features per node
    std::uint64_t seed = 0;

    // Desk-scale preset used by tests and examples: seconds, not minutes.
    static ShapeTrainConfig desk_scale() {
        ShapeTrainConfig c;
        c.stages = 5;
        c.trees_per_stage = 50;
        c.feature_pool_size = 64;
        return c;
    }
};

struct TrainingExample {
    Image image;        // grayscale
    BoundingBox box;
    LandmarkSet shape;  // ground truth in image coordinates
};

// Intensities at anchor positions warped by the similarity transform between
// the model's mean shape and `estimate` (both in the normalized box frame),
// then placed into image coordinates through `box`. Nearest-pixel lookup;
// out-of-image reads return 0.
std::vector<double> sample_indexed_pixels(const Image& img, const BoundingBox& box,
                                          const std::vector<Point>& estimate,
                                          const std::vector<Point>& mean_shape,
                                          const std::vector<PixelAnchor>& anchors);

// Runs the cascade from the mean shape placed in `box`. A model with zero
// stages returns exactly that placement.
LandmarkSet predict_shape(const Image& img, const BoundingBox& box, const ShapeModel& model);

// Gradient-boosted training on (image, box, shape) triples. Throws
// "insufficient data" for fewer than 2 examples and "scheme mismatch" when
// the shapes disagree.
ShapeModel train_shape_model(const std::vector<TrainingExample>& dataset,
                             const ShapeTrainConfig& config);

// Mean squared landmark residual of the model on a dataset, in normalized
// box coordinates; the quantity training drives down.
double shape_training_error(const std::vector<TrainingExample>& dataset, const ShapeModel& model);

// Coordinate-wise arithmetic mean per landmark index. Throws "scheme
// mismatch" on mixed schemes.
LandmarkSet mean_shape(const std::vector<LandmarkSet>& shapes);

ShapeModel load_shape_model(const std::string& path);
void save_shape_model(const ShapeModel& model, const std::string& path);

}  // namespace facemorph

#endif
