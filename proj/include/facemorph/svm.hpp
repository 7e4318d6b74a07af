#ifndef FACEMORPH_SVM_HPP
#define FACEMORPH_SVM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "facemorph/haar.hpp"
#include "facemorph/hog.hpp"

namespace facemorph {

struct LinearSvmModel {
    std::vector<double> weights;  // same length as the descriptor vector
    double bias = 0.0;
    HogConfig descriptor_config;

    double score(const std::vector<double>& descriptor) const;
};

struct SvmTrainResult {
    LinearSvmModel model;
    double training_accuracy = 0.0;
};

// Soft-margin linear SVM fit by sub-gradient descent on the primal hinge
// loss (Pegasos schedule, lambda = 1 / (C * n)). Deterministic for a fixed
// seed. Throws "inseparable degenerate data" when the positive and negative
// descriptor multisets are identical.
SvmTrainResult train_linear_svm(const std::vector<HogDescriptor>& positives,
                                const std::vector<HogDescriptor>& negatives,
                                double C, int epochs = 40, std::uint64_t seed = 0);

// Sliding-window detector: windows of size round(window_size * scale) are
// scored with dot(weights, descriptor) + bias; positive scores survive NMS,
// sorted by descending score.
std::vector<Detection> hog_scan(const Image& img, const LinearSvmModel& model,
                                int stride, const std::vector<double>& scales,
                                double iou_threshold = 0.3);

LinearSvmModel load_svm(const std::string& path);
void save_svm(const LinearSvmModel& model, const std::string& path);

}  // namespace facemorph

#endif
