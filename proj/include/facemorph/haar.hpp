#ifndef FACEMORPH_HAAR_HPP
#define FACEMORPH_HAAR_HPP

#include <string>
#include <vector>

#include "facemorph/geometry.hpp"
#include "facemorph/integral_image.hpp"

namespace facemorph {

// Rectangle in unit-window coordinates ([0,1]^2) with a sum weight.
struct WeightedRect {
    double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
    double weight = 0.0;
};

struct HaarFeature {
    std::vector<WeightedRect> rects;  // >= 2, all inside the unit window
};

// Decision stump over one feature: value < threshold selects left_value.
struct HaarStump {
    HaarFeature feature;
    double threshold = 0.0;
    double left_value = 0.0;
    double right_value = 0.0;
};

struct HaarStage {
    std::vector<HaarStump> stumps;
    double threshold = 0.0;  // stage passes when the stump sum reaches this
};

struct HaarCascade {
    int base_window = 24;  // detection window edge in pixels at scale 1
    std::vector<HaarStage> stages;
};

struct Detection {
    BoundingBox box;
    double score = 0.0;
};

// Weighted sum of rectangle sums with the feature's rects scaled into
// `window`. Rect sums are exact integers; weighting happens in double.
// Throws "invalid feature geometry" if a scaled rect leaves the window.
double haar_feature_value(const IntegralImage& ii, const HaarFeature& f, const BoundingBox& window);

// Scans square windows of size round(base_window * scale) over the image
// with the given pixel step. Windows passing every stage are merged by
// non-maximum suppression (IoU > iou_threshold, highest stage-sum kept).
std::vector<Detection> cascade_detect(const IntegralImage& ii, const HaarCascade& cascade,
                                      const std::vector<double>& scales, int step,
                                      double iou_threshold = 0.3);

// Greedy NMS shared by both detectors: boxes sorted by descending score,
// any box overlapping an already-kept one beyond the threshold is dropped.
std::vector<Detection> non_max_suppression(std::vector<Detection> dets, double iou_threshold);

HaarCascade load_cascade(const std::string& path);
void save_cascade(const HaarCascade& cascade, const std::string& path);

}  // namespace facemorph

#endif
