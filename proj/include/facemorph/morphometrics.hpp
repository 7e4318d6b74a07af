#ifndef FACEMORPH_MORPHOMETRICS_HPP
#define FACEMORPH_MORPHOMETRICS_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "facemorph/landmarks.hpp"

namespace facemorph {

// Named indices into the 68-point scheme for the six geometric features.
// Defaults follow the standard annotation; the baseline pairs sit on the
// jaw contour nearest the temples, cheekbones and jaw.
struct LandmarkIndexMap {
    std::pair<int, int> eyes_r1{39, 40};
    std::pair<int, int> nose_r2{31, 35};
    std::pair<int, int> mouth_r3{48, 54};
    std::pair<int, int> temples_b1{0, 16};
    std::pair<int, int> cheekbones_b2{2, 14};
    std::pair<int, int> jaw_b3{4, 12};
    int nose_apex = 27;
    std::pair<int, int> face_width{1, 15};
    int chin = 8;
    int brow_left = 19;
    int brow_right = 24;
    std::pair<int, int> mouth_vertical{51, 57};

    void validate() const;  // indices in [0, 67], pair members distinct

    // The literal spelling of the source material puts both eye indices on
    // the same eye; this variant uses the conventional inner-corner pair.
    static LandmarkIndexMap with_inter_eye_r1() {
        LandmarkIndexMap m;
        m.eyes_r1 = {39, 42};
        return m;
    }
};

// The six per-face measurements, in fixed report order.
struct FeatureVector {
    double r1_b1 = 0.0;
    double r2_b2 = 0.0;
    double r3_b3 = 0.0;
    double nose_angle_deg = 0.0;
    double r_nose = 0.0;
    double r_mouth = 0.0;

    std::array<double, 6> values() const {
        return {r1_b1, r2_b2, r3_b3, nose_angle_deg, r_nose, r_mouth};
    }
    static const std::array<std::string, 6>& names();  // Table-style labels
};

struct DistanceRatios {
    double r1_b1 = 0.0;
    double r2_b2 = 0.0;
    double r3_b3 = 0.0;
};

// R1/B1, R2/B2, R3/B3 as Euclidean distance quotients. Throws "degenerate
// face geometry" on a zero baseline.
DistanceRatios distance_ratios(const LandmarkSet& lm, const LandmarkIndexMap& map = {});

// Apex angle of the nose triangle by the law of cosines, in degrees.
// Throws "degenerate triangle" on collinear points or zero-length sides.
double nose_angle(const LandmarkSet& lm, const LandmarkIndexMap& map = {});

// Ellipse with minor axis the face width and major axis chin-to-brow-centroid.
double face_ellipse_area(const LandmarkSet& lm, const LandmarkIndexMap& map = {});

// Absolute shoelace area; orientation independent. Throws "not a polygon"
// for fewer than 3 points.
double polygon_area(const std::vector<Point>& points);

struct AreaRatios {
    double r_nose = 0.0;
    double r_mouth = 0.0;
};

// Nose triangle area and mouth ellipse area, each over the face ellipse area.
AreaRatios area_ratios(const LandmarkSet& lm, const LandmarkIndexMap& map = {});

FeatureVector extract_features(const LandmarkSet& lm, const LandmarkIndexMap& map = {});

}  // namespace facemorph

#endif
