#include "facemorph/morphometrics.hpp"

#include <cmath>
#include <stdexcept>

namespace facemorph {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_68(const LandmarkSet& lm) {
    if (lm.scheme != LandmarkScheme::SixtyEightPoint)
        throw std::invalid_argument("feature extraction expects a 68pt landmark set");
    lm.validate();
}

void check_index(int i) {
    if (i < 0 || i > 67) throw std::invalid_argument("landmark index out of range");
}

void check_pair(const std::pair<int, int>& p) {
    check_index(p.first);
    check_index(p.second);
    if (p.first == p.second) throw std::invalid_argument("landmark pair members must differ");
}

double pair_distance(const LandmarkSet& lm, const std::pair<int, int>& p) {
    return distance(lm.points[p.first], lm.points[p.second]);
}

}  // namespace

void LandmarkIndexMap::validate() const {
    check_pair(eyes_r1);
    check_pair(nose_r2);
    check_pair(mouth_r3);
    check_pair(temples_b1);
    check_pair(cheekbones_b2);
    check_pair(jaw_b3);
    check_pair(face_width);
    check_pair(mouth_vertical);
    check_index(nose_apex);
    check_index(chin);
    check_index(brow_left);
    check_index(brow_right);
}

const std::array<std::string, 6>& FeatureVector::names() {
    static const std::array<std::string, 6> n = {"R1/B1", "R2/B2", "R3/B3",
                                                 "NoseAngle", "Rnose", "RMouth"};
    return n;
}

DistanceRatios distance_ratios(const LandmarkSet& lm, const LandmarkIndexMap& map) {
    check_68(lm);
    map.validate();
    const double b1 = pair_distance(lm, map.temples_b1);
    const double b2 = pair_distance(lm, map.cheekbones_b2);
    const double b3 = pair_distance(lm, map.jaw_b3);
    if (b1 <= 0.0 || b2 <= 0.0 || b3 <= 0.0)
        throw std::invalid_argument("degenerate face geometry");
    return {pair_distance(lm, map.eyes_r1) / b1,
            pair_distance(lm, map.nose_r2) / b2,
            pair_distance(lm, map.mouth_r3) / b3};
}

double nose_angle(const LandmarkSet& lm, const LandmarkIndexMap& map) {
    check_68(lm);
    map.validate();
    const Point apex = lm.points[map.nose_apex];
    const Point left = lm.points[map.nose_r2.first];
    const Point right = lm.points[map.nose_r2.second];

    const double a = distance(apex, left);
    const double b = distance(apex, right);
    const double base = distance(left, right);
    if (a <= 0.0 || b <= 0.0 || base <= 0.0)
        throw std::invalid_argument("degenerate triangle");

    // law of cosines, solved for the apex angle
    double cos_alpha = (a * a + b * b - base * base) / (2.0 * a * b);
    if (cos_alpha <= -1.0 || cos_alpha >= 1.0)  // collinear within rounding
        throw std::invalid_argument("degenerate triangle");
    return std::acos(cos_alpha) * 180.0 / kPi;
}

double face_ellipse_area(const LandmarkSet& lm, const LandmarkIndexMap& map) {
    check_68(lm);
    map.validate();
    const double minor = pair_distance(lm, map.face_width);
    const Point brow_centroid = midpoint(lm.points[map.brow_left], lm.points[map.brow_right]);
    const double major = distance(lm.points[map.chin], brow_centroid);
    if (minor <= 0.0 || major <= 0.0) throw std::invalid_argument("degenerate face geometry");
    return kPi * (minor / 2.0) * (major / 2.0);
}

double polygon_area(const std::vector<Point>& points) {
    if (points.size() < 3) throw std::invalid_argument("not a polygon");
    double twice = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        const Point& p = points[i];
        const Point& q = points[(i + 1) % points.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return std::abs(twice) / 2.0;
}

AreaRatios area_ratios(const LandmarkSet& lm, const LandmarkIndexMap& map) {
    check_68(lm);
    map.validate();
    const double face_area = face_ellipse_area(lm, map);

    const double nose_area = polygon_area({lm.points[map.nose_apex],
                                           lm.points[map.nose_r2.first],
                                           lm.points[map.nose_r2.second]});
    const double mouth_area =
        kPi * (pair_distance(lm, map.mouth_r3) / 2.0) * (pair_distance(lm, map.mouth_vertical) / 2.0);
    return {nose_area / face_area, mouth_area / face_area};
}

FeatureVector extract_features(const LandmarkSet& lm, const LandmarkIndexMap& map) {
    const DistanceRatios d = distance_ratios(lm, map);
    const AreaRatios a = area_ratios(lm, map);
    FeatureVector f;
    f.r1_b1 = d.r1_b1;
    f.r2_b2 = d.r2_b2;
    f.r3_b3 = d.r3_b3;
    f.nose_angle_deg = nose_angle(lm, map);
    f.r_nose = a.r_nose;
    f.r_mouth = a.r_mouth;
    return f;
}

}  // namespace facemorph
