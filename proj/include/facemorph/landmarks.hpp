#ifndef FACEMORPH_LANDMARKS_HPP
#define FACEMORPH_LANDMARKS_HPP

#include <string>
#include <vector>

#include "facemorph/geometry.hpp"

namespace facemorph {

enum class LandmarkScheme { FivePoint, SixtyEightPoint };

inline int scheme_point_count(LandmarkScheme s) {
    return s == LandmarkScheme::FivePoint ? 5 : 68;
}
std::string scheme_name(LandmarkScheme s);            // "5pt" / "68pt"
LandmarkScheme scheme_from_name(const std::string& name);

// Ordered 2-D points in pixel coordinates. The 68-point ordering follows the
// standard dense annotation: jawline 0-16, brows 17-26, nose 27-35,
// eyes 36-47, mouth 48-67.
struct LandmarkSet {
    LandmarkScheme scheme = LandmarkScheme::SixtyEightPoint;
    std::vector<Point> points;

    LandmarkSet() = default;
    LandmarkSet(LandmarkScheme s, std::vector<Point> pts);

    void validate() const;  // length matches scheme, coordinates finite
};

// Five-point ordering used by the alignment stage:
// left eye outer, left eye inner, right eye inner, right eye outer, nose tip.
struct FivePointLandmarks {
    Point left_eye_outer, left_eye_inner, right_eye_inner, right_eye_outer, nose_tip;

    static FivePointLandmarks from_set(const LandmarkSet& lm);
    LandmarkSet to_set() const;
};

// JSON interchange: {"scheme": "68pt", "points": [[x, y], ...]}
LandmarkSet load_landmarks(const std::string& path);
void save_landmarks(const LandmarkSet& lm, const std::string& path);

}  // namespace facemorph

#endif
