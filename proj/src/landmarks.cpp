#include "facemorph/landmarks.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace facemorph {

std::string scheme_name(LandmarkScheme s) {
    return s == LandmarkScheme::FivePoint ? "5pt" : "68pt";
}

LandmarkScheme scheme_from_name(const std::string& name) {
    if (name == "5pt") return LandmarkScheme::FivePoint;
    if (name == "68pt") return LandmarkScheme::SixtyEightPoint;
    throw std::invalid_argument("unknown landmark scheme: " + name);
}

LandmarkSet::LandmarkSet(LandmarkScheme s, std::vector<Point> pts)
    : scheme(s), points(std::move(pts)) {
    validate();
}

void LandmarkSet::validate() const {
    if (static_cast<int>(points.size()) != scheme_point_count(scheme))
        throw std::invalid_argument("landmark count does not match scheme " + scheme_name(scheme));
    for (const Point& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("non-finite landmark coordinate");
}

FivePointLandmarks FivePointLandmarks::from_set(const LandmarkSet& lm) {
    if (lm.scheme != LandmarkScheme::FivePoint)
        throw std::invalid_argument("expected a 5pt landmark set");
    lm.validate();
    return {lm.points[0], lm.points[1], lm.points[2], lm.points[3], lm.points[4]};
}

LandmarkSet FivePointLandmarks::to_set() const {
    return LandmarkSet(LandmarkScheme::FivePoint,
                       {left_eye_outer, left_eye_inner, right_eye_inner, right_eye_outer, nose_tip});
}

LandmarkSet load_landmarks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open landmark file: " + path);
    nlohmann::json j;
    in >> j;

    LandmarkSet lm;
    lm.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    for (const auto& jp : j.at("points"))
        lm.points.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
    lm.validate();
    return lm;
}

void save_landmarks(const LandmarkSet& lm, const std::string& path) {
    lm.validate();
    nlohmann::json j;
    j["scheme"] = scheme_name(lm.scheme);
    j["points"] = nlohmann::json::array();
    for (const Point& p : lm.points) j["points"].push_back({p.x, p.y});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write landmark file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace facemorph
