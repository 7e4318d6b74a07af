#include "facemorph/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace facemorph {

BoundingBox intersect(const BoundingBox& a, const BoundingBox& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return {0, 0, 0, 0};
    return {x0, y0, x1 - x0, y1 - y0};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const BoundingBox inter = intersect(a, b);
    if (!inter.valid()) return 0.0;
    const double ia = static_cast<double>(inter.area());
    return ia / (static_cast<double>(a.area()) + static_cast<double>(b.area()) - ia);
}

SimilarityTransform SimilarityTransform::inverse() const {
    SimilarityTransform inv;
    inv.rotation = -rotation;
    inv.scale = 1.0 / scale;
    const double c = std::cos(-rotation), s = std::sin(-rotation);
    inv.translation = {-inv.scale * (c * translation.x - s * translation.y),
                       -inv.scale * (s * translation.x + c * translation.y)};
    return inv;
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& other) const {
    SimilarityTransform out;
    out.rotation = rotation + other.rotation;
    out.scale = scale * other.scale;
    out.translation = apply(other.translation);
    return out;
}

std::vector<Point> map_points(const SimilarityTransform& t, const std::vector<Point>& pts) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back(t.apply(p));
    return out;
}

SimilarityTransform find_similarity(const std::vector<Point>& from, const std::vector<Point>& to) {
    if (from.size() != to.size() || from.size() < 2)
        throw std::invalid_argument("point sets must have equal size >= 2");

    const double n = static_cast<double>(from.size());
    Point mf, mt;
    for (size_t i = 0; i < from.size(); ++i) {
        mf += from[i];
        mt += to[i];
    }
    mf = mf * (1.0 / n);
    mt = mt * (1.0 / n);

    // Umeyama closed form for 2-D without reflection: the covariance terms
    // reduce to a single complex ratio.
    double sxx = 0.0, a = 0.0, b = 0.0;
    for (size_t i = 0; i < from.size(); ++i) {
        const Point f = from[i] - mf;
        const Point t = to[i] - mt;
        sxx += f.x * f.x + f.y * f.y;
        a += f.x * t.x + f.y * t.y;   // dot
        b += f.x * t.y - f.y * t.x;   // cross
    }
    if (sxx <= 0.0) throw std::invalid_argument("degenerate source points");

    SimilarityTransform out;
    out.rotation = std::atan2(b, a);
    out.scale = std::hypot(a, b) / sxx;
    if (out.scale <= 0.0) out.scale = 1.0;
    const double c = std::cos(out.rotation), s = std::sin(out.rotation);
    out.translation = {mt.x - out.scale * (c * mf.x - s * mf.y),
                       mt.y - out.scale * (s * mf.x + c * mf.y)};
    return out;
}

}  // namespace facemorph
