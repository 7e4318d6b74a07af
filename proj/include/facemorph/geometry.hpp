#ifndef FACEMORPH_GEOMETRY_HPP
#define FACEMORPH_GEOMETRY_HPP

#include <cmath>
#include <vector>

namespace facemorph {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point() = default;
    Point(double px, double py) : x(px), y(py) {}

    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double dot(const Point& o) const { return x * o.x + y * o.y; }
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }
inline Point midpoint(const Point& a, const Point& b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }

// Axis-aligned rectangle in pixel coordinates, top-left origin.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    BoundingBox() = default;
    BoundingBox(int bx, int by, int bw, int bh) : x(bx), y(by), w(bw), h(bh) {}

    bool valid() const { return w > 0 && h > 0; }
    long long area() const { return static_cast<long long>(w) * h; }
    int right() const { return x + w; }   // exclusive
    int bottom() const { return y + h; }  // exclusive
    Point center() const { return {x + w / 2.0, y + h / 2.0}; }

    bool contains(int px, int py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }
};

BoundingBox intersect(const BoundingBox& a, const BoundingBox& b);
double iou(const BoundingBox& a, const BoundingBox& b);

// Rotation + uniform scale + translation, applied in that order:
//   p' = scale * R(rotation) * p + translation
// Image convention: y grows downward, positive rotation is clockwise on screen.
struct SimilarityTransform {
    double rotation = 0.0;  // radians
    double scale = 1.0;     // > 0
    Point translation;

    Point apply(const Point& p) const {
        const double c = std::cos(rotation), s = std::sin(rotation);
        return {scale * (c * p.x - s * p.y) + translation.x,
                scale * (s * p.x + c * p.y) + translation.y};
    }

    SimilarityTransform inverse() const;

    // this ∘ other: apply `other` first, then this transform.
    SimilarityTransform compose(const SimilarityTransform& other) const;

    static SimilarityTransform identity() { return {}; }
};

std::vector<Point> map_points(const SimilarityTransform& t, const std::vector<Point>& pts);

// Least-squares similarity transform mapping `from` onto `to`
// (rotation + uniform scale + translation, no reflection).
SimilarityTransform find_similarity(const std::vector<Point>& from, const std::vector<Point>& to);

}  // namespace facemorph

#endif
