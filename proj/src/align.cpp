#include "facemorph/align.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace facemorph {

std::pair<Point, Point> eye_centroids(const FivePointLandmarks& lm) {
    return {midpoint(lm.left_eye_outer, lm.left_eye_inner),
            midpoint(lm.right_eye_inner, lm.right_eye_outer)};
}

double roll_angle(const Point& left, const Point& right) {
    if (left.x == right.x && left.y == right.y)
        throw std::invalid_argument("degenerate eye geometry");
    return std::atan2(right.y - left.y, right.x - left.x);
}

AlignedFace align_face(const Image& img, const FivePointLandmarks& lm, int working_size) {
    if (working_size < 1) throw std::invalid_argument("working size must be >= 1");
    const auto [left, right] = eye_centroids(lm);
    const double theta = roll_angle(left, right);
    const Point center = midpoint(left, right);

    // rotate about the eye midpoint, then scale the frame to the working size
    const double s = static_cast<double>(working_size) / std::max(img.width, img.height);
    SimilarityTransform t;
    t.rotation = -theta;
    t.scale = s;
    const double c = std::cos(-theta), sn = std::sin(-theta);
    t.translation = {s * (center.x - (c * center.x - sn * center.y)),
                     s * (center.y - (sn * center.x + c * center.y))};

    const SimilarityTransform inv = t.inverse();
    Image out(working_size, working_size, img.channels);
    for (int y = 0; y < working_size; ++y) {
        for (int x = 0; x < working_size; ++x) {
            const Point src = inv.apply({static_cast<double>(x), static_cast<double>(y)});
            if (src.x < 0.0 || src.y < 0.0 || src.x > img.width - 1 || src.y > img.height - 1)
                continue;  // black fill
            const int x0 = static_cast<int>(src.x);
            const int y0 = static_cast<int>(src.y);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            const double wx = src.x - x0;
            const double wy = src.y - y0;
            for (int ch = 0; ch < img.channels; ++ch) {
                const double top = (1.0 - wx) * img.at(x0, y0, ch) + wx * img.at(x1, y0, ch);
                const double bot = (1.0 - wx) * img.at(x0, y1, ch) + wx * img.at(x1, y1, ch);
                const double v = (1.0 - wy) * top + wy * bot;
                out.at(x, y, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return {std::move(out), t};
}

}  // namespace facemorph
