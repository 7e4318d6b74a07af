#ifndef FACEMORPH_ALIGN_HPP
#define FACEMORPH_ALIGN_HPP

#include <utility>

#include "facemorph/geometry.hpp"
#include "facemorph/image.hpp"
#include "facemorph/landmarks.hpp"

namespace facemorph {

struct AlignedFace {
    Image image;                   // working_size x working_size
    SimilarityTransform transform; // input pixel coords -> aligned coords
};

// Midpoints of each eye's corner pair, (left, right).
std::pair<Point, Point> eye_centroids(const FivePointLandmarks& lm);

// atan2 of the right-minus-left centroid vector; positive means clockwise
// roll in image coordinates (y down). Throws "degenerate eye geometry" on
// coincident centroids.
double roll_angle(const Point& left, const Point& right);

// Rotates by -roll_angle about the inter-ocular midpoint, scales the frame
// uniformly so the crop extent maps onto working_size, resamples bilinearly
// (out-of-frame reads fill black). The returned transform maps input
// coordinates to aligned coordinates and is invertible.
AlignedFace align_face(const Image& img, const FivePointLandmarks& lm, int working_size = 600);

}  // namespace facemorph

#endif
