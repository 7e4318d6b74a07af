#ifndef FACEMORPH_INTEGRAL_IMAGE_HPP
#define FACEMORPH_INTEGRAL_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "facemorph/geometry.hpp"
#include "facemorph/image.hpp"

namespace facemorph {

// (width+1) x (height+1) cumulative-sum table with a zero first row and
// column. table(i, j) is the sum of all pixels strictly above and left
// of (i, j), so any rectangle sum needs four lookups.
struct IntegralImage {
    int width = 0;   // source image width
    int height = 0;  // source image height
    std::vector<std::uint64_t> table;  // (width+1) * (height+1)

    std::uint64_t at(int i, int j) const {  // i: column 0..width, j: row 0..height
        return table[static_cast<size_t>(j) * (width + 1) + i];
    }

    // Sum over pixels [x, x+w) x [y, y+h). Exact integer arithmetic.
    std::uint64_t rect_sum(int x, int y, int w, int h) const {
        return at(x + w, y + h) - at(x + w, y) - at(x, y + h) + at(x, y);
    }
    std::uint64_t rect_sum(const BoundingBox& b) const { return rect_sum(b.x, b.y, b.w, b.h); }
};

IntegralImage integral_image(const Image& img);

}  // namespace facemorph

#endif
