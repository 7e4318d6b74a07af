#include "facemorph/integral_image.hpp"

#include <stdexcept>

namespace facemorph {

IntegralImage integral_image(const Image& img) {
    if (img.channels != 1) throw std::invalid_argument("integral image expects 1 channel");

    IntegralImage ii;
    ii.width = img.width;
    ii.height = img.height;
    ii.table.assign(static_cast<size_t>(img.width + 1) * (img.height + 1), 0);

    const int stride = img.width + 1;
    for (int y = 0; y < img.height; ++y) {
        std::uint64_t row = 0;
        for (int x = 0; x < img.width; ++x) {
            row += img.at(x, y);
            ii.table[static_cast<size_t>(y + 1) * stride + (x + 1)] =
                row + ii.table[static_cast<size_t>(y) * stride + (x + 1)];
        }
    }
    return ii;
}

}  // namespace facemorph
