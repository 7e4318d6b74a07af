#ifndef FACEMORPH_IMAGE_HPP
#define FACEMORPH_IMAGE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace facemorph {

// 8-bit raster, row-major, interleaved channels (1 = grayscale, 3 = RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<size_t>(w) * h * c, fill) {
        if (w <= 0 || h <= 0 || (c != 1 && c != 3))
            throw std::invalid_argument("bad image dimensions");
    }

    bool empty() const { return data.empty(); }
    size_t size() const { return data.size(); }

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    // Clamped read, used by border-replicating filters.
    std::uint8_t at_clamped(int x, int y, int c = 0) const {
        if (x < 0) x = 0;
        if (x >= width) x = width - 1;
        if (y < 0) y = 0;
        if (y >= height) y = height - 1;
        return at(x, y, c);
    }

    bool operator==(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels && data == o.data;
    }
};

}  // namespace facemorph

#endif
