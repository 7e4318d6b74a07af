#ifndef FACEMORPH_HOG_HPP
#define FACEMORPH_HOG_HPP

#include <vector>

#include "facemorph/geometry.hpp"
#include "facemorph/image.hpp"

namespace facemorph {

struct HogConfig {
    int window_size = 64;   // square detection window, pixels
    int cell_size = 8;      // pixels per cell edge
    int block_size = 2;     // cells per block edge
    int block_stride = 1;   // cells between block origins
    int bins = 9;           // unsigned orientations over [0, 180)

    int cells_per_side() const { return window_size / cell_size; }
    int blocks_per_side() const { return (cells_per_side() - block_size) / block_stride + 1; }
    // 7*7 blocks * 2*2 cells * 9 bins = 1764 for the defaults
    int descriptor_length() const {
        return blocks_per_side() * blocks_per_side() * block_size * block_size * bins;
    }
};

struct HogDescriptor {
    HogConfig config;
    std::vector<double> vector;  // block-major, entries in [0, 1]
};

// Descriptor of the image content inside `window`, resampled to the
// configured window size when the box dimensions differ. Gradients by
// centered differences with edge replication; votes split linearly between
// the two nearest orientation bins; per-block L2-hys normalization.
// Throws "window too small" when the window covers less than one block.
HogDescriptor hog_descriptor(const Image& img, const BoundingBox& window,
                             const HogConfig& config = {});

}  // namespace facemorph

#endif
