#include "facemorph/hog.hpp"

#include <cmath>
#include <stdexcept>

#include "facemorph/imgops.hpp"

namespace facemorph {

namespace {

constexpr double kPi = 3.14159265358979323846;

void l2_hys_normalize(std::vector<double>& block) {
    constexpr double kEps = 1e-12;  // keeps all-zero blocks exactly zero
    constexpr double kClip = 0.2;
    double sq = 0.0;
    for (double v : block) sq += v * v;
    double norm = std::sqrt(sq + kEps);
    for (double& v : block) v = std::min(v / norm, kClip);
    sq = 0.0;
    for (double v : block) sq += v * v;
    norm = std::sqrt(sq + kEps);
    for (double& v : block) v /= norm;
}

}  // namespace

HogDescriptor hog_descriptor(const Image& img, const BoundingBox& window, const HogConfig& config) {
    if (img.channels != 1) throw std::invalid_argument("hog expects 1 channel");
    if (window.w < config.block_size * config.cell_size ||
        window.h < config.block_size * config.cell_size)
        throw std::invalid_argument("window too small");
    if (config.window_size % config.cell_size != 0)
        throw std::invalid_argument("window size must be a multiple of cell size");

    const int ws = config.window_size;
    Image patch = crop_with_margin(img, window, 0);
    if (patch.width != ws || patch.height != ws) patch = resize(patch, ws, ws);

    // per-cell orientation histograms
    const int ncells = config.cells_per_side();
    const int bins = config.bins;
    std::vector<double> hist(static_cast<size_t>(ncells) * ncells * bins, 0.0);
    const double bin_width = kPi / bins;

    for (int y = 0; y < ws; ++y) {
        for (int x = 0; x < ws; ++x) {
            const double gx = static_cast<double>(patch.at_clamped(x + 1, y)) -
                              static_cast<double>(patch.at_clamped(x - 1, y));
            const double gy = static_cast<double>(patch.at_clamped(x, y + 1)) -
                              static_cast<double>(patch.at_clamped(x, y - 1));
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;

            double theta = std::atan2(gy, gx);  // fold to unsigned [0, pi)
            if (theta < 0.0) theta += kPi;
            if (theta >= kPi) theta -= kPi;

            // split the vote between the two nearest bin centers, wrapping at 180
            const double pos = theta / bin_width - 0.5;
            int b0 = static_cast<int>(std::floor(pos));
            const double frac = pos - b0;
            b0 = (b0 % bins + bins) % bins;
            const int b1 = (b0 + 1) % bins;

            const int cx = x / config.cell_size;
            const int cy = y / config.cell_size;
            double* cell = &hist[(static_cast<size_t>(cy) * ncells + cx) * bins];
            cell[b0] += mag * (1.0 - frac);
            cell[b1] += mag * frac;
        }
    }

    // blocks row-major, cells within block row-major, bins innermost
    HogDescriptor desc;
    desc.config = config;
    desc.vector.reserve(config.descriptor_length());
    const int nblocks = config.blocks_per_side();
    std::vector<double> block(static_cast<size_t>(config.block_size) * config.block_size * bins);
    for (int by = 0; by < nblocks; ++by) {
        for (int bx = 0; bx < nblocks; ++bx) {
            size_t m = 0;
            for (int cy = 0; cy < config.block_size; ++cy) {
                for (int cx = 0; cx < config.block_size; ++cx) {
                    const int gy = by * config.block_stride + cy;
                    const int gx = bx * config.block_stride + cx;
                    const double* cell = &hist[(static_cast<size_t>(gy) * ncells + gx) * bins];
                    for (int b = 0; b < bins; ++b) block[m++] = cell[b];
                }
            }
            l2_hys_normalize(block);
            desc.vector.insert(desc.vector.end(), block.begin(), block.end());
        }
    }
    return desc;
}

}  // namespace facemorph
