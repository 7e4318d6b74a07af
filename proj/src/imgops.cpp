#include "facemorph/imgops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace facemorph {

namespace {

std::uint8_t clamp_u8(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

// Histogram equalization lookup table for one channel of sample values.
// Returns false when the image is constant (identity case).
bool equalization_lut(const std::vector<std::uint8_t>& samples, std::array<std::uint8_t, 256>& lut) {
    std::array<std::uint64_t, 256> hist{};
    for (std::uint8_t v : samples) hist[v]++;

    const std::uint64_t n = samples.size();
    std::uint64_t cdf = 0, cdf_min = 0;
    std::array<std::uint64_t, 256> cum{};
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        cum[v] = cdf;
        if (cdf_min == 0 && cdf > 0) cdf_min = cdf;
    }
    if (cdf_min == n) return false;  // single intensity level

    const double denom = static_cast<double>(n - cdf_min);
    for (int v = 0; v < 256; ++v) {
        if (cum[v] < cdf_min) {
            lut[v] = 0;  // unused levels below the first occupied one
        } else {
            lut[v] = clamp_u8(static_cast<double>(cum[v] - cdf_min) / denom * 255.0);
        }
    }
    return true;
}

}  // namespace

Image to_grayscale(const Image& img) {
    if (img.channels == 1) return img;
    Image out(img.width, img.height, 1);
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.data[i] = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
    }
    return out;
}

Image equalize_histogram(const Image& img) {
    if (img.empty()) throw std::invalid_argument("empty image");
    if (img.channels != 1) return equalize_color(img);

    std::array<std::uint8_t, 256> lut{};
    if (!equalization_lut(img.data, lut)) return img;

    Image out = img;
    for (auto& v : out.data) v = lut[v];
    return out;
}

Image equalize_color(const Image& img) {
    if (img.channels == 1) return equalize_histogram(img);
    if (img.empty()) throw std::invalid_argument("empty image");

    const size_t n = static_cast<size_t>(img.width) * img.height;
    std::vector<std::uint8_t> luma(n);
    std::vector<double> cb(n), cr(n);
    for (size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        const double y = 0.299 * r + 0.587 * g + 0.114 * b;
        luma[i] = clamp_u8(y);
        cb[i] = (b - y) * 0.564;
        cr[i] = (r - y) * 0.713;
    }

    std::array<std::uint8_t, 256> lut{};
    if (!equalization_lut(luma, lut)) return img;

    Image out(img.width, img.height, 3);
    for (size_t i = 0; i < n; ++i) {
        const double y = lut[luma[i]];
        out.data[i * 3 + 0] = clamp_u8(y + 1.403 * cr[i]);
        out.data[i * 3 + 1] = clamp_u8(y - 0.344 * cb[i] - 0.714 * cr[i]);
        out.data[i * 3 + 2] = clamp_u8(y + 1.773 * cb[i]);
    }
    return out;
}

Image median_filter(const Image& img, int radius) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (img.channels != 1) throw std::invalid_argument("median filter expects 1 channel");
    if (radius >= std::min(img.width, img.height))
        throw std::invalid_argument("kernel larger than image");

    Image out(img.width, img.height, 1);
    const int k = 2 * radius + 1;
    std::vector<std::uint8_t> window(static_cast<size_t>(k) * k);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            size_t m = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    window[m++] = img.at_clamped(x + dx, y + dy);
            auto mid = window.begin() + window.size() / 2;
            std::nth_element(window.begin(), mid, window.end());
            out.at(x, y) = *mid;
        }
    }
    return out;
}

Image crop_with_margin(const Image& img, const BoundingBox& box, int margin) {
    if (margin < 0) throw std::invalid_argument("margin must be >= 0");
    BoundingBox grown(box.x - margin, box.y - margin, box.w + 2 * margin, box.h + 2 * margin);
    const BoundingBox full(0, 0, img.width, img.height);
    const BoundingBox clipped = intersect(grown, full);
    if (!clipped.valid()) throw std::invalid_argument("box outside image");

    Image out(clipped.w, clipped.h, img.channels);
    for (int y = 0; y < clipped.h; ++y)
        for (int x = 0; x < clipped.w; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = img.at(clipped.x + x, clipped.y + y, c);
    return out;
}

Image resize(const Image& img, int new_w, int new_h) {
    if (new_w < 1 || new_h < 1) throw std::invalid_argument("target size must be >= 1");
    if (img.empty()) throw std::invalid_argument("empty image");
    if (new_w == img.width && new_h == img.height) return img;

    Image out(new_w, new_h, img.channels);
    const double sx = static_cast<double>(img.width) / new_w;
    const double sy = static_cast<double>(img.height) / new_h;
    for (int y = 0; y < new_h; ++y) {
        // pixel-center mapping, clamped so the 2x2 neighborhood stays in bounds
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < new_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = (1.0 - wx) * img.at(x0, y0, c) + wx * img.at(x1, y0, c);
                const double bot = (1.0 - wx) * img.at(x0, y1, c) + wx * img.at(x1, y1, c);
                out.at(x, y, c) = clamp_u8((1.0 - wy) * top + wy * bot);
            }
        }
    }
    return out;
}

}  // namespace facemorph
