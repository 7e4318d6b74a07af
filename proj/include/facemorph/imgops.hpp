#ifndef FACEMORPH_IMGOPS_HPP
#define FACEMORPH_IMGOPS_HPP

#include "facemorph/geometry.hpp"
#include "facemorph/image.hpp"

namespace facemorph {

// Rec.601 luma: round(0.299 R + 0.587 G + 0.114 B). Single-channel input
// passes through unchanged.
Image to_grayscale(const Image& img);

// Classic CDF remap: v' = round((cdf(v) - cdf_min) / (N - cdf_min) * 255).
// A constant image (degenerate denominator) is returned unchanged.
Image equalize_histogram(const Image& img);

// 3-channel variant: equalizes the luma channel in YCbCr and converts back,
// leaving chroma untouched.
Image equalize_color(const Image& img);

// Median over the (2r+1)^2 neighborhood with edge replication at borders.
// Throws "kernel larger than image" when radius >= min(width, height).
Image median_filter(const Image& img, int radius);

// Sub-image of `box` grown by `margin` on every side, clipped to the image.
// Throws "box outside image" when the grown box misses the image entirely.
Image crop_with_margin(const Image& img, const BoundingBox& box, int margin);

// Bilinear resample to new_w x new_h; aspect ratio is not preserved.
Image resize(const Image& img, int new_w, int new_h);

}  // namespace facemorph

#endif
