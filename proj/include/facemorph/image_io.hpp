#ifndef FACEMORPH_IMAGE_IO_HPP
#define FACEMORPH_IMAGE_IO_HPP

#include <string>

#include "facemorph/image.hpp"

namespace facemorph {

// Decodes a JPEG or PNG file (dispatch on magic bytes). Grayscale files load
// as 1 channel, everything else as RGB. Throws std::runtime_error with the
// path on unreadable or unsupported input.
Image load_image(const std::string& path);

void save_png(const Image& img, const std::string& path);
void save_jpeg(const Image& img, const std::string& path, int quality = 92);

}  // namespace facemorph

#endif
