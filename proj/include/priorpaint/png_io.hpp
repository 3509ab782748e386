#pragma once

#include <filesystem>
#include <vector>

#include "priorpaint/image.hpp"

// Minimal PNG codec for 8-bit grayscale (the only format this project
// writes). Deflate via zlib with fixed settings, so identical pixels produce
// byte-identical files.

namespace priorpaint::png {

void write_gray8(const std::filesystem::path& path, int h, int w, const std::vector<unsigned char>& pixels);

struct Gray8 {
    int h = 0, w = 0;
    std::vector<unsigned char> pixels;
};

Gray8 read_gray8(const std::filesystem::path& path);

/// Quantise-and-write convenience for [0,1] images.
void write_image(const std::filesystem::path& path, const Image& im);
Image read_image(const std::filesystem::path& path);

}  // namespace priorpaint::png
