#pragma once

#include <span>
#include <vector>

#include "priorpaint/tensor.hpp"

namespace priorpaint {

/// Grayscale intensity grid, row-major, values in [0,1]. A masked image is an
/// Image whose hole pixels hold 0.
struct Image {
    int h = 0, w = 0;
    std::vector<double> pix;

    Image() = default;
    Image(int h_, int w_, double fill = 0.0) : h(h_), w(w_), pix(static_cast<size_t>(h_) * w_, fill) {}

    double& at(int r, int c) { return pix[static_cast<size_t>(r) * w + c]; }
    double at(int r, int c) const { return pix[static_cast<size_t>(r) * w + c]; }
    long size() const { return static_cast<long>(h) * w; }

    bool same_shape(const Image& o) const { return h == o.h && w == o.w; }
};

/// Keypoint heatmap; values in [0,1], peak-normalised.
using PriorMap = Image;

inline Tensor to_tensor(const Image& im) {
    Tensor t(Shape{1, 1, im.h, im.w});
    t.data = im.pix;
    return t;
}

/// Stacks images into an (N,1,H,W) batch.
Tensor batch_tensor(std::span<const Image> images);

inline Image image_from_tensor(const Tensor& t, int n = 0, int c = 0) {
    Image im(t.shape.h, t.shape.w);
    const double* p = t.ptr() + t.idx(n, c, 0, 0);
    std::copy_n(p, im.pix.size(), im.pix.data());
    return im;
}

/// Quantise to 8 bits (round half up after clamping to [0,1]).
std::vector<unsigned char> quantize8(const Image& im);
Image dequantize8(std::span<const unsigned char> bytes, int h, int w);

bool images_equal(const Image& a, const Image& b);
double max_abs_diff(const Image& a, const Image& b);

}  // namespace priorpaint
