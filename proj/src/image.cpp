#include "priorpaint/image.hpp"

#include <algorithm>
#include <cmath>

namespace priorpaint {

Tensor batch_tensor(std::span<const Image> images) {
    if (images.empty()) throw ArgumentError("batch_tensor: empty batch");
    const int h = images[0].h, w = images[0].w;
    Tensor t(Shape{static_cast<int>(images.size()), 1, h, w});
    for (size_t n = 0; n < images.size(); ++n) {
        if (images[n].h != h || images[n].w != w) throw ArgumentError("batch_tensor: ragged shapes");
        std::copy_n(images[n].pix.data(), images[n].pix.size(), t.ptr() + t.idx(static_cast<int>(n), 0, 0, 0));
    }
    return t;
}

std::vector<unsigned char> quantize8(const Image& im) {
    std::vector<unsigned char> out(im.pix.size());
    for (size_t i = 0; i < im.pix.size(); ++i) {
        const double v = std::clamp(im.pix[i], 0.0, 1.0);
        out[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    return out;
}

Image dequantize8(std::span<const unsigned char> bytes, int h, int w) {
    if (static_cast<long>(bytes.size()) != static_cast<long>(h) * w)
        throw ArgumentError("dequantize8: byte count does not match shape");
    Image im(h, w);
    for (size_t i = 0; i < bytes.size(); ++i) im.pix[i] = bytes[i] / 255.0;
    return im;
}

bool images_equal(const Image& a, const Image& b) { return a.h == b.h && a.w == b.w && a.pix == b.pix; }

double max_abs_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ArgumentError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.pix.size(); ++i) m = std::max(m, std::fabs(a.pix[i] - b.pix[i]));
    return m;
}

}  // namespace priorpaint
