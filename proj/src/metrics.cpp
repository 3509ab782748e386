#include "priorpaint/metrics.hpp"

#include <cmath>

namespace priorpaint::metrics {

namespace {

double psnr_from_mse(double mse, double peak, double cap) {
    const double floor_mse = peak * peak * std::pow(10.0, -cap / 10.0);
    if (mse < floor_mse) return cap;
    return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace

double psnr(const Image& a, const Image& b, double peak, double cap) {
    if (!a.same_shape(b)) throw ArgumentError("psnr: shape mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.pix.size(); ++i) {
        const double d = a.pix[i] - b.pix[i];
        acc += d * d;
    }
    return psnr_from_mse(acc / static_cast<double>(a.size()), peak, cap);
}

double temporal_consistency(std::span<const Image> frames, double peak, double cap) {
    const int n = static_cast<int>(frames.size());
    if (n < 2) throw ArgumentError("temporal_consistency: need at least 2 frames");
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) acc += psnr(frames[i], frames[j], peak, cap);
    return acc / (0.5 * n * (n - 1));
}

double temporal_consistency_hole(std::span<const Image> frames, std::span<const BinaryMask> masks,
                                 double peak, double cap) {
    const int n = static_cast<int>(frames.size());
    if (n < 2) throw ArgumentError("temporal_consistency_hole: need at least 2 frames");
    if (masks.size() != frames.size()) throw ArgumentError("temporal_consistency_hole: mask count mismatch");
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Image& a = frames[i];
            const Image& b = frames[j];
            if (!a.same_shape(b)) throw ArgumentError("temporal_consistency_hole: shape mismatch");
            double mse = 0.0;
            long count = 0;
            for (long k = 0; k < a.size(); ++k) {
                if (masks[i].grid[k] != 0 && masks[j].grid[k] != 0) continue;
                const double d = a.pix[k] - b.pix[k];
                mse += d * d;
                ++count;
            }
            acc += count == 0 ? cap : psnr_from_mse(mse / static_cast<double>(count), peak, cap);
        }
    return acc / (0.5 * n * (n - 1));
}

double per_frame_psnr(std::span<const Image> reconstructed, std::span<const Image> ground_truth, double peak,
                      double cap) {
    if (reconstructed.empty() || reconstructed.size() != ground_truth.size())
        throw ArgumentError("per_frame_psnr: length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < reconstructed.size(); ++i) acc += psnr(reconstructed[i], ground_truth[i], peak, cap);
    return acc / static_cast<double>(reconstructed.size());
}

}  // namespace priorpaint::metrics
