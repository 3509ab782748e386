#pragma once

#include <span>

#include "priorpaint/image.hpp"
#include "priorpaint/mask.hpp"

namespace priorpaint::metrics {

constexpr double kPsnrCap = 100.0;

/// 10*log10(peak^2 / MSE), capped at `cap` dB (returned whenever the MSE is
/// below the cap's implied floor, including identical images). Symmetric.
double psnr(const Image& a, const Image& b, double peak = 1.0, double cap = kPsnrCap);

/// Mean pairwise PSNR across all unordered frame pairs; needs >= 2 frames.
double temporal_consistency(std::span<const Image> frames, double peak = 1.0, double cap = kPsnrCap);

/// Variant restricted to pixels masked in either frame's mask. Pairs with no
/// hole pixels count as the cap.
double temporal_consistency_hole(std::span<const Image> frames, std::span<const BinaryMask> masks,
                                 double peak = 1.0, double cap = kPsnrCap);

double per_frame_psnr(std::span<const Image> reconstructed, std::span<const Image> ground_truth,
                      double peak = 1.0, double cap = kPsnrCap);

}  // namespace priorpaint::metrics
