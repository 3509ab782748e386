#pragma once

#include "priorpaint/autodiff.hpp"
#include "priorpaint/image.hpp"
#include "priorpaint/mask.hpp"

namespace priorpaint {

/// Relative weights of the contextual / realism / gradient-difference terms.
struct LossWeights {
    double lambda1 = 1.0;
    double lambda2 = 0.05;
    double lambda3 = 0.2;

    void validate() const;
};

enum class CtxReduction { l1, l2 };

CtxReduction ctx_reduction_from_name(const std::string& name);

/// Mean |I - G| (or squared, for l2) over kept pixels; 0 for an all-zero
/// mask. Hole pixels of the original are never read.
double contextual_loss(const Image& original, const Image& generated, const BinaryMask& mask,
                       CtxReduction red = CtxReduction::l1);

/// log(1 - s) with s clamped to [1e-6, 1 - 1e-6].
double realism_loss(double score);

/// Forward-difference gradient mismatch, per-direction mean over stencils
/// whose both pixels are kept; the two direction means are summed.
double gradient_diff_loss(const Image& original, const Image& generated, const BinaryMask& mask);

double combined_loss(const Image& original, const Image& generated, const BinaryMask& mask, double score,
                     const LossWeights& w, CtxReduction red = CtxReduction::l1);

/// Batched tape version: generated (N,1,H,W) var, originals/masks constants,
/// scores (N,1,1,1) var. Per-image losses averaged over the batch.
ad::Var combined_loss(ad::Tape& t, ad::Var generated, const Tensor& originals, const Tensor& masks,
                      ad::Var scores, const LossWeights& w, CtxReduction red = CtxReduction::l1);

}  // namespace priorpaint
