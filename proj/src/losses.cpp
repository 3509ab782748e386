#include "priorpaint/losses.hpp"

#include <cmath>

namespace priorpaint {

namespace {
constexpr double kScoreEps = 1e-6;
}

void LossWeights::validate() const {
    if (lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0)
        throw ArgumentError("LossWeights: weights must be non-negative");
    if (lambda1 == 0.0 && lambda2 == 0.0 && lambda3 == 0.0)
        throw ArgumentError("LossWeights: at least one weight must be positive");
}

CtxReduction ctx_reduction_from_name(const std::string& name) {
    if (name == "l1") return CtxReduction::l1;
    if (name == "l2") return CtxReduction::l2;
    throw ArgumentError("unknown contextual reduction: " + name);
}

double contextual_loss(const Image& original, const Image& generated, const BinaryMask& mask,
                       CtxReduction red) {
    if (!original.same_shape(generated) || original.h != mask.h || original.w != mask.w)
        throw ArgumentError("contextual_loss: shape mismatch");
    // Single-image case of the fused tape op; shares its implementation so
    // plain and tape values agree bit-exactly.
    ad::Tape t;
    ad::Var g = t.input(to_tensor(generated));
    return t.scalar(t.masked_ctx_mean(g, to_tensor(original), mask.to_tensor(), red == CtxReduction::l2));
}

double realism_loss(double score) {
    const double s = std::min(std::max(score, kScoreEps), 1.0 - kScoreEps);
    return std::log(1.0 - s);
}

double gradient_diff_loss(const Image& original, const Image& generated, const BinaryMask& mask) {
    if (!original.same_shape(generated) || original.h != mask.h || original.w != mask.w)
        throw ArgumentError("gradient_diff_loss: shape mismatch");
    if (original.h < 2 || original.w < 2) throw ArgumentError("gradient_diff_loss: images must be >= 2x2");
    ad::Tape t;
    ad::Var g = t.input(to_tensor(generated));
    return t.scalar(t.grad_diff(g, to_tensor(original), mask.to_tensor()));
}

double combined_loss(const Image& original, const Image& generated, const BinaryMask& mask, double score,
                     const LossWeights& w, CtxReduction red) {
    w.validate();
    double acc = w.lambda1 * contextual_loss(original, generated, mask, red);
    acc += w.lambda2 * realism_loss(score);
    acc += w.lambda3 * gradient_diff_loss(original, generated, mask);
    return acc;
}

ad::Var combined_loss(ad::Tape& t, ad::Var generated, const Tensor& originals, const Tensor& masks,
                      ad::Var scores, const LossWeights& w, CtxReduction red) {
    w.validate();
    std::vector<std::pair<double, ad::Var>> terms;
    terms.emplace_back(w.lambda1, t.masked_ctx_mean(generated, originals, masks, red == CtxReduction::l2));
    terms.emplace_back(w.lambda2, t.realism(scores));
    terms.emplace_back(w.lambda3, t.grad_diff(generated, originals, masks));
    return t.weighted_sum(terms);
}

}  // namespace priorpaint
