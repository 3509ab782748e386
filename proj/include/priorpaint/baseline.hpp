#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "priorpaint/gan.hpp"
#include "priorpaint/losses.hpp"

// Per-image iterative latent search: momentum gradient descent on the
// combined loss through the frozen GAN, z projected back into [-1,1]^d each
// step. The speed/quality reference the learned predictor is measured
// against.

namespace priorpaint::baseline {

struct OptimOptions {
    int iters = 1500;
    double step = 0.01;
    double momentum = 0.9;
    LossWeights weights;
    CtxReduction ctx = CtxReduction::l1;
};

struct OptimTrace {
    std::vector<double> loss;       // one entry per iteration
    std::vector<double> best_loss;  // running minimum, non-increasing
    int iterations = 0;
    double wall_seconds = 0.0;
    Tensor final_z;  // best-loss iterate
};

/// Objective builder: scalar loss of z on the given tape. Lets tests swap in
/// analytically solvable surrogates.
using ZObjective = std::function<ad::Var(ad::Tape&, ad::Var)>;

std::pair<Tensor, OptimTrace> optimize_z_core(const ZObjective& objective, int d, const OptimOptions& opt,
                                              std::uint64_t seed);

/// The Eq.-2-style search against frozen gen/disc. Returns the best-loss
/// iterate, not the last.
std::pair<Tensor, OptimTrace> optimize_z(const models::Generator& gen, const models::Discriminator& disc,
                                         const Image& original, const BinaryMask& mask, const PriorMap* prior,
                                         const OptimOptions& opt, std::uint64_t seed);

std::pair<Image, OptimTrace> inpaint_iterative(const models::Generator& gen,
                                               const models::Discriminator& disc, const Image& original,
                                               const BinaryMask& mask, const PriorMap* prior,
                                               const OptimOptions& opt, std::uint64_t seed);

}  // namespace priorpaint::baseline
