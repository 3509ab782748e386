#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "priorpaint/gan.hpp"
#include "priorpaint/losses.hpp"

// Noise-prior predictor: a conv net that maps a masked image (optionally with
// a structural-prior channel) to a latent vector, trained against a frozen
// GAN so that one forward pass replaces the per-image latent search.

namespace priorpaint::predictor {

struct PredictorTrainConfig {
    int steps = 1500;
    int batch = 32;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    std::uint64_t seed = 0;
    LossWeights weights;
    CtxReduction ctx = CtxReduction::l1;
    std::vector<MaskKind> mask_kinds{MaskKind::rc, MaskKind::rf, MaskKind::rch};
    std::vector<int> chans;  // predictor trunk; defaults per image size

    void validate() const;
};

/// One deterministic forward pass; output (1,d,1,1) in [-1,1].
Tensor predict_z(const models::Predictor& p, const Image& damaged, const PriorMap* prior = nullptr);

/// Trains the predictor against frozen gen/disc by minimizing the combined
/// loss over (image, fresh mask) pairs. Masked pixels of the originals are
/// never read by any loss term.
models::Predictor train_predictor(const models::Generator& gen, const models::Discriminator& disc,
                                  const std::vector<Image>& images, const std::vector<PriorMap>* priors,
                                  const PredictorTrainConfig& cfg,
                                  std::vector<double>* loss_history = nullptr);

/// Single-pass inpainting: z = P(M (.) I), output = compose(I, M, G(z)).
/// Exactly one predictor forward and one generator forward.
std::pair<Image, Tensor> inpaint(const models::Predictor& p, const models::Generator& gen,
                                 const Image& original, const BinaryMask& mask,
                                 const PriorMap* prior = nullptr);

}  // namespace priorpaint::predictor
