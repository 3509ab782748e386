#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "priorpaint/gan.hpp"
#include "priorpaint/losses.hpp"
#include "priorpaint/synth.hpp"

// Recurrent grouped noise prior: an LSTM over per-frame encodings predicts
// the latents of a window of W frames jointly; trained with the per-frame
// combined loss averaged over the window plus an optional pairwise latent
// consistency term.

namespace priorpaint::sequence {

struct SeqTrainConfig {
    int window = 4;
    int hidden = 128;
    double lambda4 = 0.0;  // subsequence-consistency weight
    int steps = 1200;
    int batch = 8;  // windows per step
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    std::uint64_t seed = 0;
    LossWeights weights;
    CtxReduction ctx = CtxReduction::l1;
    std::vector<MaskKind> mask_kinds{MaskKind::rc, MaskKind::rf, MaskKind::rch};
    std::vector<int> chans;

    void validate() const;
};

/// Joint prediction for one window (hidden state starts at zero).
std::vector<Tensor> predict_group_z(const models::SeqModel& m, std::span<const Image> damaged_frames,
                                    const std::vector<PriorMap>* priors = nullptr);

/// Mean of per-frame combined losses over the window.
double grouped_loss(std::span<const Image> originals, std::span<const Image> generated,
                    std::span<const BinaryMask> masks, std::span<const double> disc_scores,
                    const LossWeights& w, CtxReduction red = CtxReduction::l1);

/// Mean pairwise squared Euclidean distance between the window's latents;
/// 0 when W = 1.
double subsequence_loss(std::span<const Tensor> zs);

/// grouped + lambda4 * ss.
double sequence_total_loss(double grouped, double ss, double lambda4);

models::SeqModel train_sequence(const models::Generator& gen, const models::Discriminator& disc,
                                const std::vector<synth::SequenceSample>& sequences,
                                const std::vector<std::vector<PriorMap>>* priors, const SeqTrainConfig& cfg,
                                std::vector<double>* loss_history = nullptr);

/// Frames processed in consecutive windows of the model's W; a final partial
/// window runs at its actual length. Outputs are composed per frame.
std::vector<Image> inpaint_sequence(const models::SeqModel& m, const models::Generator& gen,
                                    std::span<const Image> frames, std::span<const BinaryMask> masks,
                                    const std::vector<PriorMap>* priors = nullptr);

}  // namespace priorpaint::sequence
