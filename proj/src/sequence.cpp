#include "priorpaint/sequence.hpp"

#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::sequence {

void SeqTrainConfig::validate() const {
    if (window < 1) throw ArgumentError("SeqTrainConfig: window must be >= 1");
    if (lambda4 < 0.0) throw ArgumentError("SeqTrainConfig: lambda4 must be >= 0");
    if (steps < 0 || batch < 1) throw ArgumentError("SeqTrainConfig: bad steps/batch");
    if (hidden < 1) throw ArgumentError("SeqTrainConfig: hidden size must be >= 1");
    if (mask_kinds.empty()) throw ArgumentError("SeqTrainConfig: empty mask kind set");
    weights.validate();
}

std::vector<Tensor> predict_group_z(const models::SeqModel& m, std::span<const Image> damaged_frames,
                                    const std::vector<PriorMap>* priors) {
    if (damaged_frames.empty()) throw ArgumentError("predict_group_z: empty window");
    std::vector<Tensor> frames;
    frames.reserve(damaged_frames.size());
    for (const Image& f : damaged_frames) frames.push_back(to_tensor(f));
    std::vector<Tensor> prior_t;
    if (priors) {
        if (priors->size() != damaged_frames.size())
            throw ArgumentError("predict_group_z: prior count mismatch");
        prior_t.reserve(priors->size());
        for (const PriorMap& p : *priors) prior_t.push_back(to_tensor(p));
    }
    return m.forward(frames, priors ? &prior_t : nullptr);
}

double grouped_loss(std::span<const Image> originals, std::span<const Image> generated,
                    std::span<const BinaryMask> masks, std::span<const double> disc_scores,
                    const LossWeights& w, CtxReduction red) {
    const size_t n = originals.size();
    if (n == 0 || generated.size() != n || masks.size() != n || disc_scores.size() != n)
        throw ArgumentError("grouped_loss: length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        acc += combined_loss(originals[i], generated[i], masks[i], disc_scores[i], w, red);
    return acc / static_cast<double>(n);
}

double subsequence_loss(std::span<const Tensor> zs) {
    const int w = static_cast<int>(zs.size());
    if (w < 1) throw ArgumentError("subsequence_loss: need at least one latent");
    if (w == 1) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < w; ++i)
        for (int j = i + 1; j < w; ++j) {
            require_same_shape(zs[i], zs[j], "subsequence_loss");
            for (size_t k = 0; k < zs[i].data.size(); ++k) {
                const double d = zs[i][k] - zs[j][k];
                acc += d * d;
            }
        }
    return acc / (0.5 * w * (w - 1));
}

double sequence_total_loss(double grouped, double ss, double lambda4) {
    if (lambda4 < 0.0) throw ArgumentError("sequence_total_loss: lambda4 must be >= 0");
    return grouped + lambda4 * ss;
}

models::SeqModel train_sequence(const models::Generator& gen, const models::Discriminator& disc,
                                const std::vector<synth::SequenceSample>& sequences,
                                const std::vector<std::vector<PriorMap>>* priors, const SeqTrainConfig& cfg,
                                std::vector<double>* loss_history) {
    cfg.validate();
    if (sequences.empty()) throw ArgumentError("train_sequence: no sequences");
    if (gen.cfg.conditional && !priors)
        throw ArgumentError("train_sequence: conditional models require prior maps");

    const int img = gen.cfg.img;
    const int w_len = cfg.window;

    // Sliding stride-1 windows over every sequence.
    std::vector<std::pair<int, int>> windows;  // (sequence, start)
    for (size_t s = 0; s < sequences.size(); ++s) {
        const int t_frames = static_cast<int>(sequences[s].frames.size());
        if (priors && (*priors)[s].size() != sequences[s].frames.size())
            throw ArgumentError("train_sequence: prior count mismatch");
        for (int t0 = 0; t0 + w_len <= t_frames; ++t0) windows.emplace_back(static_cast<int>(s), t0);
    }
    if (windows.empty()) throw ArgumentError("train_sequence: sequences shorter than the window");

    models::SeqModelConfig mc;
    mc.d = gen.cfg.d;
    mc.img = img;
    mc.chans = cfg.chans;
    mc.hidden = cfg.hidden;
    mc.window = w_len;
    mc.conditional = gen.cfg.conditional;
    models::SeqModel m = models::SeqModel::init(mc, derive_seed(cfg.seed, "sequence.init"));

    nn::Adam opt(m.params, {cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
    Rng batch_rng(derive_seed(cfg.seed, "sequence.batch"));
    Rng mask_rng(derive_seed(cfg.seed, "sequence.mask"));

    const int batch = cfg.batch;
    for (int step = 0; step < cfg.steps; ++step) {
        // Per frame position: batched originals, masks, damaged inputs, priors.
        std::vector<Tensor> originals(w_len, Tensor(Shape{batch, 1, img, img}));
        std::vector<Tensor> masks(w_len, Tensor(Shape{batch, 1, img, img}));
        std::vector<Tensor> damaged(w_len, Tensor(Shape{batch, 1, img, img}));
        std::vector<Tensor> prior_t;
        if (mc.conditional) prior_t.assign(w_len, Tensor(Shape{batch, 1, img, img}));

        for (int n = 0; n < batch; ++n) {
            const auto [si, t0] = windows[batch_rng.uniform_int(windows.size())];
            for (int k = 0; k < w_len; ++k) {
                const Image& src = sequences[si].frames[t0 + k];
                const BinaryMask mask =
                    generate_mask(random_mask_spec(cfg.mask_kinds, img, mask_rng), img, img);
                double* op = originals[k].ptr() + originals[k].idx(n, 0, 0, 0);
                double* mp = masks[k].ptr() + masks[k].idx(n, 0, 0, 0);
                double* dp = damaged[k].ptr() + damaged[k].idx(n, 0, 0, 0);
                for (long i = 0; i < src.size(); ++i) {
                    op[i] = src.pix[i];
                    mp[i] = mask.grid[i] ? 1.0 : 0.0;
                    dp[i] = mask.grid[i] ? src.pix[i] : 0.0;
                }
                if (mc.conditional)
                    std::copy_n((*priors)[si][t0 + k].pix.data(), (*priors)[si][t0 + k].pix.size(),
                                prior_t[k].ptr() + prior_t[k].idx(n, 0, 0, 0));
            }
        }

        ad::Tape t;
        nn::TapeParams tp_m = nn::TapeParams::attach(t, m.params, true);
        nn::TapeParams tp_g = nn::TapeParams::attach(t, gen.params, false);
        nn::TapeParams tp_d = nn::TapeParams::attach(t, disc.params, false);

        std::vector<ad::Var> frame_vars;
        frame_vars.reserve(static_cast<size_t>(w_len));
        for (int k = 0; k < w_len; ++k) frame_vars.push_back(t.input(damaged[k]));
        std::vector<ad::Var> zs = m.forward(t, tp_m, frame_vars, mc.conditional ? &prior_t : nullptr);

        std::vector<ad::Var> frame_losses;
        frame_losses.reserve(static_cast<size_t>(w_len));
        for (int k = 0; k < w_len; ++k) {
            const Tensor* c = mc.conditional ? &prior_t[k] : nullptr;
            ad::Var fake = gen.forward(t, tp_g, zs[k], c);
            ad::Var score = disc.forward(t, tp_d, fake, c);
            frame_losses.push_back(combined_loss(t, fake, originals[k], masks[k], score, cfg.weights, cfg.ctx));
        }
        ad::Var grouped = t.mean_of(frame_losses);
        ad::Var total = cfg.lambda4 > 0.0
                            ? t.weighted_sum({{1.0, grouped}, {cfg.lambda4, t.pairwise_sqdist_mean(zs)}})
                            : grouped;

        const double value = t.scalar(total);
        if (!std::isfinite(value)) throw TrainingDivergedError("train_sequence: loss", step);
        if (loss_history) loss_history->push_back(value);
        t.backward(total);
        opt.step(m.params, tp_m.collect_grads(t, m.params));
    }
    return m;
}

std::vector<Image> inpaint_sequence(const models::SeqModel& m, const models::Generator& gen,
                                    std::span<const Image> frames, std::span<const BinaryMask> masks,
                                    const std::vector<PriorMap>* priors) {
    if (frames.empty()) throw ArgumentError("inpaint_sequence: no frames");
    if (masks.size() != frames.size()) throw ArgumentError("inpaint_sequence: mask count mismatch");
    if (priors && priors->size() != frames.size())
        throw ArgumentError("inpaint_sequence: prior count mismatch");
    if (m.cfg.d != gen.cfg.d || m.cfg.img != gen.cfg.img || m.cfg.conditional != gen.cfg.conditional)
        throw ArgumentError("inpaint_sequence: models are incompatible");

    const int t_frames = static_cast<int>(frames.size());
    const int w_len = m.cfg.window;
    std::vector<Image> out;
    out.reserve(frames.size());

    for (int t0 = 0; t0 < t_frames; t0 += w_len) {
        const int len = std::min(w_len, t_frames - t0);
        std::vector<Image> damaged;
        damaged.reserve(static_cast<size_t>(len));
        std::vector<PriorMap> window_priors;
        for (int k = 0; k < len; ++k) {
            damaged.push_back(apply_mask(frames[t0 + k], masks[t0 + k]));
            if (priors) window_priors.push_back((*priors)[t0 + k]);
        }
        const std::vector<Tensor> zs =
            predict_group_z(m, damaged, priors ? &window_priors : nullptr);
        for (int k = 0; k < len; ++k) {
            const PriorMap* c = priors ? &window_priors[k] : nullptr;
            out.push_back(compose(frames[t0 + k], masks[t0 + k], gan::generate(gen, zs[k], c)));
        }
    }
    return out;
}

}  // namespace priorpaint::sequence
