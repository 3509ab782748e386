#include "priorpaint/predictor.hpp"

#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::predictor {

void PredictorTrainConfig::validate() const {
    if (steps < 0 || batch < 1) throw ArgumentError("PredictorTrainConfig: bad steps/batch");
    if (lr < 0.0) throw ArgumentError("PredictorTrainConfig: negative learning rate");
    if (mask_kinds.empty()) throw ArgumentError("PredictorTrainConfig: empty mask kind set");
    weights.validate();
}

Tensor predict_z(const models::Predictor& p, const Image& damaged, const PriorMap* prior) {
    Tensor prior_t;
    if (prior) prior_t = to_tensor(*prior);
    return p.forward(to_tensor(damaged), prior ? &prior_t : nullptr);
}

models::Predictor train_predictor(const models::Generator& gen, const models::Discriminator& disc,
                                  const std::vector<Image>& images, const std::vector<PriorMap>* priors,
                                  const PredictorTrainConfig& cfg, std::vector<double>* loss_history) {
    cfg.validate();
    if (images.empty()) throw ArgumentError("train_predictor: dataset is empty");
    if (gen.cfg.conditional && !priors)
        throw ArgumentError("train_predictor: conditional models require prior maps");
    if (priors && priors->size() != images.size())
        throw ArgumentError("train_predictor: missing prior map for some sample");

    const int img = gen.cfg.img;
    models::PredictorConfig pc;
    pc.d = gen.cfg.d;
    pc.img = img;
    pc.chans = cfg.chans;
    pc.conditional = gen.cfg.conditional;
    models::Predictor p = models::Predictor::init(pc, derive_seed(cfg.seed, "predictor.init"));

    nn::Adam opt(p.params, {cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
    Rng batch_rng(derive_seed(cfg.seed, "predictor.batch"));
    Rng mask_rng(derive_seed(cfg.seed, "predictor.mask"));

    const int batch = cfg.batch;
    for (int step = 0; step < cfg.steps; ++step) {
        Tensor originals(Shape{batch, 1, img, img});
        Tensor masks(Shape{batch, 1, img, img});
        Tensor damaged(Shape{batch, 1, img, img});
        Tensor prior_batch;
        if (pc.conditional) prior_batch = Tensor(Shape{batch, 1, img, img});

        for (int n = 0; n < batch; ++n) {
            const size_t i = batch_rng.uniform_int(images.size());
            const BinaryMask m = generate_mask(random_mask_spec(cfg.mask_kinds, img, mask_rng), img, img);
            const Image& src = images[i];
            double* op = originals.ptr() + originals.idx(n, 0, 0, 0);
            double* mp = masks.ptr() + masks.idx(n, 0, 0, 0);
            double* dp = damaged.ptr() + damaged.idx(n, 0, 0, 0);
            for (long k = 0; k < src.size(); ++k) {
                op[k] = src.pix[k];
                mp[k] = m.grid[k] ? 1.0 : 0.0;
                dp[k] = m.grid[k] ? src.pix[k] : 0.0;
            }
            if (pc.conditional)
                std::copy_n((*priors)[i].pix.data(), (*priors)[i].pix.size(),
                            prior_batch.ptr() + prior_batch.idx(n, 0, 0, 0));
        }
        const Tensor* c = pc.conditional ? &prior_batch : nullptr;

        ad::Tape t;
        nn::TapeParams tp_p = nn::TapeParams::attach(t, p.params, true);
        nn::TapeParams tp_g = nn::TapeParams::attach(t, gen.params, false);
        nn::TapeParams tp_d = nn::TapeParams::attach(t, disc.params, false);

        ad::Var z = p.forward(t, tp_p, t.input(damaged), c);
        ad::Var fake = gen.forward(t, tp_g, z, c);
        ad::Var score = disc.forward(t, tp_d, fake, c);
        ad::Var loss = combined_loss(t, fake, originals, masks, score, cfg.weights, cfg.ctx);

        const double value = t.scalar(loss);
        if (!std::isfinite(value)) throw TrainingDivergedError("train_predictor: loss", step);
        if (loss_history) loss_history->push_back(value);
        t.backward(loss);
        opt.step(p.params, tp_p.collect_grads(t, p.params));
    }
    return p;
}

std::pair<Image, Tensor> inpaint(const models::Predictor& p, const models::Generator& gen,
                                 const Image& original, const BinaryMask& mask, const PriorMap* prior) {
    if (p.cfg.d != gen.cfg.d || p.cfg.img != gen.cfg.img || p.cfg.conditional != gen.cfg.conditional)
        throw ArgumentError("inpaint: predictor and generator are incompatible");
    const Image damaged = apply_mask(original, mask);
    Tensor z = predict_z(p, damaged, prior);
    const Image out = gan::generate(gen, z, prior);
    return {compose(original, mask, out), std::move(z)};
}

}  // namespace priorpaint::predictor
