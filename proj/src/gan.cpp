#include "priorpaint/gan.hpp"

#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::gan {

void GanConfig::validate() const {
    if (d < 1 || img < 8) throw ArgumentError("GanConfig: bad model dimensions");
    if (lr_g < 0.0 || lr_d < 0.0 || beta1 < 0.0 || beta2 < 0.0)
        throw ArgumentError("GanConfig: rates must be non-negative");
    if (batch < 1 || steps < 0) throw ArgumentError("GanConfig: batch and steps must be positive");
}

Tensor sample_z(int batch, int d, std::uint64_t seed) {
    if (batch < 1 || d < 1) throw ArgumentError("sample_z: batch and d must be >= 1");
    Rng rng(derive_seed(seed, "sample_z"));
    Tensor z(Shape{batch, d, 1, 1});
    for (double& v : z.data) v = rng.uniform(-1.0, 1.0);
    return z;
}

namespace {

void draw_latents(Tensor& z, Rng& rng) {
    for (double& v : z.data) v = rng.uniform(-1.0, 1.0);
}

struct Batch {
    Tensor images;
    Tensor priors;  // empty unless conditional
};

Batch gather_batch(const std::vector<Image>& images, const std::vector<PriorMap>* priors, int batch,
                   Rng& rng) {
    Batch b;
    const int h = images[0].h, w = images[0].w;
    b.images = Tensor(Shape{batch, 1, h, w});
    if (priors) b.priors = Tensor(Shape{batch, 1, h, w});
    for (int n = 0; n < batch; ++n) {
        const size_t i = rng.uniform_int(images.size());
        std::copy_n(images[i].pix.data(), images[i].pix.size(), b.images.ptr() + b.images.idx(n, 0, 0, 0));
        if (priors)
            std::copy_n((*priors)[i].pix.data(), (*priors)[i].pix.size(),
                        b.priors.ptr() + b.priors.idx(n, 0, 0, 0));
    }
    return b;
}

TrainedGan train_impl(const std::vector<Image>& images, const std::vector<PriorMap>* priors,
                      const GanConfig& cfg) {
    cfg.validate();
    if (images.empty()) throw ArgumentError("train_gan: dataset is empty");
    if (cfg.conditional) {
        if (!priors) throw ArgumentError("train_cgan: prior maps required");
        if (priors->size() != images.size())
            throw ArgumentError("train_cgan: missing prior map for some sample");
    }

    models::GeneratorConfig gc;
    gc.d = cfg.d;
    gc.img = cfg.img;
    gc.chans = cfg.g_chans;
    gc.conditional = cfg.conditional;
    models::Generator g = models::Generator::init(gc, derive_seed(cfg.seed, "gan.init.g"));

    models::DiscriminatorConfig dc;
    dc.img = cfg.img;
    dc.chans = cfg.d_chans;
    dc.conditional = cfg.conditional;
    models::Discriminator d = models::Discriminator::init(dc, derive_seed(cfg.seed, "gan.init.d"));

    nn::Adam opt_g(g.params, {cfg.lr_g, cfg.beta1, cfg.beta2, 1e-8});
    nn::Adam opt_d(d.params, {cfg.lr_d, cfg.beta1, cfg.beta2, 1e-8});

    Rng batch_rng(derive_seed(cfg.seed, "gan.batch"));
    Rng z_rng(derive_seed(cfg.seed, "gan.z"));

    LossHistory history;
    Tensor z(Shape{cfg.batch, cfg.d, 1, 1});

    for (int step = 0; step < cfg.steps; ++step) {
        const Batch real = gather_batch(images, priors, cfg.batch, batch_rng);
        const Tensor* c = cfg.conditional ? &real.priors : nullptr;

        // Discriminator update: ascend log D(x) + log(1 - D(G(z))).
        double d_loss;
        {
            draw_latents(z, z_rng);
            ad::Tape t;
            nn::TapeParams tp_d = nn::TapeParams::attach(t, d.params, true);
            nn::TapeParams tp_g = nn::TapeParams::attach(t, g.params, false);
            ad::Var fake = g.forward(t, tp_g, t.input(z), c);
            ad::Var s_fake = d.forward(t, tp_d, fake, c);
            ad::Var s_real = d.forward(t, tp_d, t.input(real.images), c);
            ad::Var loss = t.weighted_sum({{-1.0, t.score_logmean(s_real, false)},
                                           {-1.0, t.score_logmean(s_fake, true)}});
            d_loss = t.scalar(loss);
            if (!std::isfinite(d_loss)) throw TrainingDivergedError("gan: discriminator loss", step);
            t.backward(loss);
            opt_d.step(d.params, tp_d.collect_grads(t, d.params));
        }

        // Generator update.
        double g_loss;
        {
            draw_latents(z, z_rng);
            ad::Tape t;
            nn::TapeParams tp_g = nn::TapeParams::attach(t, g.params, true);
            nn::TapeParams tp_d = nn::TapeParams::attach(t, d.params, false);
            ad::Var fake = g.forward(t, tp_g, t.input(z), c);
            ad::Var s = d.forward(t, tp_d, fake, c);
            ad::Var loss = cfg.saturating ? t.score_logmean(s, true)
                                          : t.weighted_sum({{-1.0, t.score_logmean(s, false)}});
            g_loss = t.scalar(loss);
            if (!std::isfinite(g_loss)) throw TrainingDivergedError("gan: generator loss", step);
            t.backward(loss);
            opt_g.step(g.params, tp_g.collect_grads(t, g.params));
        }

        history.d_loss.push_back(d_loss);
        history.g_loss.push_back(g_loss);
    }
    return TrainedGan{std::move(g), std::move(d), std::move(history)};
}

}  // namespace

TrainedGan train_gan(const std::vector<Image>& images, const GanConfig& cfg) {
    if (cfg.conditional) throw ArgumentError("train_gan: use train_cgan for the conditional model");
    return train_impl(images, nullptr, cfg);
}

TrainedGan train_cgan(const std::vector<Image>& images, const std::vector<PriorMap>& priors,
                      const GanConfig& cfg) {
    GanConfig c = cfg;
    c.conditional = true;
    return train_impl(images, &priors, c);
}

Image generate(const models::Generator& g, const Tensor& z, const PriorMap* prior) {
    Tensor prior_t;
    if (prior) prior_t = to_tensor(*prior);
    const Tensor out = g.forward(z, prior ? &prior_t : nullptr);
    return image_from_tensor(out);
}

double discriminate(const models::Discriminator& d, const Image& image, const PriorMap* prior) {
    Tensor prior_t;
    if (prior) prior_t = to_tensor(*prior);
    const Tensor x = to_tensor(image);
    return d.forward(x, prior ? &prior_t : nullptr)[0];
}

}  // namespace priorpaint::gan
