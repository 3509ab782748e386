#pragma once

#include <cstdint>
#include <vector>

#include "priorpaint/image.hpp"
#include "priorpaint/models.hpp"

namespace priorpaint::gan {

struct GanConfig {
    int d = 64;
    int img = 32;
    double lr_g = 2e-4;
    double lr_d = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    int batch = 32;
    int steps = 1500;
    std::uint64_t seed = 0;
    bool conditional = false;
    bool saturating = false;  // minimize log(1-D(G(z))) literally instead of -log D(G(z))
    std::vector<int> g_chans;
    std::vector<int> d_chans;

    void validate() const;
};

struct LossHistory {
    std::vector<double> d_loss;
    std::vector<double> g_loss;
};

struct TrainedGan {
    models::Generator g;
    models::Discriminator d;
    LossHistory history;
};

/// i.i.d. U[-1,1]^d latents, (batch, d, 1, 1).
Tensor sample_z(int batch, int d, std::uint64_t seed);

TrainedGan train_gan(const std::vector<Image>& images, const GanConfig& cfg);

/// Conditional variant; every sample must carry a prior map.
TrainedGan train_cgan(const std::vector<Image>& images, const std::vector<PriorMap>& priors,
                      const GanConfig& cfg);

Image generate(const models::Generator& g, const Tensor& z, const PriorMap* prior = nullptr);
double discriminate(const models::Discriminator& d, const Image& image, const PriorMap* prior = nullptr);

}  // namespace priorpaint::gan
