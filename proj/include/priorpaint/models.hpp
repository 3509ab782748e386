#pragma once

#include <optional>
#include <span>
#include <vector>

#include "priorpaint/image.hpp"
#include "priorpaint/nn.hpp"

// Model family: a small strided-conv GAN for 32x32 (or 16/8 for tests), a
// noise-prior predictor sharing the discriminator trunk, and a recurrent
// grouped predictor for frame windows. Conditioning is by channel
// concatenation: the prior map joins the discriminator/predictor input
// directly and the generator as a box-pooled pyramid at each stage input.
//
// Every model has an eval forward (plain kernels) and a tape forward; both
// run the same kernel sequence, so their outputs are bit-identical.

namespace priorpaint::models {

std::vector<int> default_gen_channels(int img);
std::vector<int> default_trunk_channels(int img);

struct GeneratorConfig {
    int d = 64;
    int img = 32;
    std::vector<int> chans;  // stem + one per up stage; derived from img if empty
    bool conditional = false;
    nn::Act hidden_act = nn::Act::relu;
    bool sigmoid_out = true;  // identity head only for linear-surrogate tests
    int seed_res = 2;

    int stages() const;
    void finalize();
};

class Generator {
public:
    static Generator init(GeneratorConfig cfg, std::uint64_t seed);

    /// z: (N,d,1,1); prior: (N,1,img,img) when conditional. Output in [0,1]
    /// (sigmoid head), shape (N,1,img,img).
    Tensor forward(const Tensor& z, const Tensor* prior) const;
    ad::Var forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var z, const Tensor* prior) const;

    /// Box-pooled copies of the prior at each stage input resolution.
    std::vector<Tensor> prior_pyramid(const Tensor& prior) const;

    GeneratorConfig cfg;
    nn::ParamList params;
};

struct TrunkConfig {
    int img = 32;
    int in_ch = 1;
    std::vector<int> chans;  // one per stride-2 stage; derived from img if empty
    nn::Act act = nn::Act::leaky_relu;
    double leaky = 0.2;

    int stages() const;
    void finalize();
    long flat_size() const;  // features after the last stage (chans.back()*2*2)
};

struct DiscriminatorConfig {
    int img = 32;
    std::vector<int> chans;
    bool conditional = false;
    nn::Act act = nn::Act::leaky_relu;
};

class Discriminator {
public:
    static Discriminator init(DiscriminatorConfig cfg, std::uint64_t seed);

    /// Scores in (0,1), shape (N,1,1,1); sigmoid output clamped away from
    /// exact 0/1.
    Tensor forward(const Tensor& x, const Tensor* prior) const;
    ad::Var forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var x, const Tensor* prior) const;

    DiscriminatorConfig cfg;
    TrunkConfig trunk;
    nn::ParamList params;
};

struct PredictorConfig {
    int d = 64;
    int img = 32;
    std::vector<int> chans;
    bool conditional = false;
    nn::Act act = nn::Act::leaky_relu;
};

class Predictor {
public:
    static Predictor init(PredictorConfig cfg, std::uint64_t seed);

    /// damaged: (N,1,img,img) masked image; output (N,d,1,1) in [-1,1]
    /// (tanh head).
    Tensor forward(const Tensor& damaged, const Tensor* prior) const;
    ad::Var forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var damaged, const Tensor* prior) const;

    PredictorConfig cfg;
    TrunkConfig trunk;
    nn::ParamList params;
};

struct SeqModelConfig {
    int d = 64;
    int img = 32;
    std::vector<int> chans;
    int hidden = 128;
    int window = 4;
    bool conditional = false;
    nn::Act act = nn::Act::leaky_relu;
};

/// Per-frame conv encoder -> LSTM -> latent head. Hidden state is reset at
/// each window start.
class SeqModel {
public:
    static SeqModel init(SeqModelConfig cfg, std::uint64_t seed);

    /// frames: W tensors (N,1,img,img); priors parallel to frames when
    /// conditional. Returns W latents (N,d,1,1) in [-1,1].
    std::vector<Tensor> forward(std::span<const Tensor> frames, const std::vector<Tensor>* priors) const;
    std::vector<ad::Var> forward(ad::Tape& t, const nn::TapeParams& tp, std::span<const ad::Var> frames,
                                 const std::vector<Tensor>* priors) const;

    SeqModelConfig cfg;
    TrunkConfig trunk;
    nn::ParamList params;
};

}  // namespace priorpaint::models
