#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "priorpaint/autodiff.hpp"
#include "priorpaint/tensor.hpp"

namespace priorpaint::nn {

/// Named parameter tensors in a stable order (checkpoints and the optimizer
/// both rely on it).
struct ParamList {
    std::vector<std::pair<std::string, Tensor>> items;

    Tensor& add(const std::string& name, Shape shape) {
        items.emplace_back(name, Tensor(shape));
        return items.back().second;
    }
    Tensor* find(const std::string& name);
    const Tensor* find(const std::string& name) const;
    long total_size() const;
    bool same_layout(const ParamList& o) const;
};

/// Fills every parameter tensor with N(0, stddev) draws; biases (names ending
/// in ".b") stay zero.
void init_params(ParamList& p, double stddev, std::uint64_t seed);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
public:
    Adam() = default;
    Adam(const ParamList& params, AdamConfig cfg);
    void step(ParamList& params, const std::vector<Tensor>& grads);

private:
    AdamConfig cfg_;
    long t_ = 0;
    std::vector<Tensor> m_, v_;
};

/// Parameters registered on a tape for one graph build.
struct TapeParams {
    std::vector<ad::Var> vars;

    static TapeParams attach(ad::Tape& t, const ParamList& p, bool requires_grad);
    /// Gradients in parameter order; zero tensors for params the graph never
    /// touched.
    std::vector<Tensor> collect_grads(const ad::Tape& t, const ParamList& p) const;
};

enum class Act { relu, leaky_relu, tanh };

Act act_from_name(const std::string& name);
std::string act_name(Act a);

Tensor apply_act(const Tensor& x, Act a, double leaky_alpha = 0.2);
ad::Var apply_act(ad::Tape& t, ad::Var x, Act a, double leaky_alpha = 0.2);

// Eval-path helpers mirroring the tape ops bit-exactly.
Tensor broadcast_latent(const Tensor& z, int h, int w);
Tensor concat_channels(const Tensor& a, const Tensor& b);
Tensor sigmoid(const Tensor& x);
Tensor tanh_t(const Tensor& x);

}  // namespace priorpaint::nn
