#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "priorpaint/tensor.hpp"

// Reverse-mode tape. A graph is built per training step / objective
// evaluation; values are computed eagerly, gradients on backward(). Ops only
// reference earlier nodes, so reverse creation order is a valid topological
// order. Loss reductions that need masking carry their masks as constants
// (masked pixels are never read, which keeps the unsupervision contract
// bit-exact).

namespace priorpaint::ad {

struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

class Tape {
public:
    /// Registers an input tensor. Gradients are tracked (and retrievable
    /// after backward) only when requires_grad is set.
    Var input(Tensor value, bool requires_grad = false);

    const Tensor& val(Var v) const { return nodes_[v.id].value; }
    const Tensor& grad(Var v) const;
    bool has_grad(Var v) const { return nodes_[v.id].has_grad; }
    double scalar(Var v) const { return nodes_[v.id].value[0]; }

    // elementwise / structural
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var a, double k);
    Var relu(Var a);
    Var leaky_relu(Var a, double alpha);
    Var tanh_act(Var a);
    Var sigmoid(Var a);
    Var broadcast_latent(Var z, int h, int w);  // (N,d,1,1) -> (N,d,h,w)
    Var concat_channels(Var a, Var b);
    Var slice_cols(Var a, int start, int len);  // (N,K) -> (N,len)
    Var reshape(Var a, Shape s);

    // network layers (dispatch to kernels::)
    Var dense(Var x, Var w, Var b);
    Var conv2d(Var x, Var w, Var b, int stride, int pad);
    Var upsample2(Var x);

    // reductions and loss heads; all produce scalars averaged over the batch
    Var mean_all(Var a);
    Var weighted_sum(const std::vector<std::pair<double, Var>>& terms);
    Var mean_of(const std::vector<Var>& scalars);
    /// Masked reconstruction mean (L1 or L2) per image, averaged over batch.
    Var masked_ctx_mean(Var gen, const Tensor& original, const Tensor& mask, bool l2 = false);
    /// Forward-difference gradient loss; stencils touching masked pixels are skipped.
    Var grad_diff(Var gen, const Tensor& original, const Tensor& mask);
    /// mean_n log(clamp(s_n)) or mean_n log(1 - clamp(s_n)); clamp keeps the
    /// score in [eps, 1-eps], eps = 1e-6.
    Var score_logmean(Var score, bool one_minus);
    /// mean_n log(1 - clamp(s_n, eps, 1-eps)) with eps = 1e-6.
    Var realism(Var score) { return score_logmean(score, true); }
    /// Mean pairwise squared latent distance; zs are (N,d) vars, result
    /// averaged over batch. Returns a zero constant when zs.size() < 2.
    Var pairwise_sqdist_mean(const std::vector<Var>& zs);

    void backward(Var root);

    size_t num_nodes() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        bool rg = false;
        bool has_grad = false;
        std::function<void(Tape&)> back;
    };

    Var make(Tensor value, bool rg, std::function<void(Tape&)> back = nullptr);
    Tensor& ensure_grad(int id);
    bool rg_of(Var v) const { return nodes_[v.id].rg; }

    std::vector<Node> nodes_;
};

}  // namespace priorpaint::ad
