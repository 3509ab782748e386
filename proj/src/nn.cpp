#include "priorpaint/nn.hpp"

#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::nn {

Tensor* ParamList::find(const std::string& name) {
    for (auto& [n, t] : items)
        if (n == name) return &t;
    return nullptr;
}

const Tensor* ParamList::find(const std::string& name) const {
    for (const auto& [n, t] : items)
        if (n == name) return &t;
    return nullptr;
}

long ParamList::total_size() const {
    long s = 0;
    for (const auto& [n, t] : items) s += t.size();
    return s;
}

bool ParamList::same_layout(const ParamList& o) const {
    if (items.size() != o.items.size()) return false;
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].first != o.items[i].first || !(items[i].second.shape == o.items[i].second.shape))
            return false;
    return true;
}

void init_params(ParamList& p, double stddev, std::uint64_t seed) {
    for (auto& [name, t] : p.items) {
        if (name.size() >= 2 && name.compare(name.size() - 2, 2, ".b") == 0) continue;
        Rng rng(derive_seed(seed, name));
        for (double& v : t.data) v = rng.normal(0.0, stddev);
    }
}

Adam::Adam(const ParamList& params, AdamConfig cfg) : cfg_(cfg) {
    m_.reserve(params.items.size());
    v_.reserve(params.items.size());
    for (const auto& [n, t] : params.items) {
        m_.emplace_back(t.shape);
        v_.emplace_back(t.shape);
    }
}

void Adam::step(ParamList& params, const std::vector<Tensor>& grads) {
    if (grads.size() != params.items.size()) throw ArgumentError("Adam::step: gradient count mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t i = 0; i < grads.size(); ++i) {
        Tensor& p = params.items[i].second;
        const Tensor& g = grads[i];
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (size_t k = 0; k < p.data.size(); ++k) {
            m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g[k];
            v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g[k] * g[k];
            p[k] -= cfg_.lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + cfg_.eps);
        }
    }
}

TapeParams TapeParams::attach(ad::Tape& t, const ParamList& p, bool requires_grad) {
    TapeParams tp;
    tp.vars.reserve(p.items.size());
    for (const auto& [n, tensor] : p.items) tp.vars.push_back(t.input(tensor, requires_grad));
    return tp;
}

std::vector<Tensor> TapeParams::collect_grads(const ad::Tape& t, const ParamList& p) const {
    std::vector<Tensor> grads;
    grads.reserve(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
        if (t.has_grad(vars[i]))
            grads.push_back(t.grad(vars[i]));
        else
            grads.emplace_back(p.items[i].second.shape);
    }
    return grads;
}

Act act_from_name(const std::string& name) {
    if (name == "relu") return Act::relu;
    if (name == "leaky_relu") return Act::leaky_relu;
    if (name == "tanh") return Act::tanh;
    throw ArgumentError("unknown activation: " + name);
}

std::string act_name(Act a) {
    switch (a) {
        case Act::relu: return "relu";
        case Act::leaky_relu: return "leaky_relu";
        case Act::tanh: return "tanh";
    }
    throw ArgumentError("act_name: bad value");
}

Tensor apply_act(const Tensor& x, Act a, double leaky_alpha) {
    Tensor y = x;
    switch (a) {
        case Act::relu:
            for (double& v : y.data) v = v > 0.0 ? v : 0.0;
            break;
        case Act::leaky_relu:
            for (double& v : y.data) v = v > 0.0 ? v : leaky_alpha * v;
            break;
        case Act::tanh:
            for (double& v : y.data) v = std::tanh(v);
            break;
    }
    return y;
}

ad::Var apply_act(ad::Tape& t, ad::Var x, Act a, double leaky_alpha) {
    switch (a) {
        case Act::relu: return t.relu(x);
        case Act::leaky_relu: return t.leaky_relu(x, leaky_alpha);
        case Act::tanh: return t.tanh_act(x);
    }
    throw ArgumentError("apply_act: bad value");
}

Tensor broadcast_latent(const Tensor& z, int h, int w) {
    Tensor out(Shape{z.shape.n, z.shape.c, h, w});
    for (int n = 0; n < z.shape.n; ++n)
        for (int c = 0; c < z.shape.c; ++c) {
            const double v = z.at(n, c, 0, 0);
            for (int r = 0; r < h; ++r)
                for (int s = 0; s < w; ++s) out.at(n, c, r, s) = v;
        }
    return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.shape.n != b.shape.n || a.shape.h != b.shape.h || a.shape.w != b.shape.w)
        throw ArgumentError("concat_channels: incompatible shapes");
    Tensor out(Shape{a.shape.n, a.shape.c + b.shape.c, a.shape.h, a.shape.w});
    const long plane = static_cast<long>(a.shape.h) * a.shape.w;
    for (int n = 0; n < a.shape.n; ++n) {
        std::copy_n(a.ptr() + a.idx(n, 0, 0, 0), static_cast<size_t>(a.shape.c) * plane,
                    out.ptr() + out.idx(n, 0, 0, 0));
        std::copy_n(b.ptr() + b.idx(n, 0, 0, 0), static_cast<size_t>(b.shape.c) * plane,
                    out.ptr() + out.idx(n, a.shape.c, 0, 0));
    }
    return out;
}

Tensor sigmoid(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) v = 1.0 / (1.0 + std::exp(-v));
    return y;
}

Tensor tanh_t(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.data) v = std::tanh(v);
    return y;
}

}  // namespace priorpaint::nn
