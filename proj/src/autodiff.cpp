#include "priorpaint/autodiff.hpp"

#include <cmath>

#include "priorpaint/kernels.hpp"

namespace priorpaint::ad {

namespace {
constexpr double kScoreEps = 1e-6;
}

Var Tape::make(Tensor value, bool rg, std::function<void(Tape&)> back) {
    Node n;
    n.value = std::move(value);
    n.rg = rg;
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::input(Tensor value, bool requires_grad) { return make(std::move(value), requires_grad); }

const Tensor& Tape::grad(Var v) const {
    const Node& n = nodes_[v.id];
    if (!n.has_grad) throw ArgumentError("Tape::grad: no gradient recorded for this var");
    return n.grad;
}

Tensor& Tape::ensure_grad(int id) {
    Node& n = nodes_[id];
    if (!n.has_grad) {
        n.grad = Tensor::zeros(n.value.shape);
        n.has_grad = true;
    }
    return n.grad;
}

Var Tape::add(Var a, Var b) {
    require_same_shape(val(a), val(b), "add");
    Tensor out = val(a);
    const Tensor& vb = val(b);
    for (size_t i = 0; i < out.data.size(); ++i) out[i] += vb[i];
    const bool rg = rg_of(a) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, b](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            for (Var p : {a, b}) {
                if (!t.rg_of(p)) continue;
                Tensor& gp = t.ensure_grad(p.id);
                for (size_t i = 0; i < g.data.size(); ++i) gp[i] += g[i];
            }
        };
    }
    return o;
}

Var Tape::sub(Var a, Var b) {
    require_same_shape(val(a), val(b), "sub");
    Tensor out = val(a);
    const Tensor& vb = val(b);
    for (size_t i = 0; i < out.data.size(); ++i) out[i] -= vb[i];
    const bool rg = rg_of(a) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, b](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            if (t.rg_of(a)) {
                Tensor& ga = t.ensure_grad(a.id);
                for (size_t i = 0; i < g.data.size(); ++i) ga[i] += g[i];
            }
            if (t.rg_of(b)) {
                Tensor& gb = t.ensure_grad(b.id);
                for (size_t i = 0; i < g.data.size(); ++i) gb[i] -= g[i];
            }
        };
    }
    return o;
}

Var Tape::mul(Var a, Var b) {
    require_same_shape(val(a), val(b), "mul");
    Tensor out = val(a);
    const Tensor& vb = val(b);
    for (size_t i = 0; i < out.data.size(); ++i) out[i] *= vb[i];
    const bool rg = rg_of(a) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, b](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            const Tensor& va = t.val(a);
            const Tensor& vb2 = t.val(b);
            if (t.rg_of(a)) {
                Tensor& ga = t.ensure_grad(a.id);
                for (size_t i = 0; i < g.data.size(); ++i) ga[i] += g[i] * vb2[i];
            }
            if (t.rg_of(b)) {
                Tensor& gb = t.ensure_grad(b.id);
                for (size_t i = 0; i < g.data.size(); ++i) gb[i] += g[i] * va[i];
            }
        };
    }
    return o;
}

Var Tape::scale(Var a, double k) {
    Tensor out = val(a);
    for (double& v : out.data) v *= k;
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, k](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            Tensor& ga = t.ensure_grad(a.id);
            for (size_t i = 0; i < g.data.size(); ++i) ga[i] += k * g[i];
        };
    }
    return o;
}

Var Tape::relu(Var a) { return leaky_relu(a, 0.0); }

Var Tape::leaky_relu(Var a, double alpha) {
    Tensor out = val(a);
    for (double& v : out.data) v = v > 0.0 ? v : alpha * v;
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, alpha](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            const Tensor& va = t.val(a);
            Tensor& ga = t.ensure_grad(a.id);
            for (size_t i = 0; i < g.data.size(); ++i) ga[i] += (va[i] > 0.0 ? 1.0 : alpha) * g[i];
        };
    }
    return o;
}

Var Tape::tanh_act(Var a) {
    Tensor out = val(a);
    for (double& v : out.data) v = std::tanh(v);
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            const Tensor& y = t.val(o);
            Tensor& ga = t.ensure_grad(a.id);
            for (size_t i = 0; i < g.data.size(); ++i) ga[i] += (1.0 - y[i] * y[i]) * g[i];
        };
    }
    return o;
}

Var Tape::sigmoid(Var a) {
    Tensor out = val(a);
    for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            const Tensor& y = t.val(o);
            Tensor& ga = t.ensure_grad(a.id);
            for (size_t i = 0; i < g.data.size(); ++i) ga[i] += y[i] * (1.0 - y[i]) * g[i];
        };
    }
    return o;
}

Var Tape::broadcast_latent(Var z, int h, int w) {
    const Tensor& vz = val(z);
    Tensor out(Shape{vz.shape.n, vz.shape.c, h, w});
    for (int n = 0; n < vz.shape.n; ++n)
        for (int c = 0; c < vz.shape.c; ++c) {
            const double v = vz.at(n, c, 0, 0);
            for (int r = 0; r < h; ++r)
                for (int s = 0; s < w; ++s) out.at(n, c, r, s) = v;
        }
    const bool rg = rg_of(z);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, z, h, w](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            Tensor& gz = t.ensure_grad(z.id);
            for (int n = 0; n < gz.shape.n; ++n)
                for (int c = 0; c < gz.shape.c; ++c) {
                    double acc = 0.0;
                    for (int r = 0; r < h; ++r)
                        for (int s = 0; s < w; ++s) acc += g.at(n, c, r, s);
                    gz.at(n, c, 0, 0) += acc;
                }
        };
    }
    return o;
}

Var Tape::concat_channels(Var a, Var b) {
    const Tensor& va = val(a);
    const Tensor& vb = val(b);
    if (va.shape.n != vb.shape.n || va.shape.h != vb.shape.h || va.shape.w != vb.shape.w)
        throw ArgumentError("concat_channels: incompatible shapes " + va.shape.str() + " vs " + vb.shape.str());
    Tensor out(Shape{va.shape.n, va.shape.c + vb.shape.c, va.shape.h, va.shape.w});
    const long plane = static_cast<long>(va.shape.h) * va.shape.w;
    for (int n = 0; n < va.shape.n; ++n) {
        std::copy_n(va.ptr() + va.idx(n, 0, 0, 0), static_cast<size_t>(va.shape.c) * plane,
                    out.ptr() + out.idx(n, 0, 0, 0));
        std::copy_n(vb.ptr() + vb.idx(n, 0, 0, 0), static_cast<size_t>(vb.shape.c) * plane,
                    out.ptr() + out.idx(n, va.shape.c, 0, 0));
    }
    const bool rg = rg_of(a) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        const int ca = va.shape.c, cb = vb.shape.c;
        nodes_[o.id].back = [o, a, b, ca, cb, plane](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            if (t.rg_of(a)) {
                Tensor& ga = t.ensure_grad(a.id);
                for (int n = 0; n < ga.shape.n; ++n) {
                    const double* src = g.ptr() + g.idx(n, 0, 0, 0);
                    double* dst = ga.ptr() + ga.idx(n, 0, 0, 0);
                    for (long i = 0; i < ca * plane; ++i) dst[i] += src[i];
                }
            }
            if (t.rg_of(b)) {
                Tensor& gb = t.ensure_grad(b.id);
                for (int n = 0; n < gb.shape.n; ++n) {
                    const double* src = g.ptr() + g.idx(n, ca, 0, 0);
                    double* dst = gb.ptr() + gb.idx(n, 0, 0, 0);
                    for (long i = 0; i < cb * plane; ++i) dst[i] += src[i];
                }
            }
        };
    }
    return o;
}

Var Tape::slice_cols(Var a, int start, int len) {
    const Tensor& va = val(a);
    const long k = va.size() / va.shape.n;
    if (start < 0 || start + len > k) throw ArgumentError("slice_cols: out of range");
    Tensor out(Shape{va.shape.n, len, 1, 1});
    for (int n = 0; n < va.shape.n; ++n)
        std::copy_n(va.ptr() + n * k + start, len, out.ptr() + static_cast<long>(n) * len);
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, start, len, k](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            Tensor& ga = t.ensure_grad(a.id);
            for (int n = 0; n < ga.shape.n; ++n) {
                const double* src = g.ptr() + static_cast<long>(n) * len;
                double* dst = ga.ptr() + n * k + start;
                for (int i = 0; i < len; ++i) dst[i] += src[i];
            }
        };
    }
    return o;
}

Var Tape::reshape(Var a, Shape s) {
    const Tensor& va = val(a);
    if (s.size() != va.size()) throw ArgumentError("reshape: size mismatch");
    Tensor out = va;
    out.shape = s;
    const bool rg = rg_of(a);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, a](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            Tensor& ga = t.ensure_grad(a.id);
            for (size_t i = 0; i < g.data.size(); ++i) ga[i] += g[i];
        };
    }
    return o;
}

Var Tape::dense(Var x, Var w, Var b) {
    const Tensor& vx = val(x);
    const Tensor& vw = val(w);
    const Tensor& vb = val(b);
    Tensor out(Shape{vx.shape.n, vw.shape.n, 1, 1});
    kernels::dense_forward(vx, vw, vb, out);
    const bool rg = rg_of(x) || rg_of(w) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, x, w, b](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            if (t.rg_of(x)) kernels::dense_backward_input(t.val(w), g, t.ensure_grad(x.id));
            if (t.rg_of(w) || t.rg_of(b))
                kernels::dense_backward_params(t.val(x), g, t.ensure_grad(w.id), t.ensure_grad(b.id));
        };
    }
    return o;
}

Var Tape::conv2d(Var x, Var w, Var b, int stride, int pad) {
    const Tensor& vx = val(x);
    const Tensor& vw = val(w);
    const Tensor& vb = val(b);
    if (vx.shape.c != vw.shape.c)
        throw ArgumentError("conv2d: channel mismatch " + vx.shape.str() + " vs " + vw.shape.str());
    Tensor out(Shape{vx.shape.n, vw.shape.n, kernels::conv_out_extent(vx.shape.h, vw.shape.h, stride, pad),
                     kernels::conv_out_extent(vx.shape.w, vw.shape.w, stride, pad)});
    kernels::conv2d_forward(vx, vw, vb, stride, pad, out);
    const bool rg = rg_of(x) || rg_of(w) || rg_of(b);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, x, w, b, stride, pad](Tape& t) {
            const Tensor& g = t.nodes_[o.id].grad;
            if (t.rg_of(x)) kernels::conv2d_backward_input(t.val(w), g, stride, pad, t.ensure_grad(x.id));
            if (t.rg_of(w) || t.rg_of(b))
                kernels::conv2d_backward_params(t.val(x), g, stride, pad, t.ensure_grad(w.id),
                                                t.ensure_grad(b.id));
        };
    }
    return o;
}

Var Tape::upsample2(Var x) {
    const Tensor& vx = val(x);
    Tensor out(Shape{vx.shape.n, vx.shape.c, vx.shape.h * 2, vx.shape.w * 2});
    kernels::upsample2_forward(vx, out);
    const bool rg = rg_of(x);
    Var o = make(std::move(out), rg);
    if (rg) {
        nodes_[o.id].back = [o, x](Tape& t) {
            kernels::upsample2_backward(t.nodes_[o.id].grad, t.ensure_grad(x.id));
        };
    }
    return o;
}

Var Tape::mean_all(Var a) {
    const Tensor& va = val(a);
    double acc = 0.0;
    for (double v : va.data) acc += v;
    const double inv = 1.0 / static_cast<double>(va.size());
    const bool rg = rg_of(a);
    Var o = make(Tensor::scalar(acc * inv), rg);
    if (rg) {
        nodes_[o.id].back = [o, a, inv](Tape& t) {
            const double g = t.nodes_[o.id].grad[0] * inv;
            Tensor& ga = t.ensure_grad(a.id);
            for (double& v : ga.data) v += g;
        };
    }
    return o;
}

Var Tape::weighted_sum(const std::vector<std::pair<double, Var>>& terms) {
    double acc = 0.0;
    bool rg = false;
    for (const auto& [k, v] : terms) {
        acc += k * scalar(v);
        rg = rg || rg_of(v);
    }
    Var o = make(Tensor::scalar(acc), rg);
    if (rg) {
        auto copy = terms;
        nodes_[o.id].back = [o, copy](Tape& t) {
            const double g = t.nodes_[o.id].grad[0];
            for (const auto& [k, v] : copy)
                if (t.rg_of(v)) t.ensure_grad(v.id)[0] += k * g;
        };
    }
    return o;
}

Var Tape::mean_of(const std::vector<Var>& scalars) {
    if (scalars.empty()) throw ArgumentError("mean_of: empty list");
    std::vector<std::pair<double, Var>> terms;
    const double k = 1.0 / static_cast<double>(scalars.size());
    terms.reserve(scalars.size());
    for (Var v : scalars) terms.emplace_back(k, v);
    return weighted_sum(terms);
}

Var Tape::masked_ctx_mean(Var gen, const Tensor& original, const Tensor& mask, bool l2) {
    const Tensor& vg = val(gen);
    require_same_shape(vg, original, "masked_ctx_mean");
    require_same_shape(vg, mask, "masked_ctx_mean(mask)");
    const int batch = vg.shape.n;
    const long per = vg.size() / batch;
    double total = 0.0;
    for (int n = 0; n < batch; ++n) {
        double acc = 0.0;
        long count = 0;
        const double* gp = vg.ptr() + n * per;
        const double* op = original.ptr() + n * per;
        const double* mp = mask.ptr() + n * per;
        for (long i = 0; i < per; ++i) {
            if (mp[i] == 0.0) continue;  // hole pixels are never read
            const double d = op[i] - gp[i];
            acc += l2 ? d * d : std::fabs(d);
            ++count;
        }
        total += count > 0 ? acc / static_cast<double>(count) : 0.0;
    }
    const bool rg = rg_of(gen);
    Var o = make(Tensor::scalar(total / batch), rg);
    if (rg) {
        Tensor orig = original;
        Tensor m = mask;
        nodes_[o.id].back = [o, gen, orig = std::move(orig), m = std::move(m), l2](Tape& t) {
            const double g0 = t.nodes_[o.id].grad[0];
            const Tensor& vg2 = t.val(gen);
            Tensor& gg = t.ensure_grad(gen.id);
            const int batch2 = vg2.shape.n;
            const long per2 = vg2.size() / batch2;
            for (int n = 0; n < batch2; ++n) {
                const double* mp = m.ptr() + n * per2;
                long count = 0;
                for (long i = 0; i < per2; ++i) count += mp[i] != 0.0;
                if (count == 0) continue;
                const double k = g0 / (static_cast<double>(batch2) * static_cast<double>(count));
                const double* op = orig.ptr() + n * per2;
                const double* gp = vg2.ptr() + n * per2;
                double* dst = gg.ptr() + n * per2;
                for (long i = 0; i < per2; ++i) {
                    if (mp[i] == 0.0) continue;
                    const double d = op[i] - gp[i];
                    if (l2)
                        dst[i] += k * (-2.0 * d);
                    else
                        dst[i] += k * (d > 0.0 ? -1.0 : (d < 0.0 ? 1.0 : 0.0));
                }
            }
        };
    }
    return o;
}

namespace {

// Shared forward/backward walker for the gradient-difference loss. For each
// image: sum of |d(orig) - d(gen)| over x- and y-stencils whose both pixels
// are unmasked, each direction reduced by its own valid-count mean.
struct GdlDir {
    int dr, dc;
};

double gdl_image(const double* op, const double* gp, const double* mp, int h, int w, double* dst, double k) {
    double loss = 0.0;
    const GdlDir dirs[2] = {{0, 1}, {1, 0}};
    for (const auto& dir : dirs) {
        long count = 0;
        for (int r = 0; r + dir.dr < h; ++r)
            for (int c = 0; c + dir.dc < w; ++c) {
                const long i0 = static_cast<long>(r) * w + c;
                const long i1 = static_cast<long>(r + dir.dr) * w + (c + dir.dc);
                if (mp[i0] == 0.0 || mp[i1] == 0.0) continue;
                ++count;
            }
        if (count == 0) continue;
        double acc = 0.0;
        const double inv = 1.0 / static_cast<double>(count);
        for (int r = 0; r + dir.dr < h; ++r)
            for (int c = 0; c + dir.dc < w; ++c) {
                const long i0 = static_cast<long>(r) * w + c;
                const long i1 = static_cast<long>(r + dir.dr) * w + (c + dir.dc);
                if (mp[i0] == 0.0 || mp[i1] == 0.0) continue;
                const double u = (op[i1] - op[i0]) - (gp[i1] - gp[i0]);
                acc += std::fabs(u);
                if (dst != nullptr) {
                    const double s = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
                    // d|u|/dgen[i1] = -s, d|u|/dgen[i0] = +s
                    dst[i1] += k * inv * (-s);
                    dst[i0] += k * inv * s;
                }
            }
        loss += acc * inv;
    }
    return loss;
}

}  // namespace

Var Tape::grad_diff(Var gen, const Tensor& original, const Tensor& mask) {
    const Tensor& vg = val(gen);
    require_same_shape(vg, original, "grad_diff");
    require_same_shape(vg, mask, "grad_diff(mask)");
    if (vg.shape.h < 2 || vg.shape.w < 2) throw ArgumentError("grad_diff: images must be at least 2x2");
    const int batch = vg.shape.n, h = vg.shape.h, w = vg.shape.w;
    const long per = vg.size() / batch;
    double total = 0.0;
    for (int n = 0; n < batch; ++n)
        total += gdl_image(original.ptr() + n * per, vg.ptr() + n * per, mask.ptr() + n * per, h, w, nullptr, 0.0);
    const bool rg = rg_of(gen);
    Var o = make(Tensor::scalar(total / batch), rg);
    if (rg) {
        Tensor orig = original;
        Tensor m = mask;
        nodes_[o.id].back = [o, gen, orig = std::move(orig), m = std::move(m), h, w, per](Tape& t) {
            const double g0 = t.nodes_[o.id].grad[0];
            const Tensor& vg2 = t.val(gen);
            Tensor& gg = t.ensure_grad(gen.id);
            const int batch2 = vg2.shape.n;
            const double k = g0 / batch2;
            for (int n = 0; n < batch2; ++n)
                gdl_image(orig.ptr() + n * per, vg2.ptr() + n * per, m.ptr() + n * per, h, w,
                          gg.ptr() + n * per, k);
        };
    }
    return o;
}

Var Tape::score_logmean(Var score, bool one_minus) {
    const Tensor& vs = val(score);
    const int batch = vs.shape.n;
    double total = 0.0;
    for (int n = 0; n < batch; ++n) {
        const double s = std::min(std::max(vs[static_cast<size_t>(n)], kScoreEps), 1.0 - kScoreEps);
        total += std::log(one_minus ? 1.0 - s : s);
    }
    const bool rg = rg_of(score);
    Var o = make(Tensor::scalar(total / batch), rg);
    if (rg) {
        nodes_[o.id].back = [o, score, batch, one_minus](Tape& t) {
            const double g0 = t.nodes_[o.id].grad[0] / batch;
            const Tensor& vs2 = t.val(score);
            Tensor& gs = t.ensure_grad(score.id);
            for (int n = 0; n < batch; ++n) {
                const double raw = vs2[static_cast<size_t>(n)];
                if (raw <= kScoreEps || raw >= 1.0 - kScoreEps) continue;  // clamped: zero slope
                gs[static_cast<size_t>(n)] += g0 * (one_minus ? -1.0 / (1.0 - raw) : 1.0 / raw);
            }
        };
    }
    return o;
}

Var Tape::pairwise_sqdist_mean(const std::vector<Var>& zs) {
    const int w = static_cast<int>(zs.size());
    if (w < 2) return make(Tensor::scalar(0.0), false);
    const Tensor& v0 = val(zs[0]);
    const int batch = v0.shape.n;
    const long d = v0.size() / batch;
    const double pairs = 0.5 * w * (w - 1);
    double total = 0.0;
    for (int n = 0; n < batch; ++n) {
        double acc = 0.0;
        for (int i = 0; i < w; ++i)
            for (int j = i + 1; j < w; ++j) {
                const double* zi = val(zs[i]).ptr() + n * d;
                const double* zj = val(zs[j]).ptr() + n * d;
                for (long k = 0; k < d; ++k) {
                    const double diff = zi[k] - zj[k];
                    acc += diff * diff;
                }
            }
        total += acc / pairs;
    }
    bool rg = false;
    for (Var z : zs) rg = rg || rg_of(z);
    Var o = make(Tensor::scalar(total / batch), rg);
    if (rg) {
        auto copy = zs;
        nodes_[o.id].back = [o, copy, batch, d, pairs, w](Tape& t) {
            const double g0 = t.nodes_[o.id].grad[0];
            const double k0 = g0 * 2.0 / (pairs * batch);
            for (int i = 0; i < w; ++i) {
                if (!t.rg_of(copy[i])) continue;
                Tensor& gi = t.ensure_grad(copy[i].id);
                for (int n = 0; n < batch; ++n) {
                    const double* zi = t.val(copy[i]).ptr() + n * d;
                    double* dst = gi.ptr() + n * d;
                    for (int j = 0; j < w; ++j) {
                        if (j == i) continue;
                        const double* zj = t.val(copy[j]).ptr() + n * d;
                        for (long k = 0; k < d; ++k) dst[k] += k0 * (zi[k] - zj[k]);
                    }
                }
            }
        };
    }
    return o;
}

void Tape::backward(Var root) {
    if (val(root).size() != 1) throw ArgumentError("backward: root must be scalar");
    if (!nodes_[root.id].rg) throw ArgumentError("backward: root does not depend on any gradient input");
    ensure_grad(root.id)[0] = 1.0;
    for (int id = root.id; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.rg || !n.has_grad || !n.back) continue;
        n.back(*this);
    }
}

}  // namespace priorpaint::ad
