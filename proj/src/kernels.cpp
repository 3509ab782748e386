#include "priorpaint/kernels.hpp"

#include <atomic>
#include <omp.h>

namespace priorpaint::kernels {

namespace {

std::atomic<Backend> g_backend{Backend::openmp};
thread_local bool tl_has_override = false;
thread_local Backend tl_override = Backend::serial;

bool use_omp() {
    return (tl_has_override ? tl_override : g_backend.load(std::memory_order_relaxed)) == Backend::openmp;
}

}  // namespace

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }

Backend backend() { return tl_has_override ? tl_override : g_backend.load(std::memory_order_relaxed); }

BackendGuard::BackendGuard(Backend b) : had_override_(tl_has_override), previous_(tl_override) {
    tl_has_override = true;
    tl_override = b;
}

BackendGuard::~BackendGuard() {
    tl_has_override = had_override_;
    tl_override = previous_;
}

int max_threads() { return omp_get_max_threads(); }

int conv_out_extent(int in, int k, int stride, int pad) { return (in + 2 * pad - k) / stride + 1; }

namespace {

// One (n, co) output plane; identical accumulation order for both backends.
inline void conv_plane(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad, Tensor& y,
                       int n, int co) {
    const int ci_n = x.shape.c, hi = x.shape.h, wi = x.shape.w;
    const int kh = w.shape.h, kw = w.shape.w;
    const int ho = y.shape.h, wo = y.shape.w;
    double* out = y.ptr() + y.idx(n, co, 0, 0);
    const double bias = b[static_cast<size_t>(co)];
    for (int i = 0; i < ho * wo; ++i) out[i] = bias;
    for (int ci = 0; ci < ci_n; ++ci) {
        const double* xp = x.ptr() + x.idx(n, ci, 0, 0);
        for (int r = 0; r < kh; ++r) {
            for (int s = 0; s < kw; ++s) {
                const double wv = w.at(co, ci, r, s);
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride + r - pad;
                    if (iy < 0 || iy >= hi) continue;
                    const double* xrow = xp + static_cast<size_t>(iy) * wi;
                    double* orow = out + static_cast<size_t>(oy) * wo;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride + s - pad;
                        if (ix < 0 || ix >= wi) continue;
                        orow[ox] += wv * xrow[ix];
                    }
                }
            }
        }
    }
}

inline void conv_dx_plane(const Tensor& w, const Tensor& dy, int stride, int pad, Tensor& dx, int n, int ci) {
    const int co_n = w.shape.n, kh = w.shape.h, kw = w.shape.w;
    const int ho = dy.shape.h, wo = dy.shape.w;
    const int hi = dx.shape.h, wi = dx.shape.w;
    double* out = dx.ptr() + dx.idx(n, ci, 0, 0);
    for (int co = 0; co < co_n; ++co) {
        const double* dyp = dy.ptr() + dy.idx(n, co, 0, 0);
        for (int r = 0; r < kh; ++r) {
            for (int s = 0; s < kw; ++s) {
                const double wv = w.at(co, ci, r, s);
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride + r - pad;
                    if (iy < 0 || iy >= hi) continue;
                    const double* dyrow = dyp + static_cast<size_t>(oy) * wo;
                    double* orow = out + static_cast<size_t>(iy) * wi;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride + s - pad;
                        if (ix < 0 || ix >= wi) continue;
                        orow[ix] += wv * dyrow[ox];
                    }
                }
            }
        }
    }
}

// dw for one (co, ci) filter slice.
inline void conv_dw_slice(const Tensor& x, const Tensor& dy, int stride, int pad, Tensor& dw, int co, int ci) {
    const int kh = dw.shape.h, kw = dw.shape.w;
    const int ho = dy.shape.h, wo = dy.shape.w;
    const int hi = x.shape.h, wi = x.shape.w;
    const int batch = x.shape.n;
    for (int r = 0; r < kh; ++r) {
        for (int s = 0; s < kw; ++s) {
            double acc = 0.0;
            for (int n = 0; n < batch; ++n) {
                const double* xp = x.ptr() + x.idx(n, ci, 0, 0);
                const double* dyp = dy.ptr() + dy.idx(n, co, 0, 0);
                for (int oy = 0; oy < ho; ++oy) {
                    const int iy = oy * stride + r - pad;
                    if (iy < 0 || iy >= hi) continue;
                    const double* xrow = xp + static_cast<size_t>(iy) * wi;
                    const double* dyrow = dyp + static_cast<size_t>(oy) * wo;
                    for (int ox = 0; ox < wo; ++ox) {
                        const int ix = ox * stride + s - pad;
                        if (ix < 0 || ix >= wi) continue;
                        acc += xrow[ix] * dyrow[ox];
                    }
                }
            }
            dw.at(co, ci, r, s) += acc;
        }
    }
}

}  // namespace

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad, Tensor& y) {
    const int batch = x.shape.n, co_n = w.shape.n;
    if (use_omp()) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int n = 0; n < batch; ++n)
            for (int co = 0; co < co_n; ++co) conv_plane(x, w, b, stride, pad, y, n, co);
    } else {
        for (int n = 0; n < batch; ++n)
            for (int co = 0; co < co_n; ++co) conv_plane(x, w, b, stride, pad, y, n, co);
    }
}

void conv2d_backward_input(const Tensor& w, const Tensor& dy, int stride, int pad, Tensor& dx) {
    const int batch = dx.shape.n, ci_n = dx.shape.c;
    if (use_omp()) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int n = 0; n < batch; ++n)
            for (int ci = 0; ci < ci_n; ++ci) conv_dx_plane(w, dy, stride, pad, dx, n, ci);
    } else {
        for (int n = 0; n < batch; ++n)
            for (int ci = 0; ci < ci_n; ++ci) conv_dx_plane(w, dy, stride, pad, dx, n, ci);
    }
}

void conv2d_backward_params(const Tensor& x, const Tensor& dy, int stride, int pad, Tensor& dw, Tensor& db) {
    const int co_n = dw.shape.n, ci_n = dw.shape.c;
    if (use_omp()) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int co = 0; co < co_n; ++co)
            for (int ci = 0; ci < ci_n; ++ci) conv_dw_slice(x, dy, stride, pad, dw, co, ci);
    } else {
        for (int co = 0; co < co_n; ++co)
            for (int ci = 0; ci < ci_n; ++ci) conv_dw_slice(x, dy, stride, pad, dw, co, ci);
    }
    // db: one accumulator per output channel.
    const int batch = dy.shape.n, ho = dy.shape.h, wo = dy.shape.w;
    for (int co = 0; co < co_n; ++co) {
        double acc = 0.0;
        for (int n = 0; n < batch; ++n) {
            const double* dyp = dy.ptr() + dy.idx(n, co, 0, 0);
            for (int i = 0; i < ho * wo; ++i) acc += dyp[i];
        }
        db[static_cast<size_t>(co)] += acc;
    }
}

namespace {

inline void dense_row(const Tensor& x, const Tensor& w, const Tensor& b, Tensor& y, int n) {
    const long k_n = x.size() / x.shape.n;
    const int m_n = w.shape.n;
    const double* xp = x.ptr() + static_cast<size_t>(n) * k_n;
    double* yp = y.ptr() + static_cast<size_t>(n) * m_n;
    for (int m = 0; m < m_n; ++m) {
        const double* wp = w.ptr() + static_cast<size_t>(m) * k_n;
        double acc = b[static_cast<size_t>(m)];
        for (long k = 0; k < k_n; ++k) acc += wp[k] * xp[k];
        yp[m] = acc;
    }
}

inline void dense_dx_row(const Tensor& w, const Tensor& dy, Tensor& dx, int n) {
    const long k_n = dx.size() / dx.shape.n;
    const int m_n = w.shape.n;
    const double* dyp = dy.ptr() + static_cast<size_t>(n) * m_n;
    double* dxp = dx.ptr() + static_cast<size_t>(n) * k_n;
    for (int m = 0; m < m_n; ++m) {
        const double g = dyp[m];
        const double* wp = w.ptr() + static_cast<size_t>(m) * k_n;
        for (long k = 0; k < k_n; ++k) dxp[k] += g * wp[k];
    }
}

inline void dense_dw_row(const Tensor& x, const Tensor& dy, Tensor& dw, Tensor& db, int m) {
    const long k_n = x.size() / x.shape.n;
    const int batch = x.shape.n, m_n = dw.shape.n;
    double* dwp = dw.ptr() + static_cast<size_t>(m) * k_n;
    double acc_b = 0.0;
    for (int n = 0; n < batch; ++n) {
        const double g = dy.ptr()[static_cast<size_t>(n) * m_n + m];
        const double* xp = x.ptr() + static_cast<size_t>(n) * k_n;
        for (long k = 0; k < k_n; ++k) dwp[k] += g * xp[k];
        acc_b += g;
    }
    db[static_cast<size_t>(m)] += acc_b;
}

}  // namespace

void dense_forward(const Tensor& x, const Tensor& w, const Tensor& b, Tensor& y) {
    const int batch = x.shape.n;
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (int n = 0; n < batch; ++n) dense_row(x, w, b, y, n);
    } else {
        for (int n = 0; n < batch; ++n) dense_row(x, w, b, y, n);
    }
}

void dense_backward_input(const Tensor& w, const Tensor& dy, Tensor& dx) {
    const int batch = dx.shape.n;
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (int n = 0; n < batch; ++n) dense_dx_row(w, dy, dx, n);
    } else {
        for (int n = 0; n < batch; ++n) dense_dx_row(w, dy, dx, n);
    }
}

void dense_backward_params(const Tensor& x, const Tensor& dy, Tensor& dw, Tensor& db) {
    const int m_n = dw.shape.n;
    if (use_omp()) {
#pragma omp parallel for schedule(static)
        for (int m = 0; m < m_n; ++m) dense_dw_row(x, dy, dw, db, m);
    } else {
        for (int m = 0; m < m_n; ++m) dense_dw_row(x, dy, dw, db, m);
    }
}

void upsample2_forward(const Tensor& x, Tensor& y) {
    const int batch = x.shape.n, ch = x.shape.c, hi = x.shape.h, wi = x.shape.w;
    const long planes = static_cast<long>(batch) * ch;
#pragma omp parallel for schedule(static) if (use_omp())
    for (long p = 0; p < planes; ++p) {
        const double* xp = x.ptr() + p * hi * wi;
        double* yp = y.ptr() + p * hi * wi * 4;
        for (int r = 0; r < hi; ++r) {
            for (int c = 0; c < wi; ++c) {
                const double v = xp[static_cast<size_t>(r) * wi + c];
                double* o = yp + (static_cast<size_t>(2 * r) * (2 * wi)) + 2 * c;
                o[0] = v;
                o[1] = v;
                o[2 * wi] = v;
                o[2 * wi + 1] = v;
            }
        }
    }
}

void upsample2_backward(const Tensor& dy, Tensor& dx) {
    const int batch = dx.shape.n, ch = dx.shape.c, hi = dx.shape.h, wi = dx.shape.w;
    const long planes = static_cast<long>(batch) * ch;
#pragma omp parallel for schedule(static) if (use_omp())
    for (long p = 0; p < planes; ++p) {
        const double* dyp = dy.ptr() + p * hi * wi * 4;
        double* dxp = dx.ptr() + p * hi * wi;
        for (int r = 0; r < hi; ++r) {
            for (int c = 0; c < wi; ++c) {
                const double* o = dyp + (static_cast<size_t>(2 * r) * (2 * wi)) + 2 * c;
                dxp[static_cast<size_t>(r) * wi + c] += o[0] + o[1] + o[2 * wi] + o[2 * wi + 1];
            }
        }
    }
}

Tensor avg_pool(const Tensor& x, int factor) {
    if (factor <= 0 || x.shape.h % factor != 0 || x.shape.w % factor != 0)
        throw ArgumentError("avg_pool: factor must divide spatial extents");
    Tensor y(Shape{x.shape.n, x.shape.c, x.shape.h / factor, x.shape.w / factor});
    const double inv = 1.0 / (static_cast<double>(factor) * factor);
    for (int n = 0; n < x.shape.n; ++n)
        for (int c = 0; c < x.shape.c; ++c)
            for (int r = 0; r < y.shape.h; ++r)
                for (int s = 0; s < y.shape.w; ++s) {
                    double acc = 0.0;
                    for (int dr = 0; dr < factor; ++dr)
                        for (int ds = 0; ds < factor; ++ds) acc += x.at(n, c, r * factor + dr, s * factor + ds);
                    y.at(n, c, r, s) = acc * inv;
                }
    return y;
}

}  // namespace priorpaint::kernels
