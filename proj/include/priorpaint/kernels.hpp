#pragma once

#include "priorpaint/tensor.hpp"

// Compute kernels behind the network stack. Every kernel has a serial and an
// OpenMP variant; both compute each output element with the same inner-loop
// order, so results are bit-identical regardless of backend or thread count.
// Parallelism is only ever across independent output slices.
//
// Forward kernels overwrite their output; backward kernels accumulate (+=)
// into pre-sized gradient tensors.

namespace priorpaint::kernels {

enum class Backend { serial, openmp };

/// Process-wide default backend (openmp unless overridden).
void set_backend(Backend b);
Backend backend();

/// Scoped thread-local override; used when parallelising at a coarser grain
/// (e.g. across images) so nested kernel calls stay serial.
class BackendGuard {
public:
    explicit BackendGuard(Backend b);
    ~BackendGuard();
    BackendGuard(const BackendGuard&) = delete;
    BackendGuard& operator=(const BackendGuard&) = delete;

private:
    bool had_override_;
    Backend previous_;
};

int max_threads();

// x: (N,Ci,H,W), w: (Co,Ci,kh,kw), b: (1,Co,1,1), y: (N,Co,Ho,Wo)
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad, Tensor& y);
void conv2d_backward_input(const Tensor& w, const Tensor& dy, int stride, int pad, Tensor& dx);
void conv2d_backward_params(const Tensor& x, const Tensor& dy, int stride, int pad, Tensor& dw, Tensor& db);

int conv_out_extent(int in, int k, int stride, int pad);

// x: (N,K,1,1) or any shape with K = c*h*w, w: (M,K,1,1), b: (1,M,1,1), y: (N,M,1,1)
void dense_forward(const Tensor& x, const Tensor& w, const Tensor& b, Tensor& y);
void dense_backward_input(const Tensor& w, const Tensor& dy, Tensor& dx);
void dense_backward_params(const Tensor& x, const Tensor& dy, Tensor& dw, Tensor& db);

// Nearest-neighbour 2x upsampling.
void upsample2_forward(const Tensor& x, Tensor& y);
void upsample2_backward(const Tensor& dy, Tensor& dx);

/// Box-filter downsample by an integer factor (prior-map pyramids; no grad).
Tensor avg_pool(const Tensor& x, int factor);

}  // namespace priorpaint::kernels
