#pragma once

// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the library's code paths: naive double loops, direct
// formulas, dense Gaussian elimination.

#include <cmath>
#include <functional>
#include <vector>

#include "priorpaint/image.hpp"
#include "priorpaint/mask.hpp"

namespace oracles {

using priorpaint::BinaryMask;
using priorpaint::Image;

/// Naive double-loop gradient-difference loss: per direction, mean |d(orig) -
/// d(gen)| over stencils with both pixels kept; direction means summed.
inline double gdl_double_loop(const Image& orig, const Image& gen, const BinaryMask& mask) {
    double total = 0.0;
    {  // horizontal
        double acc = 0.0;
        long count = 0;
        for (int r = 0; r < orig.h; ++r)
            for (int c = 0; c + 1 < orig.w; ++c) {
                if (mask.at(r, c) == 0 || mask.at(r, c + 1) == 0) continue;
                const double di = orig.at(r, c + 1) - orig.at(r, c);
                const double dg = gen.at(r, c + 1) - gen.at(r, c);
                acc += std::fabs(di - dg);
                ++count;
            }
        if (count > 0) total += acc / static_cast<double>(count);
    }
    {  // vertical
        double acc = 0.0;
        long count = 0;
        for (int r = 0; r + 1 < orig.h; ++r)
            for (int c = 0; c < orig.w; ++c) {
                if (mask.at(r, c) == 0 || mask.at(r + 1, c) == 0) continue;
                const double di = orig.at(r + 1, c) - orig.at(r, c);
                const double dg = gen.at(r + 1, c) - gen.at(r, c);
                acc += std::fabs(di - dg);
                ++count;
            }
        if (count > 0) total += acc / static_cast<double>(count);
    }
    return total;
}

/// Direct masked mean-L1.
inline double ctx_double_loop(const Image& orig, const Image& gen, const BinaryMask& mask) {
    double acc = 0.0;
    long count = 0;
    for (int r = 0; r < orig.h; ++r)
        for (int c = 0; c < orig.w; ++c) {
            if (mask.at(r, c) == 0) continue;
            acc += std::fabs(orig.at(r, c) - gen.at(r, c));
            ++count;
        }
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
}

/// PSNR by direct formula (no cap logic beyond the zero-MSE guard).
inline double psnr_direct(const Image& a, const Image& b, double peak = 1.0, double cap = 100.0) {
    double mse = 0.0;
    for (size_t i = 0; i < a.pix.size(); ++i) {
        const double d = a.pix[i] - b.pix[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.size());
    if (mse < peak * peak * std::pow(10.0, -cap / 10.0)) return cap;
    return 10.0 * std::log10(peak * peak / mse);
}

/// Mean pairwise PSNR as an explicit double loop.
inline double pairwise_psnr_double_loop(const std::vector<Image>& frames) {
    const int n = static_cast<int>(frames.size());
    double acc = 0.0;
    int pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            acc += psnr_direct(frames[i], frames[j]);
            ++pairs;
        }
    return acc / pairs;
}

/// 8-connected components of the zero pixels (flood fill).
inline int hole_components(const BinaryMask& mask) {
    std::vector<char> seen(mask.grid.size(), 0);
    int components = 0;
    std::vector<std::pair<int, int>> stack;
    for (int r = 0; r < mask.h; ++r)
        for (int c = 0; c < mask.w; ++c) {
            if (mask.at(r, c) != 0 || seen[static_cast<size_t>(r) * mask.w + c]) continue;
            ++components;
            stack.push_back({r, c});
            seen[static_cast<size_t>(r) * mask.w + c] = 1;
            while (!stack.empty()) {
                auto [rr, cc] = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = rr + dr, nc = cc + dc;
                        if (nr < 0 || nr >= mask.h || nc < 0 || nc >= mask.w) continue;
                        if (mask.at(nr, nc) != 0 || seen[static_cast<size_t>(nr) * mask.w + nc]) continue;
                        seen[static_cast<size_t>(nr) * mask.w + nc] = 1;
                        stack.push_back({nr, nc});
                    }
            }
        }
    return components;
}

/// Central finite differences of f at x, step h.
inline std::vector<double> finite_diff(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double hi = f(x);
        x[i] = orig - h;
        const double lo = f(x);
        x[i] = orig;
        g[i] = (hi - lo) / (2.0 * h);
    }
    return g;
}

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    // Floor absorbs central-difference cancellation noise (~1e-11 at h=1e-5)
    // on zero components.
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-6});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

/// Dense least squares via normal equations + Gaussian elimination:
/// minimizes ||A x - b||^2 over the rows selected by `rows`.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& a,
                                         const std::vector<double>& b, const std::vector<int>& rows) {
    const size_t d = a[0].size();
    std::vector<std::vector<double>> ata(d, std::vector<double>(d + 1, 0.0));
    for (int r : rows) {
        for (size_t i = 0; i < d; ++i) {
            for (size_t j = 0; j < d; ++j) ata[i][j] += a[r][i] * a[r][j];
            ata[i][d] += a[r][i] * b[r];
        }
    }
    for (size_t col = 0; col < d; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < d; ++r)
            if (std::fabs(ata[r][col]) > std::fabs(ata[pivot][col])) pivot = r;
        std::swap(ata[col], ata[pivot]);
        for (size_t r = 0; r < d; ++r) {
            if (r == col || ata[col][col] == 0.0) continue;
            const double k = ata[r][col] / ata[col][col];
            for (size_t j = col; j <= d; ++j) ata[r][j] -= k * ata[col][j];
        }
    }
    std::vector<double> x(d, 0.0);
    for (size_t i = 0; i < d; ++i)
        if (ata[i][i] != 0.0) x[i] = ata[i][d] / ata[i][i];
    return x;
}

}  // namespace oracles
