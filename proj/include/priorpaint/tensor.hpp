#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "priorpaint/errors.hpp"

namespace priorpaint {

/// NCHW shape. Vectors are (n, k, 1, 1), scalars (1, 1, 1, 1).
struct Shape {
    int n = 1, c = 1, h = 1, w = 1;

    long size() const { return static_cast<long>(n) * c * h * w; }
    bool operator==(const Shape&) const = default;
    std::string str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
               std::to_string(w) + ")";
    }
};

/// Dense double tensor, NCHW row-major.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape s, double fill = 0.0) : shape(s), data(static_cast<size_t>(s.size()), fill) {}

    static Tensor zeros(Shape s) { return Tensor(s); }
    static Tensor scalar(double v) {
        Tensor t(Shape{1, 1, 1, 1});
        t.data[0] = v;
        return t;
    }

    long size() const { return shape.size(); }

    double& at(int n, int c, int h, int w) { return data[idx(n, c, h, w)]; }
    double at(int n, int c, int h, int w) const { return data[idx(n, c, h, w)]; }

    double& operator[](size_t i) { return data[i]; }
    double operator[](size_t i) const { return data[i]; }

    double* ptr() { return data.data(); }
    const double* ptr() const { return data.data(); }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    size_t idx(int n, int c, int h, int w) const {
        return ((static_cast<size_t>(n) * shape.c + c) * shape.h + h) * shape.w + w;
    }

    Shape shape;
    std::vector<double> data;
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* where) {
    if (!(a.shape == b.shape))
        throw ArgumentError(std::string(where) + ": shape mismatch " + a.shape.str() + " vs " + b.shape.str());
}

}  // namespace priorpaint
