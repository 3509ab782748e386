#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "priorpaint/image.hpp"
#include "priorpaint/rng.hpp"

namespace priorpaint {

/// {0,1} grid; 0 marks the hole, 1 the kept region.
struct BinaryMask {
    int h = 0, w = 0;
    std::vector<std::uint8_t> grid;

    BinaryMask() = default;
    BinaryMask(int h_, int w_, std::uint8_t fill = 1)
        : h(h_), w(w_), grid(static_cast<size_t>(h_) * w_, fill) {}

    std::uint8_t& at(int r, int c) { return grid[static_cast<size_t>(r) * w + c]; }
    std::uint8_t at(int r, int c) const { return grid[static_cast<size_t>(r) * w + c]; }

    long zeros() const;
    double hole_fraction() const { return static_cast<double>(zeros()) / (static_cast<double>(h) * w); }

    /// (1,1,H,W) tensor of 0/1 doubles for batched loss evaluation.
    Tensor to_tensor() const;

    bool operator==(const BinaryMask&) const = default;
};

enum class MaskKind { rc, rf, rch };

std::string mask_kind_name(MaskKind k);
MaskKind mask_kind_from_name(const std::string& name);

/// Deterministic recipe for a mask: identical spec => bit-identical grid.
struct MaskSpec {
    MaskKind kind = MaskKind::rc;
    double frac_lo = 0.5;            // rc
    double frac_hi = 0.7;            // rc
    double target_frac = 0.5;        // rf, rch
    std::vector<int> cell_sizes{4, 8};  // rch
    std::uint64_t seed = 0;

    static MaskSpec center(double lo, double hi, std::uint64_t seed);
    static MaskSpec freehand(double target, std::uint64_t seed);
    static MaskSpec checker(double target, std::vector<int> cells, std::uint64_t seed);
};

BinaryMask gen_center_mask(int h, int w, double frac_lo, double frac_hi, std::uint64_t seed);
BinaryMask gen_freehand_mask(int h, int w, double target_frac, std::uint64_t seed);
BinaryMask gen_checker_mask(int h, int w, double target_frac, const std::vector<int>& cell_sizes,
                            std::uint64_t seed);

/// Fixed-phase checkerboard; cells with (cell_x + cell_y) % 2 == parity are
/// zeroed. Exposed so the hand-enumerable case is directly testable.
BinaryMask checker_grid(int h, int w, int cell, int phase_x, int phase_y, int parity);

BinaryMask generate_mask(const MaskSpec& spec, int h, int w);

/// Draws a spec of a random kind from `kinds` with the families' default
/// parameters at the given image size (cell sizes scale with resolution).
MaskSpec random_mask_spec(std::span<const MaskKind> kinds, int img, Rng& rng);

/// Hadamard product M (.) I; hole pixels become exactly 0.
Image apply_mask(const Image& image, const BinaryMask& mask);

/// M (.) I + (1-M) (.) G. Kept pixels are copied from the original verbatim,
/// so they stay bit-equal.
Image compose(const Image& original, const BinaryMask& mask, const Image& generated);

// PNG (0 = hole, 255 = keep) with a sidecar JSON spec for reproducibility.
void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask load_mask_png(const std::filesystem::path& path);
void save_mask_spec(const std::filesystem::path& path, const MaskSpec& spec);
MaskSpec load_mask_spec(const std::filesystem::path& path);

}  // namespace priorpaint
