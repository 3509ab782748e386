#include "priorpaint/mask.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "priorpaint/png_io.hpp"
#include "priorpaint/rng.hpp"

namespace priorpaint {

using nlohmann::json;

long BinaryMask::zeros() const {
    long n = 0;
    for (std::uint8_t v : grid) n += v == 0;
    return n;
}

Tensor BinaryMask::to_tensor() const {
    Tensor t(Shape{1, 1, h, w});
    for (size_t i = 0; i < grid.size(); ++i) t[i] = grid[i] ? 1.0 : 0.0;
    return t;
}

std::string mask_kind_name(MaskKind k) {
    switch (k) {
        case MaskKind::rc: return "rc";
        case MaskKind::rf: return "rf";
        case MaskKind::rch: return "rch";
    }
    throw ArgumentError("mask_kind_name: bad kind");
}

MaskKind mask_kind_from_name(const std::string& name) {
    if (name == "rc") return MaskKind::rc;
    if (name == "rf") return MaskKind::rf;
    if (name == "rch") return MaskKind::rch;
    throw ArgumentError("unknown mask kind: " + name);
}

MaskSpec MaskSpec::center(double lo, double hi, std::uint64_t seed) {
    MaskSpec s;
    s.kind = MaskKind::rc;
    s.frac_lo = lo;
    s.frac_hi = hi;
    s.seed = seed;
    return s;
}

MaskSpec MaskSpec::freehand(double target, std::uint64_t seed) {
    MaskSpec s;
    s.kind = MaskKind::rf;
    s.target_frac = target;
    s.seed = seed;
    return s;
}

MaskSpec MaskSpec::checker(double target, std::vector<int> cells, std::uint64_t seed) {
    MaskSpec s;
    s.kind = MaskKind::rch;
    s.target_frac = target;
    s.cell_sizes = std::move(cells);
    s.seed = seed;
    return s;
}

BinaryMask gen_center_mask(int h, int w, double frac_lo, double frac_hi, std::uint64_t seed) {
    if (h < 2 || w < 2) throw ArgumentError("gen_center_mask: dimensions must be >= 2");
    if (!(0.0 <= frac_lo && frac_lo <= frac_hi && frac_hi <= 1.0))
        throw ArgumentError("gen_center_mask: need 0 <= frac_lo <= frac_hi <= 1");

    Rng rng(derive_seed(seed, "mask.rc"));
    const double frac = rng.uniform(frac_lo, frac_hi);
    const double aspect = rng.uniform(0.75, 1.33);  // w_m / h_m

    BinaryMask mask(h, w, 1);
    if (frac <= 0.0) return mask;

    const double area = frac * h * w;
    double fh = std::sqrt(area / aspect);
    double fw = aspect * fh;
    // Large fractions can push the drawn aspect outside the canvas; trade
    // aspect for area so the requested fraction stays achievable.
    if (fh > h) {
        fh = h;
        fw = std::min(static_cast<double>(w), area / fh);
    }
    if (fw > w) {
        fw = w;
        fh = std::min(static_cast<double>(h), area / fw);
    }
    // Try the four floor/ceil roundings and keep the achievable fraction
    // closest to the draw.
    int best_h = 0, best_w = 0;
    double best_err = 2.0;
    for (int dh = 0; dh <= 1; ++dh)
        for (int dw = 0; dw <= 1; ++dw) {
            const int mh = std::clamp(static_cast<int>(std::floor(fh)) + dh, 1, h);
            const int mw = std::clamp(static_cast<int>(std::floor(fw)) + dw, 1, w);
            const double err = std::fabs(static_cast<double>(mh) * mw / (static_cast<double>(h) * w) - frac);
            if (err < best_err) {
                best_err = err;
                best_h = mh;
                best_w = mw;
            }
        }
    const int r0 = (h - best_h) / 2;
    const int c0 = (w - best_w) / 2;
    for (int r = r0; r < r0 + best_h; ++r)
        for (int c = c0; c < c0 + best_w; ++c) mask.at(r, c) = 0;
    return mask;
}

namespace {

// Stamp a filled disk of zeros; returns number of newly zeroed pixels.
long stamp_disk(BinaryMask& mask, double cy, double cx, double radius) {
    long added = 0;
    const int r0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int r1 = std::min(mask.h - 1, static_cast<int>(std::ceil(cy + radius)));
    const int c0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int c1 = std::min(mask.w - 1, static_cast<int>(std::ceil(cx + radius)));
    const double rr = radius * radius;
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) {
            const double dy = r - cy, dx = c - cx;
            if (dy * dy + dx * dx > rr) continue;
            if (mask.at(r, c) != 0) {
                mask.at(r, c) = 0;
                ++added;
            }
        }
    return added;
}

}  // namespace

BinaryMask gen_freehand_mask(int h, int w, double target_frac, std::uint64_t seed) {
    if (h < 2 || w < 2) throw ArgumentError("gen_freehand_mask: dimensions must be >= 2");
    if (!(0.0 < target_frac && target_frac < 1.0))
        throw ArgumentError("gen_freehand_mask: target_frac must be in (0,1)");

    constexpr int kMaxStrokes = 8;
    Rng rng(derive_seed(seed, "mask.rf"));
    BinaryMask mask(h, w, 1);
    const long total = static_cast<long>(h) * w;
    const long target = static_cast<long>(std::ceil(target_frac * total));
    long holes = 0;

    for (int stroke = 0; stroke < kMaxStrokes && holes < target; ++stroke) {
        double cy = rng.uniform(0.0, h - 1.0);
        double cx = rng.uniform(0.0, w - 1.0);
        const double radius = rng.uniform(2.0, std::max(2.0, h / 8.0));
        double angle = rng.uniform(0.0, 2.0 * M_PI);
        // Stroke length ~ geometric with mean h/2 steps.
        const double p = 2.0 / h;
        int steps = 1;
        while (rng.uniform01() >= p && steps < 4 * h) ++steps;
        const double step_len = std::max(1.0, radius * 0.75);
        for (int s = 0; s < steps; ++s) {
            holes += stamp_disk(mask, cy, cx, radius);
            if (holes >= target) return mask;  // stop at first crossing
            angle += rng.uniform(-0.5, 0.5);
            cy += step_len * std::sin(angle);
            cx += step_len * std::cos(angle);
            // Reflect walks off the canvas back inside.
            if (cy < 0.0) { cy = -cy; angle = -angle; }
            if (cy > h - 1.0) { cy = 2.0 * (h - 1.0) - cy; angle = -angle; }
            if (cx < 0.0) { cx = -cx; angle = M_PI - angle; }
            if (cx > w - 1.0) { cx = 2.0 * (w - 1.0) - cx; angle = M_PI - angle; }
        }
    }

    // Forced fill: grow the existing hole set pixel by pixel (8-neighbour
    // dilation in scan order) until the target is crossed. Never starts a new
    // component.
    while (holes < target) {
        bool grew = false;
        for (int r = 0; r < h && holes < target; ++r)
            for (int c = 0; c < w && holes < target; ++c) {
                if (mask.at(r, c) == 0) continue;
                bool adjacent = false;
                for (int dr = -1; dr <= 1 && !adjacent; ++dr)
                    for (int dc = -1; dc <= 1 && !adjacent; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                        adjacent = mask.at(rr, cc) == 0;
                    }
                if (!adjacent) continue;
                mask.at(r, c) = 0;
                ++holes;
                grew = true;
            }
        if (!grew) {
            // No holes at all (cannot happen after >= 1 stroke) — seed one.
            mask.at(h / 2, w / 2) = 0;
            ++holes;
        }
    }
    return mask;
}

BinaryMask checker_grid(int h, int w, int cell, int phase_x, int phase_y, int parity) {
    if (cell <= 0) throw ArgumentError("checker_grid: cell must be positive");
    BinaryMask mask(h, w, 1);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const int cy = (r + phase_y) / cell;
            const int cx = (c + phase_x) / cell;
            if ((cy + cx) % 2 == parity) mask.at(r, c) = 0;
        }
    return mask;
}

BinaryMask gen_checker_mask(int h, int w, double target_frac, const std::vector<int>& cell_sizes,
                            std::uint64_t seed) {
    if (h < 2 || w < 2) throw ArgumentError("gen_checker_mask: dimensions must be >= 2");
    if (cell_sizes.empty()) throw ArgumentError("gen_checker_mask: cell_sizes must not be empty");
    (void)target_frac;  // the alternating grid yields ~target by construction

    std::vector<int> cells = cell_sizes;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (int c : cells)
        if (c <= 0) throw ArgumentError("gen_checker_mask: cell sizes must be positive");

    Rng rng(derive_seed(seed, "mask.rch"));
    const int cell = cells[rng.uniform_int(cells.size())];
    const int phase_x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cell)));
    const int phase_y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(cell)));
    const int parity = static_cast<int>(rng.uniform_int(2));
    return checker_grid(h, w, cell, phase_x, phase_y, parity);
}

BinaryMask generate_mask(const MaskSpec& spec, int h, int w) {
    switch (spec.kind) {
        case MaskKind::rc: return gen_center_mask(h, w, spec.frac_lo, spec.frac_hi, spec.seed);
        case MaskKind::rf: return gen_freehand_mask(h, w, spec.target_frac, spec.seed);
        case MaskKind::rch: return gen_checker_mask(h, w, spec.target_frac, spec.cell_sizes, spec.seed);
    }
    throw ArgumentError("generate_mask: bad kind");
}

MaskSpec random_mask_spec(std::span<const MaskKind> kinds, int img, Rng& rng) {
    if (kinds.empty()) throw ArgumentError("random_mask_spec: empty kind set");
    const MaskKind kind = kinds[rng.uniform_int(kinds.size())];
    const std::uint64_t seed = rng.next_u64();
    switch (kind) {
        case MaskKind::rc: return MaskSpec::center(0.5, 0.7, seed);
        case MaskKind::rf: return MaskSpec::freehand(0.5, seed);
        case MaskKind::rch: return MaskSpec::checker(0.5, {std::max(2, img / 8), std::max(2, img / 4)}, seed);
    }
    throw ArgumentError("random_mask_spec: bad kind");
}

Image apply_mask(const Image& image, const BinaryMask& mask) {
    if (image.h != mask.h || image.w != mask.w) throw ArgumentError("apply_mask: shape mismatch");
    Image out(image.h, image.w);
    for (size_t i = 0; i < out.pix.size(); ++i) out.pix[i] = mask.grid[i] ? image.pix[i] : 0.0;
    return out;
}

Image compose(const Image& original, const BinaryMask& mask, const Image& generated) {
    if (original.h != mask.h || original.w != mask.w || !original.same_shape(generated))
        throw ArgumentError("compose: shape mismatch");
    Image out(original.h, original.w);
    for (size_t i = 0; i < out.pix.size(); ++i)
        out.pix[i] = mask.grid[i] ? original.pix[i] : generated.pix[i];
    return out;
}

void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<unsigned char> px(mask.grid.size());
    for (size_t i = 0; i < px.size(); ++i) px[i] = mask.grid[i] ? 255 : 0;
    png::write_gray8(path, mask.h, mask.w, px);
}

BinaryMask load_mask_png(const std::filesystem::path& path) {
    png::Gray8 g = png::read_gray8(path);
    BinaryMask mask(g.h, g.w);
    for (size_t i = 0; i < g.pixels.size(); ++i) mask.grid[i] = g.pixels[i] >= 128 ? 1 : 0;
    return mask;
}

void save_mask_spec(const std::filesystem::path& path, const MaskSpec& spec) {
    json j;
    j["kind"] = mask_kind_name(spec.kind);
    j["seed"] = spec.seed;
    switch (spec.kind) {
        case MaskKind::rc:
            j["frac_lo"] = spec.frac_lo;
            j["frac_hi"] = spec.frac_hi;
            break;
        case MaskKind::rf: j["target_frac"] = spec.target_frac; break;
        case MaskKind::rch:
            j["target_frac"] = spec.target_frac;
            j["cell_sizes"] = spec.cell_sizes;
            break;
    }
    std::ofstream f(path);
    if (!f) throw IoError("save_mask_spec: cannot open " + path.string());
    f << j.dump(2) << "\n";
}

MaskSpec load_mask_spec(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("load_mask_spec: cannot open " + path.string());
    json j = json::parse(f);
    MaskSpec spec;
    spec.kind = mask_kind_from_name(j.at("kind").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    switch (spec.kind) {
        case MaskKind::rc:
            spec.frac_lo = j.at("frac_lo").get<double>();
            spec.frac_hi = j.at("frac_hi").get<double>();
            break;
        case MaskKind::rf: spec.target_frac = j.at("target_frac").get<double>(); break;
        case MaskKind::rch:
            spec.target_frac = j.at("target_frac").get<double>();
            spec.cell_sizes = j.at("cell_sizes").get<std::vector<int>>();
            break;
    }
    return spec;
}

}  // namespace priorpaint
