#include "priorpaint/synth.hpp"

#include <algorithm>
#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::synth {

namespace {

constexpr double kBackground = 0.05;
constexpr double kHeadFill = 0.75;
constexpr double kFeature = 0.18;

struct FaceGeom {
    double a, b;          // head semi-axes (x, y) in px
    double eye_x, eye_y;  // right eye at (+eye_x, eye_y), left mirrored
    double eye_r;
    double mouth_half;    // corner x offset
    double mouth_y;       // corner/base y
    double mouth_lift;    // control-point offset = curvature * mouth_lift
    double stroke;        // mouth stroke half-width
};

FaceGeom geometry(const ShapeParams& p, int h, int w) {
    FaceGeom g;
    const double radius = p.scale * 0.5 * std::min(h, w);
    const double s = std::sqrt(p.head_aspect);
    g.a = radius * s;
    g.b = radius / s;
    g.eye_x = p.eye_spacing * g.a;
    g.eye_y = -0.32 * g.b;
    g.eye_r = std::max(0.8, 0.16 * radius);
    g.mouth_half = 0.45 * g.a;
    g.mouth_y = 0.42 * g.b;
    g.mouth_lift = 0.38 * g.b;
    g.stroke = std::max(0.7, 0.10 * radius);
    return g;
}

// Local face frame -> image frame.
inline std::array<double, 2> to_image(const ShapeParams& p, double x, double y) {
    const double c = std::cos(p.rotation), s = std::sin(p.rotation);
    return {p.cx + c * x - s * y, p.cy + s * x + c * y};
}

// Image frame -> local face frame.
inline std::array<double, 2> to_local(const ShapeParams& p, double ix, double iy) {
    const double c = std::cos(p.rotation), s = std::sin(p.rotation);
    const double dx = ix - p.cx, dy = iy - p.cy;
    return {c * dx + s * dy, -s * dx + c * dy};
}

inline double soft_disk(double dist, double radius) {
    return std::clamp(radius - dist + 0.5, 0.0, 1.0);  // ~1 px soft edge
}

inline double mix(double base, double top, double alpha) { return base + (top - base) * alpha; }

}  // namespace

ParamBounds default_bounds(int h, int w) {
    ParamBounds b;
    b.scale_lo = 0.42;
    b.scale_hi = 0.60;
    b.aspect_lo = 0.80;
    b.aspect_hi = 1.25;
    b.eye_lo = 0.32;
    b.eye_hi = 0.55;
    b.curv_lo = -1.0;
    b.curv_hi = 1.0;
    b.rot_lo = -0.35;
    b.rot_hi = 0.35;
    // Worst-case head extent over the scale/aspect ranges plus soft edge.
    const double r_max = b.scale_hi * 0.5 * std::min(h, w) * std::sqrt(b.aspect_hi);
    b.center_margin = r_max + 2.0;
    return b;
}

bool params_fit_canvas(const ShapeParams& p, int h, int w) {
    const double radius = p.scale * 0.5 * std::min(h, w);
    const double extent = radius * std::max(std::sqrt(p.head_aspect), 1.0 / std::sqrt(p.head_aspect)) + 1.5;
    return p.cx - extent >= 0.0 && p.cx + extent <= w - 1.0 && p.cy - extent >= 0.0 &&
           p.cy + extent <= h - 1.0 && std::fabs(p.mouth_curvature) <= 1.0 && p.scale > 0.0;
}

Keypoints face_keypoints(const ShapeParams& p, int h, int w) {
    const FaceGeom g = geometry(p, h, w);
    Keypoints k;
    k.points.push_back(to_image(p, -g.eye_x, g.eye_y));
    k.points.push_back(to_image(p, g.eye_x, g.eye_y));
    k.points.push_back(to_image(p, -g.mouth_half, g.mouth_y));
    k.points.push_back(to_image(p, g.mouth_half, g.mouth_y));
    // Quadratic Bezier midpoint: (P0 + 2C + P2)/4 with C lifted by curvature.
    k.points.push_back(to_image(p, 0.0, g.mouth_y + 0.5 * p.mouth_curvature * g.mouth_lift));
    return k;
}

std::pair<Image, Keypoints> render_face(const ShapeParams& p, int h, int w) {
    if (!params_fit_canvas(p, h, w)) throw ArgumentError("render_face: shape does not fit the canvas");
    const FaceGeom g = geometry(p, h, w);

    // Polyline approximation of the mouth curve, in local coordinates.
    constexpr int kMouthSegments = 24;
    std::array<std::array<double, 2>, kMouthSegments + 1> mouth;
    const double ctrl_y = g.mouth_y + p.mouth_curvature * g.mouth_lift;
    for (int i = 0; i <= kMouthSegments; ++i) {
        const double t = static_cast<double>(i) / kMouthSegments;
        const double omt = 1.0 - t;
        mouth[i][0] = omt * omt * (-g.mouth_half) + t * t * g.mouth_half;  // 2*t*(1-t)*0 for x
        mouth[i][1] = omt * omt * g.mouth_y + 2.0 * omt * t * ctrl_y + t * t * g.mouth_y;
    }

    Image im(h, w, kBackground);
    const double edge = std::min(g.a, g.b);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const auto [lx, ly] = to_local(p, c, r);
            double v = kBackground;

            // Head ellipse with ~1 px soft edge.
            const double e = std::sqrt((lx / g.a) * (lx / g.a) + (ly / g.b) * (ly / g.b));
            const double head_alpha = std::clamp((1.0 - e) * edge + 0.5, 0.0, 1.0);
            v = mix(v, kHeadFill, head_alpha);

            // Eyes.
            const double dl = std::hypot(lx + g.eye_x, ly - g.eye_y);
            const double dr = std::hypot(lx - g.eye_x, ly - g.eye_y);
            const double eye_alpha = std::clamp(soft_disk(dl, g.eye_r) + soft_disk(dr, g.eye_r), 0.0, 1.0);
            v = mix(v, kFeature, eye_alpha);

            // Mouth stroke: distance to the polyline.
            double md = 1e30;
            for (int i = 0; i < kMouthSegments; ++i) {
                const double ax = mouth[i][0], ay = mouth[i][1];
                const double bx = mouth[i + 1][0], by = mouth[i + 1][1];
                const double vx = bx - ax, vy = by - ay;
                const double len2 = vx * vx + vy * vy;
                double t = len2 > 0.0 ? ((lx - ax) * vx + (ly - ay) * vy) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                md = std::min(md, std::hypot(lx - (ax + t * vx), ly - (ay + t * vy)));
            }
            v = mix(v, kFeature, soft_disk(md, g.stroke));

            im.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return {im, face_keypoints(p, h, w)};
}

ShapeParams sample_params(int h, int w, Rng& rng) {
    const ParamBounds b = default_bounds(h, w);
    ShapeParams p;
    p.scale = rng.uniform(b.scale_lo, b.scale_hi);
    p.head_aspect = rng.uniform(b.aspect_lo, b.aspect_hi);
    p.eye_spacing = rng.uniform(b.eye_lo, b.eye_hi);
    p.mouth_curvature = rng.uniform(b.curv_lo, b.curv_hi);
    p.rotation = rng.uniform(b.rot_lo, b.rot_hi);
    p.cx = rng.uniform(b.center_margin, w - 1.0 - b.center_margin);
    p.cy = rng.uniform(b.center_margin, h - 1.0 - b.center_margin);
    return p;
}

namespace {

// Reflecting, step-bounded walk on one parameter.
double walk_step(double value, double lo, double hi, double bound, Rng& rng) {
    double next = value + rng.uniform(-bound, bound);
    if (next < lo) next = std::min(hi, 2.0 * lo - next);
    if (next > hi) next = std::max(lo, 2.0 * hi - next);
    // Reflection keeps |step| <= bound only if the overshoot was inside the
    // range; clamp as the final guard.
    next = std::clamp(next, std::max(lo, value - bound), std::min(hi, value + bound));
    return next;
}

}  // namespace

std::vector<ShapeParams> gen_trajectory(int t_frames, double smoothness, int h, int w, std::uint64_t seed) {
    if (t_frames < 1) throw ArgumentError("gen_trajectory: need T >= 1");
    if (smoothness < 0.0) throw ArgumentError("gen_trajectory: smoothness must be >= 0");
    const ParamBounds b = default_bounds(h, w);
    Rng rng(derive_seed(seed, "synth.traj"));
    std::vector<ShapeParams> out;
    out.reserve(static_cast<size_t>(t_frames));
    out.push_back(sample_params(h, w, rng));
    // Per-parameter step bound: smoothness is in mouth-curvature units
    // (range width 2); other parameters scale by their own width.
    const double k = smoothness / 2.0;
    for (int t = 1; t < t_frames; ++t) {
        ShapeParams p = out.back();
        p.scale = walk_step(p.scale, b.scale_lo, b.scale_hi, k * (b.scale_hi - b.scale_lo), rng);
        p.head_aspect = walk_step(p.head_aspect, b.aspect_lo, b.aspect_hi, k * (b.aspect_hi - b.aspect_lo), rng);
        p.eye_spacing = walk_step(p.eye_spacing, b.eye_lo, b.eye_hi, k * (b.eye_hi - b.eye_lo), rng);
        p.mouth_curvature = walk_step(p.mouth_curvature, b.curv_lo, b.curv_hi, smoothness, rng);
        p.rotation = walk_step(p.rotation, b.rot_lo, b.rot_hi, k * (b.rot_hi - b.rot_lo), rng);
        const double cx_lo = b.center_margin, cx_hi = w - 1.0 - b.center_margin;
        const double cy_lo = b.center_margin, cy_hi = h - 1.0 - b.center_margin;
        p.cx = walk_step(p.cx, cx_lo, cx_hi, k * (cx_hi - cx_lo), rng);
        p.cy = walk_step(p.cy, cy_lo, cy_hi, k * (cy_hi - cy_lo), rng);
        out.push_back(p);
    }
    return out;
}

PriorMap render_prior_map(const Keypoints& kps, double sigma, int h, int w) {
    if (sigma <= 0.0) throw ArgumentError("render_prior_map: sigma must be positive");
    PriorMap map(h, w, 0.0);
    if (kps.points.empty()) return map;  // signalled by the all-zero grid
    const double cut2 = 9.0 * sigma * sigma;
    double peak = 0.0;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            double best = 0.0;
            for (const auto& kp : kps.points) {
                const double dx = c - kp[0], dy = r - kp[1];
                const double d2 = dx * dx + dy * dy;
                if (d2 > cut2) continue;
                best = std::max(best, std::exp(-d2 / (2.0 * sigma * sigma)));
            }
            map.at(r, c) = best;
            peak = std::max(peak, best);
        }
    if (peak > 0.0)
        for (double& v : map.pix) v /= peak;
    return map;
}

SequenceSample make_sequence_sample(int t_frames, double smoothness, int h, int w, std::uint64_t seed) {
    SequenceSample s;
    s.params = gen_trajectory(t_frames, smoothness, h, w, seed);
    s.frames.reserve(s.params.size());
    s.keypoints.reserve(s.params.size());
    for (const ShapeParams& p : s.params) {
        auto [im, kp] = render_face(p, h, w);
        s.frames.push_back(std::move(im));
        s.keypoints.push_back(std::move(kp));
    }
    return s;
}

SyntheticSequence make_synthetic_sequence(const Image& source, const std::vector<MaskSpec>& mask_specs) {
    SyntheticSequence seq;
    seq.source = source;
    seq.masks.reserve(mask_specs.size());
    seq.masked_frames.reserve(mask_specs.size());
    for (const MaskSpec& spec : mask_specs) {
        BinaryMask m = generate_mask(spec, source.h, source.w);
        seq.masked_frames.push_back(apply_mask(source, m));
        seq.masks.push_back(std::move(m));
    }
    return seq;
}

}  // namespace priorpaint::synth
