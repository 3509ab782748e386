#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "priorpaint/image.hpp"
#include "priorpaint/mask.hpp"
#include "priorpaint/rng.hpp"

// Parametric "blob face" renderer: ellipse head, two eyes, a mouth arc, with
// analytic keypoints. Stands in for face datasets at desk scale.

namespace priorpaint::synth {

struct ShapeParams {
    double cx = 16.0, cy = 16.0;      // centre, px (x = column, y = row)
    double scale = 0.7;               // head radius as a fraction of min(h,w)/2
    double head_aspect = 1.0;         // ellipse width/height ratio
    double eye_spacing = 0.45;        // eye offset as a fraction of head half-width
    double mouth_curvature = 0.0;     // -1 frown ... +1 smile
    double rotation = 0.0;            // radians about the centre
};

/// 5 keypoints in (x, y) px order: left eye, right eye, left mouth corner,
/// right mouth corner, mouth centre.
struct Keypoints {
    std::vector<std::array<double, 2>> points;
};

struct SequenceSample {
    std::vector<Image> frames;
    std::vector<Keypoints> keypoints;
    std::vector<ShapeParams> params;
};

/// One source image masked T ways; an ideal inpainter reconstructs every
/// frame identically.
struct SyntheticSequence {
    Image source;
    std::vector<BinaryMask> masks;
    std::vector<Image> masked_frames;
};

struct ParamBounds {
    double scale_lo, scale_hi;
    double aspect_lo, aspect_hi;
    double eye_lo, eye_hi;
    double curv_lo, curv_hi;
    double rot_lo, rot_hi;
    double center_margin;  // fixed margin so the centre box is scale-independent
};

ParamBounds default_bounds(int h, int w);

bool params_fit_canvas(const ShapeParams& p, int h, int w);

std::pair<Image, Keypoints> render_face(const ShapeParams& p, int h, int w);

/// Analytic keypoint positions only (no raster).
Keypoints face_keypoints(const ShapeParams& p, int h, int w);

ShapeParams sample_params(int h, int w, Rng& rng);

/// Bounded per-parameter random walk; |step| on mouth_curvature is at most
/// `smoothness`, other parameters scale by their range width.
std::vector<ShapeParams> gen_trajectory(int t_frames, double smoothness, int h, int w, std::uint64_t seed);

/// Max of isotropic Gaussians at the keypoints, truncated at 3 sigma and
/// peak-normalised. Empty keypoint list yields an all-zero map.
PriorMap render_prior_map(const Keypoints& kps, double sigma, int h, int w);

SequenceSample make_sequence_sample(int t_frames, double smoothness, int h, int w, std::uint64_t seed);

SyntheticSequence make_synthetic_sequence(const Image& source, const std::vector<MaskSpec>& mask_specs);

}  // namespace priorpaint::synth
