#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "priorpaint/synth.hpp"

// On-disk dataset layout:
//   images/{id}.png        single frames
//   sequences/{id}/{t}.png sequence frames
//   keypoints/{id}.json    [x,y] pairs (image) or per-frame list (sequence)
//   manifest.json          counts, shapes, seed, format version

namespace priorpaint::data {

constexpr int kDatasetFormatVersion = 1;

struct DatasetSpec {
    int n_images = 0;
    int n_sequences = 0;
    int t_frames = 1;
    int h = 32, w = 32;
    double keypoint_sigma = 2.0;
    double smoothness = 0.15;
    std::uint64_t seed = 0;
};

struct Dataset {
    DatasetSpec spec;
    std::vector<Image> images;
    std::vector<synth::Keypoints> image_keypoints;
    std::vector<synth::SequenceSample> sequences;  // params are not persisted

    /// Prior maps for the single images, rendered at the manifest sigma.
    std::vector<PriorMap> image_priors() const;
    std::vector<std::vector<PriorMap>> sequence_priors() const;
};

/// Generates and persists a dataset. Writes into a temporary sibling and
/// renames, so a failed run leaves nothing behind. Refuses an existing root.
void make_dataset(const std::filesystem::path& root, const DatasetSpec& spec);

Dataset load_dataset(const std::filesystem::path& root);

/// In-memory generation with the same per-sample seeding as make_dataset but
/// without the PNG quantisation round-trip.
Dataset generate_dataset(const DatasetSpec& spec);

}  // namespace priorpaint::data
