#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "priorpaint/models.hpp"

// Versioned checkpoint container: magic + JSON manifest + named parameter
// arrays as raw little-endian doubles, followed by a SHA-256 of the payload.
// Round-trips are bit-exact; loads verify the recorded digest.

namespace priorpaint::ckpt {

constexpr int kFormatVersion = 1;

enum class Kind { gan, cgan, predictor, sequence };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct CheckpointRef {
    std::filesystem::path path;
    std::string hash;  // hex SHA-256 of the payload
    Kind kind = Kind::gan;
};

/// SHA-256 over the named parameter arrays (names + raw bytes, in order).
std::string param_hash(std::span<const nn::ParamList* const> lists);
std::string sha256_hex(std::span<const unsigned char> bytes);

struct GanCheckpoint {
    models::Generator g;
    models::Discriminator d;
    nlohmann::json manifest;
};

struct PredictorCheckpoint {
    models::Predictor p;
    nlohmann::json manifest;
};

struct SeqCheckpoint {
    models::SeqModel m;
    nlohmann::json manifest;
};

CheckpointRef save_gan(const std::filesystem::path& path, const models::Generator& g,
                       const models::Discriminator& d, const std::string& config_hash);
GanCheckpoint load_gan(const std::filesystem::path& path);

CheckpointRef save_predictor(const std::filesystem::path& path, const models::Predictor& p,
                             const std::string& gan_hash, const std::string& config_hash);
PredictorCheckpoint load_predictor(const std::filesystem::path& path);

CheckpointRef save_sequence(const std::filesystem::path& path, const models::SeqModel& m, double lambda4,
                            const std::string& gan_hash, const std::string& config_hash);
SeqCheckpoint load_sequence(const std::filesystem::path& path);

/// Reads only the manifest + recomputes the payload hash (integrity check).
std::pair<nlohmann::json, std::string> inspect(const std::filesystem::path& path);

}  // namespace priorpaint::ckpt
