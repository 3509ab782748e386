#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "priorpaint/dataset.hpp"
#include "priorpaint/gan.hpp"
#include "priorpaint/harness.hpp"
#include "priorpaint/predictor.hpp"
#include "priorpaint/sequence.hpp"

// Run configuration: a JSON file deep-merged over built-in defaults. Unknown
// keys are rejected; dotted-path flag overrides win over the file. The fully
// resolved JSON is written next to every run's outputs and hashed into
// checkpoint manifests.

namespace priorpaint::cfg {

class RunConfig {
public:
    static RunConfig defaults();
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_json(const nlohmann::json& overlay);

    /// "section.key=value"; the key must already exist in the schema.
    void apply_override(const std::string& assignment);

    const nlohmann::json& resolved() const { return j_; }
    std::string hash() const;
    void write(const std::filesystem::path& path) const;

    std::uint64_t seed() const;
    std::string out_root() const;  // PRIORPAINT_OUT_ROOT env var wins

    data::DatasetSpec train_data_spec() const;
    data::DatasetSpec heldout_data_spec() const;

    gan::GanConfig gan_config(bool conditional) const;
    predictor::PredictorTrainConfig predictor_config() const;
    sequence::SeqTrainConfig sequence_config() const;
    harness::AblationConfig ablation_config() const;

    struct BenchSettings {
        int images = 4;
        int iters = 1500;
        int repeats = 3;
    };
    BenchSettings bench_settings() const;
    LossWeights loss_weights(const nlohmann::json& section) const;

private:
    nlohmann::json j_;
};

}  // namespace priorpaint::cfg
