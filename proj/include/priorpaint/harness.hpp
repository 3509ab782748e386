#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "priorpaint/baseline.hpp"
#include "priorpaint/dataset.hpp"
#include "priorpaint/metrics.hpp"
#include "priorpaint/predictor.hpp"
#include "priorpaint/sequence.hpp"

// Benchmarks and the M1-M5 ablation ladder: temporal consistency on
// synthetic sequences plus per-frame PSNR on single images, emitted as CSV,
// JSON and a bar-chart PNG.

namespace priorpaint::harness {

constexpr int kReportSchemaVersion = 1;

struct SpeedupReport {
    double mean_iterative_seconds = 0.0;
    double mean_feedforward_seconds = 0.0;
    double ratio = 0.0;
    std::string hardware_note;
    int iters = 0;
    int n_images = 0;
    int repeats = 0;
    // deterministic quality anchors (timings vary, these must not)
    std::vector<double> iterative_final_loss;
    std::vector<double> feedforward_loss;
};

SpeedupReport bench_speedup(const models::Predictor& p, const models::Generator& g,
                            const models::Discriminator& d, std::span<const Image> images, int iters,
                            int repeats, const LossWeights& w, std::uint64_t seed);

enum class Method { iterative, m1, m2, m3, m4, m5 };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Frozen models for the ablation; only the requested methods need entries.
struct MethodSet {
    const models::Generator* gan_g = nullptr;
    const models::Discriminator* gan_d = nullptr;
    const models::Generator* cgan_g = nullptr;
    const models::Discriminator* cgan_d = nullptr;
    const models::Predictor* m1 = nullptr;
    const models::SeqModel* m2 = nullptr;
    const models::Predictor* m3 = nullptr;
    const models::SeqModel* m4 = nullptr;
    const models::SeqModel* m5 = nullptr;
};

struct AblationConfig {
    std::vector<Method> methods{Method::iterative, Method::m1, Method::m2, Method::m3, Method::m4,
                                Method::m5};
    std::vector<MaskKind> mask_kinds{MaskKind::rc};
    int t_eval = 4;
    int n_sequences = 100;      // capped at the held-out sequence sources
    std::vector<std::uint64_t> seeds{11, 22, 33};
    int iterative_iters = 300;  // latent-search budget inside the consistency ladder
    int quality_iters = 1500;   // budget for the per-image PSNR column
    double iterative_step = 0.01;
    double iterative_momentum = 0.9;
    LossWeights weights;
    bool hole_only = false;  // consistency on hole pixels only
    int n_quality_images = 0;  // 0 = every held-out image
};

struct AblationRow {
    std::string method;
    std::string mask_kind;
    std::uint64_t seed = 0;
    int n_sequences = 0;
    double eta_mean = 0.0;
    double eta_std = 0.0;
    // per-image PSNR (iterative/m1/m3 only; NaN otherwise, like the blank
    // table cells in sequence-model rows)
    double psnr_mean = 0.0;
    double psnr_std = 0.0;
    bool has_psnr = false;
};

struct AblationReport {
    int schema_version = kReportSchemaVersion;
    std::vector<AblationRow> rows;

    /// Mean eta over seeds for one method x mask kind; throws if absent.
    double eta_seed_mean(Method m, MaskKind kind) const;
    double psnr_seed_mean(Method m, MaskKind kind) const;
};

/// Runs every requested method over synthetic sequences built from held-out
/// images (eta_temp) and over masked held-out single images (PSNR). Missing
/// model entries for a requested method raise ConfigError naming it.
AblationReport ablation_report(const MethodSet& models, const data::Dataset& heldout,
                               const AblationConfig& cfg);

void write_report_csv(const std::filesystem::path& path, const AblationReport& report);
void write_report_json(const std::filesystem::path& path, const AblationReport& report);
void write_report_plot(const std::filesystem::path& path, const AblationReport& report, MaskKind kind);
void write_speedup_json(const std::filesystem::path& path, const SpeedupReport& report);

}  // namespace priorpaint::harness
