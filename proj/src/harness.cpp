#include "priorpaint/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "priorpaint/kernels.hpp"
#include "priorpaint/plot.hpp"
#include "priorpaint/rng.hpp"

namespace priorpaint::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Stats {
    double mean = 0.0, stddev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size()));
    return s;
}

}  // namespace

SpeedupReport bench_speedup(const models::Predictor& p, const models::Generator& g,
                            const models::Discriminator& d, std::span<const Image> images, int iters,
                            int repeats, const LossWeights& w, std::uint64_t seed) {
    if (images.empty()) throw ArgumentError("bench_speedup: no images");
    if (iters < 1 || repeats < 1) throw ArgumentError("bench_speedup: iters and repeats must be >= 1");

    SpeedupReport report;
    report.iters = iters;
    report.n_images = static_cast<int>(images.size());
    report.repeats = repeats;
    report.hardware_note = "cpu, " + std::to_string(kernels::max_threads()) + " threads, " +
                           (kernels::backend() == kernels::Backend::openmp ? "openmp" : "serial") +
                           " kernels";

    baseline::OptimOptions opt;
    opt.iters = iters;
    opt.weights = w;

    const int img = g.cfg.img;

    // Warmup, excluded from timing.
    {
        const BinaryMask m = generate_mask(MaskSpec::center(0.5, 0.7, derive_seed(seed, "bench.warm")), img, img);
        predictor::inpaint(p, g, images[0], m, nullptr);
        baseline::OptimOptions wopt = opt;
        wopt.iters = std::min(iters, 5);
        baseline::inpaint_iterative(g, d, images[0], m, nullptr, wopt, seed);
    }

    double iter_total = 0.0, ff_total = 0.0;
    for (size_t i = 0; i < images.size(); ++i) {
        const BinaryMask m =
            generate_mask(MaskSpec::center(0.5, 0.7, derive_seed(seed, "bench.mask", i)), img, img);

        std::vector<double> ff_times, it_times;
        double ff_loss = 0.0, it_loss = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = Clock::now();
            auto [out, z] = predictor::inpaint(p, g, images[i], m, nullptr);
            ff_times.push_back(seconds_since(t0));
            if (r == 0) {
                const Image raw = gan::generate(g, z);
                ff_loss = combined_loss(images[i], raw, m, gan::discriminate(d, raw), w);
            }
        }
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = Clock::now();
            auto [out, trace] =
                baseline::inpaint_iterative(g, d, images[i], m, nullptr, opt, derive_seed(seed, "bench.z", i));
            it_times.push_back(seconds_since(t0));
            if (r == 0) it_loss = trace.best_loss.back();
        }
        ff_total += median(ff_times);
        iter_total += median(it_times);
        report.feedforward_loss.push_back(ff_loss);
        report.iterative_final_loss.push_back(it_loss);
    }

    report.mean_feedforward_seconds = ff_total / static_cast<double>(images.size());
    report.mean_iterative_seconds = iter_total / static_cast<double>(images.size());
    report.ratio = report.mean_iterative_seconds / report.mean_feedforward_seconds;
    return report;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::iterative: return "iterative";
        case Method::m1: return "m1";
        case Method::m2: return "m2";
        case Method::m3: return "m3";
        case Method::m4: return "m4";
        case Method::m5: return "m5";
    }
    throw ArgumentError("method_name: bad value");
}

Method method_from_name(const std::string& name) {
    if (name == "iterative") return Method::iterative;
    if (name == "m1") return Method::m1;
    if (name == "m2") return Method::m2;
    if (name == "m3") return Method::m3;
    if (name == "m4") return Method::m4;
    if (name == "m5") return Method::m5;
    throw ArgumentError("unknown method: " + name);
}

namespace {

struct MethodModels {
    const models::Generator* gen = nullptr;
    const models::Discriminator* disc = nullptr;
    const models::Predictor* pred = nullptr;
    const models::SeqModel* seq = nullptr;
    bool conditional = false;
};

MethodModels resolve(const MethodSet& set, Method m) {
    MethodModels r;
    switch (m) {
        case Method::iterative:
            r.gen = set.gan_g;
            r.disc = set.gan_d;
            break;
        case Method::m1:
            r.gen = set.gan_g;
            r.pred = set.m1;
            break;
        case Method::m2:
            r.gen = set.gan_g;
            r.seq = set.m2;
            break;
        case Method::m3:
            r.gen = set.cgan_g;
            r.pred = set.m3;
            r.conditional = true;
            break;
        case Method::m4:
            r.gen = set.cgan_g;
            r.seq = set.m4;
            r.conditional = true;
            break;
        case Method::m5:
            r.gen = set.cgan_g;
            r.seq = set.m5;
            r.conditional = true;
            break;
    }
    const bool complete = r.gen != nullptr &&
                          (m == Method::iterative ? r.disc != nullptr
                                                  : (r.pred != nullptr || r.seq != nullptr));
    if (!complete) throw ConfigError("ablation: missing model variant for method " + method_name(m));
    return r;
}

}  // namespace

double AblationReport::eta_seed_mean(Method m, MaskKind kind) const {
    double acc = 0.0;
    int n = 0;
    for (const auto& row : rows)
        if (row.method == method_name(m) && row.mask_kind == mask_kind_name(kind)) {
            acc += row.eta_mean;
            ++n;
        }
    if (n == 0) throw ArgumentError("eta_seed_mean: no rows for " + method_name(m));
    return acc / n;
}

double AblationReport::psnr_seed_mean(Method m, MaskKind kind) const {
    double acc = 0.0;
    int n = 0;
    for (const auto& row : rows)
        if (row.method == method_name(m) && row.mask_kind == mask_kind_name(kind) && row.has_psnr) {
            acc += row.psnr_mean;
            ++n;
        }
    if (n == 0) throw ArgumentError("psnr_seed_mean: no rows for " + method_name(m));
    return acc / n;
}

AblationReport ablation_report(const MethodSet& set, const data::Dataset& heldout,
                               const AblationConfig& cfg) {
    if (heldout.images.empty()) throw ArgumentError("ablation: held-out dataset has no images");
    if (cfg.t_eval < 2) throw ArgumentError("ablation: t_eval must be >= 2 for eta_temp");
    cfg.weights.validate();
    for (Method m : cfg.methods) resolve(set, m);  // fail fast on missing variants

    const int img = heldout.spec.h;
    const int n_seq = std::min<int>(cfg.n_sequences, static_cast<int>(heldout.images.size()));
    const int n_quality = cfg.n_quality_images > 0
                              ? std::min<int>(cfg.n_quality_images, static_cast<int>(heldout.images.size()))
                              : static_cast<int>(heldout.images.size());

    const std::vector<PriorMap> priors = heldout.image_priors();

    AblationReport report;
    for (Method method : cfg.methods) {
        const MethodModels mm = resolve(set, method);
        for (MaskKind kind : cfg.mask_kinds) {
            for (std::uint64_t seed : cfg.seeds) {
                // --- temporal consistency over synthetic sequences ---
                std::vector<double> etas(static_cast<size_t>(n_seq));
#pragma omp parallel for schedule(dynamic)
                for (int i = 0; i < n_seq; ++i) {
                    kernels::BackendGuard guard(kernels::Backend::serial);
                    const Image& source = heldout.images[static_cast<size_t>(i)];
                    std::vector<BinaryMask> masks;
                    std::vector<Image> frames(static_cast<size_t>(cfg.t_eval), source);
                    masks.reserve(static_cast<size_t>(cfg.t_eval));
                    for (int t = 0; t < cfg.t_eval; ++t) {
                        MaskSpec spec;
                        Rng r(derive_seed(seed, "eval.mask", static_cast<std::uint64_t>(i) * 1000 + t));
                        std::array<MaskKind, 1> one{kind};
                        spec = random_mask_spec(one, img, r);
                        masks.push_back(generate_mask(spec, img, img));
                    }
                    std::vector<Image> composed;
                    if (mm.seq != nullptr) {
                        std::vector<PriorMap> frame_priors;
                        if (mm.conditional)
                            frame_priors.assign(static_cast<size_t>(cfg.t_eval),
                                                priors[static_cast<size_t>(i)]);
                        composed = sequence::inpaint_sequence(*mm.seq, *mm.gen, frames, masks,
                                                              mm.conditional ? &frame_priors : nullptr);
                    } else if (mm.pred != nullptr) {
                        for (int t = 0; t < cfg.t_eval; ++t) {
                            const PriorMap* c = mm.conditional ? &priors[static_cast<size_t>(i)] : nullptr;
                            composed.push_back(
                                predictor::inpaint(*mm.pred, *mm.gen, source, masks[static_cast<size_t>(t)], c)
                                    .first);
                        }
                    } else {
                        baseline::OptimOptions opt;
                        opt.iters = cfg.iterative_iters;
                        opt.step = cfg.iterative_step;
                        opt.momentum = cfg.iterative_momentum;
                        opt.weights = cfg.weights;
                        for (int t = 0; t < cfg.t_eval; ++t) {
                            composed.push_back(
                                baseline::inpaint_iterative(
                                    *mm.gen, *mm.disc, source, masks[static_cast<size_t>(t)], nullptr, opt,
                                    derive_seed(seed, "eval.z", static_cast<std::uint64_t>(i) * 1000 + t))
                                    .first);
                        }
                    }
                    etas[static_cast<size_t>(i)] =
                        cfg.hole_only ? metrics::temporal_consistency_hole(composed, masks)
                                      : metrics::temporal_consistency(composed);
                }
                const Stats eta = stats_of(etas);

                AblationRow row;
                row.method = method_name(method);
                row.mask_kind = mask_kind_name(kind);
                row.seed = seed;
                row.n_sequences = n_seq;
                row.eta_mean = eta.mean;
                row.eta_std = eta.stddev;

                // --- per-image PSNR (independent single-image methods only) ---
                if (mm.seq == nullptr) {
                    std::vector<double> psnrs(static_cast<size_t>(n_quality));
#pragma omp parallel for schedule(dynamic)
                    for (int j = 0; j < n_quality; ++j) {
                        kernels::BackendGuard guard(kernels::Backend::serial);
                        const Image& source = heldout.images[static_cast<size_t>(j)];
                        Rng r(derive_seed(seed, "eval.qmask", static_cast<std::uint64_t>(j)));
                        std::array<MaskKind, 1> one{kind};
                        const BinaryMask mask = generate_mask(random_mask_spec(one, img, r), img, img);
                        Image out;
                        if (mm.pred != nullptr) {
                            const PriorMap* c = mm.conditional ? &priors[static_cast<size_t>(j)] : nullptr;
                            out = predictor::inpaint(*mm.pred, *mm.gen, source, mask, c).first;
                        } else {
                            baseline::OptimOptions opt;
                            opt.iters = cfg.quality_iters;
                            opt.step = cfg.iterative_step;
                            opt.momentum = cfg.iterative_momentum;
                            opt.weights = cfg.weights;
                            out = baseline::inpaint_iterative(*mm.gen, *mm.disc, source, mask, nullptr, opt,
                                                              derive_seed(seed, "eval.qz",
                                                                          static_cast<std::uint64_t>(j)))
                                      .first;
                        }
                        psnrs[static_cast<size_t>(j)] = metrics::psnr(out, source);
                    }
                    const Stats q = stats_of(psnrs);
                    row.psnr_mean = q.mean;
                    row.psnr_std = q.stddev;
                    row.has_psnr = true;
                }
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

void write_report_csv(const fs::path& path, const AblationReport& report) {
    std::ofstream f(path);
    if (!f) throw IoError("write_report_csv: cannot open " + path.string());
    f << "schema_version,method,mask_kind,seed,n_sequences,eta_mean_db,eta_std_db,psnr_mean_db,psnr_std_db\n";
    for (const auto& r : report.rows) {
        f << report.schema_version << ',' << r.method << ',' << r.mask_kind << ',' << r.seed << ','
          << r.n_sequences << ',' << r.eta_mean << ',' << r.eta_std << ',';
        if (r.has_psnr)
            f << r.psnr_mean << ',' << r.psnr_std;
        else
            f << ',';
        f << '\n';
    }
}

void write_report_json(const fs::path& path, const AblationReport& report) {
    json j;
    j["schema_version"] = report.schema_version;
    j["rows"] = json::array();
    for (const auto& r : report.rows) {
        json row;
        row["method"] = r.method;
        row["mask_kind"] = r.mask_kind;
        row["seed"] = r.seed;
        row["n_sequences"] = r.n_sequences;
        row["eta_mean_db"] = r.eta_mean;
        row["eta_std_db"] = r.eta_std;
        if (r.has_psnr) {
            row["psnr_mean_db"] = r.psnr_mean;
            row["psnr_std_db"] = r.psnr_std;
        } else {
            row["psnr_mean_db"] = nullptr;
            row["psnr_std_db"] = nullptr;
        }
        j["rows"].push_back(std::move(row));
    }
    std::ofstream f(path);
    if (!f) throw IoError("write_report_json: cannot open " + path.string());
    f << j.dump(2) << "\n";
}

void write_report_plot(const fs::path& path, const AblationReport& report, MaskKind kind) {
    std::vector<std::pair<std::string, double>> bars;
    for (Method m : {Method::iterative, Method::m1, Method::m2, Method::m3, Method::m4, Method::m5}) {
        try {
            bars.emplace_back(method_name(m), report.eta_seed_mean(m, kind));
        } catch (const ArgumentError&) {
            // method not in this report
        }
    }
    plot::bar_chart(path, "temporal consistency (" + mask_kind_name(kind) + " masks)", bars, "db");
}

void write_speedup_json(const fs::path& path, const SpeedupReport& report) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["mean_iterative_seconds_per_image"] = report.mean_iterative_seconds;
    j["mean_feedforward_seconds_per_image"] = report.mean_feedforward_seconds;
    j["ratio"] = report.ratio;
    j["hardware_note"] = report.hardware_note;
    j["iters"] = report.iters;
    j["n_images"] = report.n_images;
    j["repeats"] = report.repeats;
    j["iterative_final_loss"] = report.iterative_final_loss;
    j["feedforward_loss"] = report.feedforward_loss;
    std::ofstream f(path);
    if (!f) throw IoError("write_speedup_json: cannot open " + path.string());
    f << j.dump(2) << "\n";
}

}  // namespace priorpaint::harness
