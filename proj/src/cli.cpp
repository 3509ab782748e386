#include "priorpaint/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "priorpaint/checkpoint.hpp"
#include "priorpaint/config.hpp"
#include "priorpaint/png_io.hpp"

namespace priorpaint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDependency = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
};

cfg::RunConfig load_config(const CommonArgs& args) {
    cfg::RunConfig c =
        args.config_path.empty() ? cfg::RunConfig::defaults() : cfg::RunConfig::from_file(args.config_path);
    for (const std::string& o : args.overrides) c.apply_override(o);
    return c;
}

fs::path resolve_out(const cfg::RunConfig& c, const std::string& out, const std::string& fallback) {
    fs::path dir = out.empty() ? fs::path(c.out_root()) / fallback : fs::path(out);
    fs::create_directories(dir);
    return dir;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    f << j.dump(2) << "\n";
}

json read_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    return json::parse(f);
}

data::Dataset load_split(const fs::path& data_root, const std::string& split) {
    const fs::path dir = data_root / split;
    if (!fs::exists(dir / "manifest.json"))
        throw DependencyError("dataset split not found: " + dir.string() + " (run gen-data first)");
    return data::load_dataset(dir);
}

struct LoadedGan {
    ckpt::GanCheckpoint ck;
    std::string hash;  // parameter hash pinned by dependents
};

LoadedGan load_gan_checkpoint(const std::string& path, const char* who) {
    if (path.empty()) throw DependencyError(std::string(who) + ": missing gan checkpoint (--gan)");
    if (!fs::exists(path)) throw DependencyError(std::string(who) + ": gan checkpoint not found: " + path);
    LoadedGan g{ckpt::load_gan(path), ""};
    g.hash = g.ck.manifest.at("param_hash").get<std::string>();
    return g;
}

void verify_pinned_gan(const json& manifest, const std::string& gan_hash, const std::string& what) {
    const std::string pinned = manifest.at("gan_hash").get<std::string>();
    if (pinned != gan_hash)
        throw DependencyError(what + " was trained against a different GAN checkpoint (hash " + pinned +
                              " vs " + gan_hash + ")");
}

void write_loss_history_csv(const fs::path& path, const std::vector<double>& losses) {
    std::ofstream f(path);
    f << "step,loss\n";
    for (size_t i = 0; i < losses.size(); ++i) f << i << ',' << losses[i] << '\n';
}

PriorMap prior_from_keypoints_file(const fs::path& path, double sigma, int h, int w) {
    const json arr = read_json_file(path);
    synth::Keypoints kps;
    for (const auto& p : arr) kps.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return synth::render_prior_map(kps, sigma, h, w);
}

// ---- gen-data -------------------------------------------------------------

int cmd_gen_data(const CommonArgs& args) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "dataset");
    data::make_dataset(out / "train", c.train_data_spec());
    data::make_dataset(out / "heldout", c.heldout_data_spec());
    c.write(out / "config.resolved.json");
    std::cout << "dataset written to " << out << "\n";
    return kExitOk;
}

// ---- train ----------------------------------------------------------------

int cmd_train(const std::string& stage, const CommonArgs& args, const std::string& data_root,
              const std::string& gan_path) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "train-" + stage);
    const data::Dataset train = load_split(data_root, "train");

    json run_info;
    run_info["stage"] = stage;
    run_info["config_hash"] = c.hash();

    ckpt::CheckpointRef ref;
    if (stage == "gan" || stage == "cgan") {
        const bool conditional = stage == "cgan";
        gan::GanConfig gc = c.gan_config(conditional);
        gan::TrainedGan trained = conditional ? gan::train_cgan(train.images, train.image_priors(), gc)
                                              : gan::train_gan(train.images, gc);
        ref = ckpt::save_gan(out / (stage + ".ckpt"), trained.g, trained.d, c.hash());
        std::ofstream f(out / "losses.csv");
        f << "step,d_loss,g_loss\n";
        for (size_t i = 0; i < trained.history.d_loss.size(); ++i)
            f << i << ',' << trained.history.d_loss[i] << ',' << trained.history.g_loss[i] << '\n';
    } else if (stage == "predictor") {
        const LoadedGan g = load_gan_checkpoint(gan_path, "train predictor");
        run_info["gan_hash"] = g.hash;
        std::vector<double> losses;
        predictor::PredictorTrainConfig pc = c.predictor_config();
        const bool conditional = g.ck.g.cfg.conditional;
        std::vector<PriorMap> priors;
        if (conditional) priors = train.image_priors();
        models::Predictor p = predictor::train_predictor(g.ck.g, g.ck.d, train.images,
                                                         conditional ? &priors : nullptr, pc, &losses);
        ref = ckpt::save_predictor(out / "predictor.ckpt", p, g.hash, c.hash());
        write_loss_history_csv(out / "losses.csv", losses);
    } else if (stage == "sequence") {
        const LoadedGan g = load_gan_checkpoint(gan_path, "train sequence");
        run_info["gan_hash"] = g.hash;
        std::vector<double> losses;
        sequence::SeqTrainConfig sc = c.sequence_config();
        const bool conditional = g.ck.g.cfg.conditional;
        std::vector<std::vector<PriorMap>> priors;
        if (conditional) priors = train.sequence_priors();
        models::SeqModel m = sequence::train_sequence(g.ck.g, g.ck.d, train.sequences,
                                                      conditional ? &priors : nullptr, sc, &losses);
        ref = ckpt::save_sequence(out / "sequence.ckpt", m, sc.lambda4, g.hash, c.hash());
        write_loss_history_csv(out / "losses.csv", losses);
    } else {
        throw ConfigError("unknown training stage: " + stage);
    }

    run_info["checkpoint"] = ref.path.string();
    run_info["checkpoint_hash"] = ref.hash;
    run_info["kind"] = ckpt::kind_name(ref.kind);
    write_json_file(out / "run_info.json", run_info);
    c.write(out / "config.resolved.json");
    std::cout << "checkpoint written to " << ref.path << "\n";
    return kExitOk;
}

// ---- inpaint ----------------------------------------------------------------

struct InpaintArgs {
    std::string mode;
    std::string gan_path;
    std::string predictor_path;
    std::string sequence_path;
    std::string image_path;
    std::string frames_dir;
    std::string mask_path;
    std::string masks_dir;
    std::string mask_spec_path;
    std::string keypoints_path;
    int iters = 1500;
};

BinaryMask mask_for(const InpaintArgs& in, int h, int w, int frame_index) {
    if (!in.mask_path.empty()) return load_mask_png(in.mask_path);
    if (!in.masks_dir.empty())
        return load_mask_png(fs::path(in.masks_dir) / (std::to_string(frame_index) + ".png"));
    if (!in.mask_spec_path.empty()) {
        MaskSpec spec = load_mask_spec(in.mask_spec_path);
        spec.seed = derive_seed(spec.seed, "inpaint.frame", static_cast<std::uint64_t>(frame_index));
        return generate_mask(spec, h, w);
    }
    throw ConfigError("inpaint: provide --mask, --masks or --mask-spec");
}

int cmd_inpaint(const InpaintArgs& in, const CommonArgs& args) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "inpaint-" + in.mode);
    const LoadedGan g = load_gan_checkpoint(in.gan_path, "inpaint");
    const bool conditional = g.ck.g.cfg.conditional;
    const int img = g.ck.g.cfg.img;
    const LossWeights w = c.loss_weights(c.resolved().at("eval").at("weights"));

    json result;
    result["mode"] = in.mode;
    result["gan_hash"] = g.hash;
    result["config_hash"] = c.hash();

    std::optional<PriorMap> prior;
    if (conditional) {
        if (in.keypoints_path.empty())
            throw DependencyError("inpaint: conditional checkpoint needs --keypoints");
        prior = prior_from_keypoints_file(in.keypoints_path,
                                          c.resolved().at("data").at("keypoint_sigma").get<double>(), img, img);
    }
    const PriorMap* prior_ptr = prior ? &*prior : nullptr;

    const auto t0 = std::chrono::steady_clock::now();
    if (in.mode == "feedforward" || in.mode == "iterative") {
        if (in.image_path.empty()) throw ConfigError("inpaint: --image required");
        const Image original = png::read_image(in.image_path);
        const BinaryMask mask = mask_for(in, original.h, original.w, 0);

        Image composed;
        if (in.mode == "feedforward") {
            if (in.predictor_path.empty()) throw DependencyError("inpaint feedforward: --predictor required");
            const ckpt::PredictorCheckpoint pck = ckpt::load_predictor(in.predictor_path);
            verify_pinned_gan(pck.manifest, g.hash, "predictor");
            auto [outim, z] = predictor::inpaint(pck.p, g.ck.g, original, mask, prior_ptr);
            composed = std::move(outim);
            result["z"] = z.data;
            const Image raw = gan::generate(g.ck.g, z, prior_ptr);
            result["losses"] = {{"contextual", contextual_loss(original, raw, mask)},
                                {"realism", realism_loss(gan::discriminate(g.ck.d, raw, prior_ptr))},
                                {"gradient_diff", gradient_diff_loss(original, raw, mask)}};
        } else {
            baseline::OptimOptions opt;
            opt.iters = in.iters;
            opt.weights = w;
            auto [outim, trace] =
                baseline::inpaint_iterative(g.ck.g, g.ck.d, original, mask, prior_ptr, opt, c.seed());
            composed = std::move(outim);
            result["z"] = trace.final_z.data;
            result["loss_trace"] = trace.loss;
            result["best_loss"] = trace.best_loss.back();
        }
        png::write_image(out / "inpainted_0.png", composed);
        save_mask_png(out / "mask_0.png", mask);
        result["frames"] = 1;
    } else if (in.mode == "sequence") {
        if (in.sequence_path.empty()) throw DependencyError("inpaint sequence: --sequence required");
        if (in.frames_dir.empty()) throw ConfigError("inpaint sequence: --frames required");
        const ckpt::SeqCheckpoint sck = ckpt::load_sequence(in.sequence_path);
        verify_pinned_gan(sck.manifest, g.hash, "sequence model");

        std::vector<Image> frames;
        for (int t = 0;; ++t) {
            const fs::path p = fs::path(in.frames_dir) / (std::to_string(t) + ".png");
            if (!fs::exists(p)) break;
            frames.push_back(png::read_image(p));
        }
        if (frames.empty()) throw ConfigError("inpaint sequence: no frames found in " + in.frames_dir);
        std::vector<BinaryMask> masks;
        for (size_t t = 0; t < frames.size(); ++t)
            masks.push_back(mask_for(in, frames[t].h, frames[t].w, static_cast<int>(t)));

        std::vector<PriorMap> priors;
        if (conditional) priors.assign(frames.size(), *prior);
        const auto composed = sequence::inpaint_sequence(sck.m, g.ck.g, frames, masks,
                                                         conditional ? &priors : nullptr);
        for (size_t t = 0; t < composed.size(); ++t)
            png::write_image(out / ("inpainted_" + std::to_string(t) + ".png"), composed[t]);
        result["frames"] = composed.size();
        result["window"] = sck.m.cfg.window;
        json windows = json::array();
        for (size_t t0w = 0; t0w < frames.size(); t0w += static_cast<size_t>(sck.m.cfg.window)) {
            const size_t len = std::min<size_t>(sck.m.cfg.window, frames.size() - t0w);
            windows.push_back({{"start", t0w}, {"length", len}});
        }
        result["windows"] = windows;
    } else {
        throw ConfigError("unknown inpaint mode: " + in.mode);
    }
    result["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json_file(out / "result.json", result);
    c.write(out / "config.resolved.json");
    std::cout << "inpainted output written to " << out << "\n";
    return kExitOk;
}

// ---- eval / bench -----------------------------------------------------------

struct EvalArgs {
    std::string gan_path, cgan_path, m1_path, m2_path, m3_path, m4_path, m5_path;
};

int cmd_eval(const EvalArgs& ev, const CommonArgs& args, const std::string& data_root) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "eval");
    const data::Dataset heldout = load_split(data_root, "heldout");
    const harness::AblationConfig acfg = c.ablation_config();

    auto needs = [&](harness::Method m) {
        return std::find(acfg.methods.begin(), acfg.methods.end(), m) != acfg.methods.end();
    };

    json run_info;
    run_info["config_hash"] = c.hash();

    std::optional<ckpt::GanCheckpoint> gan_ck, cgan_ck;
    std::optional<ckpt::PredictorCheckpoint> m1_ck, m3_ck;
    std::optional<ckpt::SeqCheckpoint> m2_ck, m4_ck, m5_ck;
    std::string gan_hash, cgan_hash;

    const bool need_gan = needs(harness::Method::iterative) || needs(harness::Method::m1) ||
                          needs(harness::Method::m2);
    const bool need_cgan = needs(harness::Method::m3) || needs(harness::Method::m4) ||
                           needs(harness::Method::m5);
    if (need_gan) {
        if (ev.gan_path.empty()) throw DependencyError("eval: missing model variant: gan (--gan)");
        gan_ck = ckpt::load_gan(ev.gan_path);
        if (gan_ck->g.cfg.conditional) throw DependencyError("eval: --gan must be unconditional");
        gan_hash = gan_ck->manifest.at("param_hash").get<std::string>();
        run_info["gan_hash"] = gan_hash;
    }
    if (need_cgan) {
        if (ev.cgan_path.empty()) throw DependencyError("eval: missing model variant: cgan (--cgan)");
        cgan_ck = ckpt::load_gan(ev.cgan_path);
        if (!cgan_ck->g.cfg.conditional) throw DependencyError("eval: --cgan must be conditional");
        cgan_hash = cgan_ck->manifest.at("param_hash").get<std::string>();
        run_info["cgan_hash"] = cgan_hash;
    }
    auto load_pred = [&](const std::string& path, const char* name, const std::string& hash) {
        if (path.empty()) throw DependencyError(std::string("eval: missing model variant: ") + name);
        ckpt::PredictorCheckpoint ck = ckpt::load_predictor(path);
        verify_pinned_gan(ck.manifest, hash, name);
        return ck;
    };
    auto load_seq = [&](const std::string& path, const char* name, const std::string& hash) {
        if (path.empty()) throw DependencyError(std::string("eval: missing model variant: ") + name);
        ckpt::SeqCheckpoint ck = ckpt::load_sequence(path);
        verify_pinned_gan(ck.manifest, hash, name);
        return ck;
    };
    if (needs(harness::Method::m1)) m1_ck = load_pred(ev.m1_path, "m1", gan_hash);
    if (needs(harness::Method::m2)) m2_ck = load_seq(ev.m2_path, "m2", gan_hash);
    if (needs(harness::Method::m3)) m3_ck = load_pred(ev.m3_path, "m3", cgan_hash);
    if (needs(harness::Method::m4)) m4_ck = load_seq(ev.m4_path, "m4", cgan_hash);
    if (needs(harness::Method::m5)) m5_ck = load_seq(ev.m5_path, "m5", cgan_hash);

    harness::MethodSet set;
    if (gan_ck) {
        set.gan_g = &gan_ck->g;
        set.gan_d = &gan_ck->d;
    }
    if (cgan_ck) {
        set.cgan_g = &cgan_ck->g;
        set.cgan_d = &cgan_ck->d;
    }
    if (m1_ck) set.m1 = &m1_ck->p;
    if (m2_ck) set.m2 = &m2_ck->m;
    if (m3_ck) set.m3 = &m3_ck->p;
    if (m4_ck) set.m4 = &m4_ck->m;
    if (m5_ck) set.m5 = &m5_ck->m;

    const harness::AblationReport report = harness::ablation_report(set, heldout, acfg);
    harness::write_report_csv(out / "report.csv", report);
    harness::write_report_json(out / "report.json", report);
    for (MaskKind kind : acfg.mask_kinds)
        harness::write_report_plot(out / ("report_" + mask_kind_name(kind) + ".png"), report, kind);
    write_json_file(out / "run_info.json", run_info);
    c.write(out / "config.resolved.json");
    std::cout << "evaluation report written to " << out << "\n";
    return kExitOk;
}

int cmd_bench(const EvalArgs& ev, const CommonArgs& args, const std::string& data_root) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "bench");
    const data::Dataset heldout = load_split(data_root, "heldout");
    const cfg::RunConfig::BenchSettings bs = c.bench_settings();

    const LoadedGan g = load_gan_checkpoint(ev.gan_path, "bench");
    if (ev.m1_path.empty()) throw DependencyError("bench: --predictor required");
    const ckpt::PredictorCheckpoint pck = ckpt::load_predictor(ev.m1_path);
    verify_pinned_gan(pck.manifest, g.hash, "predictor");

    const int n = std::min<int>(bs.images, static_cast<int>(heldout.images.size()));
    std::span<const Image> images(heldout.images.data(), static_cast<size_t>(n));
    const LossWeights w = c.loss_weights(c.resolved().at("eval").at("weights"));
    const harness::SpeedupReport report =
        harness::bench_speedup(pck.p, g.ck.g, g.ck.d, images, bs.iters, bs.repeats, w, c.seed());
    harness::write_speedup_json(out / "speedup.json", report);

    json run_info;
    run_info["config_hash"] = c.hash();
    run_info["gan_hash"] = g.hash;
    write_json_file(out / "run_info.json", run_info);
    c.write(out / "config.resolved.json");
    std::cout << "speedup ratio: " << report.ratio << " (report in " << out << ")\n";
    return kExitOk;
}

// ---- report -----------------------------------------------------------------

int cmd_report(const std::string& eval_dir, const CommonArgs& args) {
    const cfg::RunConfig c = load_config(args);
    const fs::path out = resolve_out(c, args.out, "report");
    const json j = read_json_file(fs::path(eval_dir) / "report.json");

    harness::AblationReport report;
    report.schema_version = j.at("schema_version").get<int>();
    for (const auto& row : j.at("rows")) {
        harness::AblationRow r;
        r.method = row.at("method").get<std::string>();
        r.mask_kind = row.at("mask_kind").get<std::string>();
        r.seed = row.at("seed").get<std::uint64_t>();
        r.n_sequences = row.at("n_sequences").get<int>();
        r.eta_mean = row.at("eta_mean_db").get<double>();
        r.eta_std = row.at("eta_std_db").get<double>();
        if (!row.at("psnr_mean_db").is_null()) {
            r.psnr_mean = row.at("psnr_mean_db").get<double>();
            r.psnr_std = row.at("psnr_std_db").get<double>();
            r.has_psnr = true;
        }
        report.rows.push_back(std::move(r));
    }

    std::ofstream summary(out / "summary.txt");
    summary << "method  mask  seed-mean eta (dB)  seed-mean psnr (dB)\n";
    std::vector<std::string> kinds;
    for (const auto& r : report.rows)
        if (std::find(kinds.begin(), kinds.end(), r.mask_kind) == kinds.end()) kinds.push_back(r.mask_kind);
    for (const std::string& kind : kinds) {
        const MaskKind mk = mask_kind_from_name(kind);
        for (harness::Method m : {harness::Method::iterative, harness::Method::m1, harness::Method::m2,
                                  harness::Method::m3, harness::Method::m4, harness::Method::m5}) {
            try {
                summary << harness::method_name(m) << "  " << kind << "  " << report.eta_seed_mean(m, mk);
            } catch (const ArgumentError&) {
                continue;
            }
            try {
                summary << "  " << report.psnr_seed_mean(m, mk);
            } catch (const ArgumentError&) {
                summary << "  -";
            }
            summary << "\n";
        }
        harness::write_report_plot(out / ("report_" + kind + ".png"), report, mk);
    }
    std::cout << "report rendered to " << out << "\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"unsupervised GAN inpainting with learned noise priors"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string data_root, stage, gan_path, eval_dir;
    InpaintArgs inpaint_args;
    EvalArgs eval_args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "run config JSON");
        sub->add_option("--set", common.overrides, "override config values (section.key=value)");
        sub->add_option("--out", common.out, "output directory");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate the synthetic dataset (train + heldout)");
    add_common(gen);

    CLI::App* train = app.add_subcommand("train", "train a stage: gan | cgan | predictor | sequence");
    add_common(train);
    train->add_option("stage", stage, "training stage")->required();
    train->add_option("--data", data_root, "dataset root (from gen-data)")->required();
    train->add_option("--gan", gan_path, "gan/cgan checkpoint (predictor and sequence stages)");

    CLI::App* inp = app.add_subcommand("inpaint", "inpaint: feedforward | iterative | sequence");
    add_common(inp);
    inp->add_option("mode", inpaint_args.mode, "inpainting mode")->required();
    inp->add_option("--gan", inpaint_args.gan_path, "gan checkpoint")->required();
    inp->add_option("--predictor", inpaint_args.predictor_path, "predictor checkpoint");
    inp->add_option("--sequence", inpaint_args.sequence_path, "sequence checkpoint");
    inp->add_option("--image", inpaint_args.image_path, "input image (single-image modes)");
    inp->add_option("--frames", inpaint_args.frames_dir, "frame directory 0.png.. (sequence mode)");
    inp->add_option("--mask", inpaint_args.mask_path, "mask PNG (0 = hole)");
    inp->add_option("--masks", inpaint_args.masks_dir, "mask directory 0.png.. (sequence mode)");
    inp->add_option("--mask-spec", inpaint_args.mask_spec_path, "mask spec JSON");
    inp->add_option("--keypoints", inpaint_args.keypoints_path, "keypoints JSON for conditional models");
    inp->add_option("--iters", inpaint_args.iters, "iterations (iterative mode)");

    CLI::App* ev = app.add_subcommand("eval", "run the ablation ladder on the held-out set");
    add_common(ev);
    ev->add_option("--data", data_root, "dataset root")->required();
    ev->add_option("--gan", eval_args.gan_path, "unconditional gan checkpoint");
    ev->add_option("--cgan", eval_args.cgan_path, "conditional gan checkpoint");
    ev->add_option("--m1", eval_args.m1_path, "independent predictor checkpoint");
    ev->add_option("--m2", eval_args.m2_path, "grouped sequence checkpoint");
    ev->add_option("--m3", eval_args.m3_path, "conditional predictor checkpoint");
    ev->add_option("--m4", eval_args.m4_path, "conditional grouped sequence checkpoint");
    ev->add_option("--m5", eval_args.m5_path, "conditional grouped + consistency checkpoint");

    CLI::App* bench = app.add_subcommand("bench", "speedup benchmark: iterative vs feed-forward");
    add_common(bench);
    bench->add_option("--data", data_root, "dataset root")->required();
    bench->add_option("--gan", eval_args.gan_path, "gan checkpoint")->required();
    bench->add_option("--predictor", eval_args.m1_path, "predictor checkpoint")->required();

    CLI::App* rep = app.add_subcommand("report", "re-render plots/summary from an eval directory");
    add_common(rep);
    rep->add_option("--eval-dir", eval_dir, "directory containing report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(common);
        if (train->parsed()) return cmd_train(stage, common, data_root, gan_path);
        if (inp->parsed()) return cmd_inpaint(inpaint_args, common);
        if (ev->parsed()) return cmd_eval(eval_args, common, data_root);
        if (bench->parsed()) return cmd_bench(eval_args, common, data_root);
        if (rep->parsed()) return cmd_report(eval_dir, common);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DependencyError& e) {
        std::cerr << "dependency error: " << e.what() << "\n";
        return kExitDependency;
    } catch (const TrainingDivergedError& e) {
        std::cerr << "training failed: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace priorpaint::cli
