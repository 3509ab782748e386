#include "priorpaint/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "priorpaint/png_io.hpp"
#include "priorpaint/rng.hpp"

namespace priorpaint::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string image_id(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img_%05d", i);
    return buf;
}

std::string sequence_id(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "seq_%05d", i);
    return buf;
}

json keypoints_json(const synth::Keypoints& kps) {
    json arr = json::array();
    for (const auto& p : kps.points) arr.push_back(json::array({p[0], p[1]}));
    return arr;
}

synth::Keypoints keypoints_from_json(const json& arr) {
    synth::Keypoints kps;
    for (const auto& p : arr) kps.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return kps;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    f << j.dump(2) << "\n";
    if (!f) throw IoError("short write to " + path.string());
}

json read_json(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    return json::parse(f);
}

void validate(const DatasetSpec& spec) {
    if (spec.n_images < 0 || spec.n_sequences < 0 || (spec.n_images == 0 && spec.n_sequences == 0))
        throw ArgumentError("dataset: counts must be positive");
    if (spec.n_sequences > 0 && spec.t_frames < 1) throw ArgumentError("dataset: t_frames must be >= 1");
    if (spec.h < 8 || spec.w < 8) throw ArgumentError("dataset: image size too small");
}

}  // namespace

Dataset generate_dataset(const DatasetSpec& spec) {
    validate(spec);
    Dataset ds;
    ds.spec = spec;
    for (int i = 0; i < spec.n_images; ++i) {
        Rng rng(derive_seed(spec.seed, "dataset.image", static_cast<std::uint64_t>(i)));
        auto [im, kp] = synth::render_face(synth::sample_params(spec.h, spec.w, rng), spec.h, spec.w);
        ds.images.push_back(std::move(im));
        ds.image_keypoints.push_back(std::move(kp));
    }
    for (int i = 0; i < spec.n_sequences; ++i) {
        ds.sequences.push_back(synth::make_sequence_sample(
            spec.t_frames, spec.smoothness, spec.h, spec.w,
            derive_seed(spec.seed, "dataset.sequence", static_cast<std::uint64_t>(i))));
    }
    return ds;
}

void make_dataset(const fs::path& root, const DatasetSpec& spec) {
    validate(spec);
    if (fs::exists(root)) throw IoError("make_dataset: refusing to overwrite " + root.string());

    const fs::path tmp = root.string() + ".tmp";
    std::error_code ec;
    fs::remove_all(tmp, ec);
    try {
        fs::create_directories(tmp / "images");
        fs::create_directories(tmp / "sequences");
        fs::create_directories(tmp / "keypoints");

        for (int i = 0; i < spec.n_images; ++i) {
            Rng rng(derive_seed(spec.seed, "dataset.image", static_cast<std::uint64_t>(i)));
            auto [im, kp] = synth::render_face(synth::sample_params(spec.h, spec.w, rng), spec.h, spec.w);
            png::write_image(tmp / "images" / (image_id(i) + ".png"), im);
            write_json(tmp / "keypoints" / (image_id(i) + ".json"), keypoints_json(kp));
        }
        for (int i = 0; i < spec.n_sequences; ++i) {
            const synth::SequenceSample s = synth::make_sequence_sample(
                spec.t_frames, spec.smoothness, spec.h, spec.w,
                derive_seed(spec.seed, "dataset.sequence", static_cast<std::uint64_t>(i)));
            const fs::path dir = tmp / "sequences" / sequence_id(i);
            fs::create_directories(dir);
            json kps = json::array();
            for (int t = 0; t < spec.t_frames; ++t) {
                png::write_image(dir / (std::to_string(t) + ".png"), s.frames[t]);
                kps.push_back(keypoints_json(s.keypoints[t]));
            }
            write_json(tmp / "keypoints" / (sequence_id(i) + ".json"), kps);
        }

        json manifest;
        manifest["format_version"] = kDatasetFormatVersion;
        manifest["n_images"] = spec.n_images;
        manifest["n_sequences"] = spec.n_sequences;
        manifest["t_frames"] = spec.t_frames;
        manifest["h"] = spec.h;
        manifest["w"] = spec.w;
        manifest["seed"] = spec.seed;
        manifest["keypoint_sigma"] = spec.keypoint_sigma;
        manifest["smoothness"] = spec.smoothness;
        write_json(tmp / "manifest.json", manifest);

        fs::rename(tmp, root);
    } catch (...) {
        fs::remove_all(tmp, ec);
        throw;
    }
}

Dataset load_dataset(const fs::path& root) {
    const json manifest = read_json(root / "manifest.json");
    if (manifest.at("format_version").get<int>() != kDatasetFormatVersion)
        throw IoError("load_dataset: unsupported format version");

    Dataset ds;
    ds.spec.n_images = manifest.at("n_images").get<int>();
    ds.spec.n_sequences = manifest.at("n_sequences").get<int>();
    ds.spec.t_frames = manifest.at("t_frames").get<int>();
    ds.spec.h = manifest.at("h").get<int>();
    ds.spec.w = manifest.at("w").get<int>();
    ds.spec.seed = manifest.at("seed").get<std::uint64_t>();
    ds.spec.keypoint_sigma = manifest.at("keypoint_sigma").get<double>();
    ds.spec.smoothness = manifest.at("smoothness").get<double>();

    for (int i = 0; i < ds.spec.n_images; ++i) {
        ds.images.push_back(png::read_image(root / "images" / (image_id(i) + ".png")));
        ds.image_keypoints.push_back(
            keypoints_from_json(read_json(root / "keypoints" / (image_id(i) + ".json"))));
    }
    for (int i = 0; i < ds.spec.n_sequences; ++i) {
        synth::SequenceSample s;
        const json kps = read_json(root / "keypoints" / (sequence_id(i) + ".json"));
        for (int t = 0; t < ds.spec.t_frames; ++t) {
            s.frames.push_back(png::read_image(root / "sequences" / sequence_id(i) / (std::to_string(t) + ".png")));
            s.keypoints.push_back(keypoints_from_json(kps.at(t)));
        }
        ds.sequences.push_back(std::move(s));
    }
    return ds;
}

std::vector<PriorMap> Dataset::image_priors() const {
    std::vector<PriorMap> out;
    out.reserve(images.size());
    for (size_t i = 0; i < images.size(); ++i)
        out.push_back(synth::render_prior_map(image_keypoints[i], spec.keypoint_sigma, spec.h, spec.w));
    return out;
}

std::vector<std::vector<PriorMap>> Dataset::sequence_priors() const {
    std::vector<std::vector<PriorMap>> out;
    out.reserve(sequences.size());
    for (const auto& s : sequences) {
        std::vector<PriorMap> maps;
        maps.reserve(s.keypoints.size());
        for (const auto& kp : s.keypoints)
            maps.push_back(synth::render_prior_map(kp, spec.keypoint_sigma, spec.h, spec.w));
        out.push_back(std::move(maps));
    }
    return out;
}

}  // namespace priorpaint::data
