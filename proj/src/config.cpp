#include "priorpaint/config.hpp"

#include <cstdlib>
#include <fstream>

#include "priorpaint/checkpoint.hpp"

namespace priorpaint::cfg {

using nlohmann::json;

namespace {

json default_json() {
    json weights = {{"lambda1", 1.0}, {"lambda2", 0.05}, {"lambda3", 0.2}};
    json j;
    j["format_version"] = 1;
    j["seed"] = 1;
    j["out_root"] = "runs";
    j["data"] = {{"h", 32},
                 {"w", 32},
                 {"n_train_images", 5000},
                 {"n_train_sequences", 500},
                 {"sequence_length", 16},
                 {"n_heldout_images", 200},
                 {"n_heldout_sequences", 100},
                 {"keypoint_sigma", 2.0},
                 {"smoothness", 0.15}};
    j["gan"] = {{"d", 64},
                {"steps", 1500},
                {"batch", 16},
                {"lr_g", 2e-4},
                {"lr_d", 2e-4},
                {"beta1", 0.5},
                {"beta2", 0.999},
                {"loss", "non_saturating"},
                {"g_channels", json::array()},
                {"d_channels", json::array()}};
    j["predictor"] = {{"steps", 1500}, {"batch", 16},   {"lr", 1e-3},
                      {"beta1", 0.9},  {"beta2", 0.999}, {"weights", weights},
                      {"contextual", "l1"}, {"mask_kinds", json::array({"rc", "rf", "rch"})}};
    j["sequence"] = {{"window", 4},   {"hidden", 128},  {"lambda4", 0.1},
                     {"steps", 1200}, {"batch", 8},     {"lr", 1e-3},
                     {"beta1", 0.9},  {"beta2", 0.999}, {"weights", weights},
                     {"contextual", "l1"}, {"mask_kinds", json::array({"rc", "rf", "rch"})}};
    j["eval"] = {{"methods", json::array({"iterative", "m1", "m2", "m3", "m4", "m5"})},
                 {"mask_kinds", json::array({"rc"})},
                 {"t_eval", 4},
                 {"n_sequences", 100},
                 {"seeds", json::array({11, 22, 33})},
                 {"iterative_iters", 300},
                 {"quality_iters", 1500},
                 {"iterative_step", 0.01},
                 {"iterative_momentum", 0.9},
                 {"consistency_region", "full"},
                 {"n_quality_images", 0},
                 {"weights", weights}};
    j["bench"] = {{"images", 4}, {"iters", 1500}, {"repeats", 3}};
    return j;
}

// Overlay must only contain keys known to the defaults; objects merge
// recursively, everything else replaces.
void merge_checked(json& base, const json& overlay, const std::string& prefix) {
    if (!overlay.is_object()) throw ConfigError("config: expected an object at " + prefix);
    for (const auto& [key, value] : overlay.items()) {
        if (!base.contains(key))
            throw ConfigError("config: unknown key '" + (prefix.empty() ? key : prefix + "." + key) + "'");
        if (base[key].is_object()) {
            merge_checked(base[key], value, prefix.empty() ? key : prefix + "." + key);
        } else {
            base[key] = value;
        }
    }
}

std::vector<MaskKind> parse_kinds(const json& arr) {
    std::vector<MaskKind> kinds;
    for (const auto& k : arr) kinds.push_back(mask_kind_from_name(k.get<std::string>()));
    if (kinds.empty()) throw ConfigError("config: empty mask kind list");
    return kinds;
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.j_ = default_json();
    return c;
}

RunConfig RunConfig::from_json(const json& overlay) {
    RunConfig c;
    c.j_ = default_json();
    merge_checked(c.j_, overlay, "");
    return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config: cannot open " + path.string());
    json overlay;
    try {
        overlay = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return from_json(overlay);
}

void RunConfig::apply_override(const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like section.key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json* node = &j_;
    size_t start = 0;
    while (true) {
        const size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->contains(key)) throw ConfigError("config: unknown key '" + path + "'");
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    try {
        *node = json::parse(value);
    } catch (const json::parse_error&) {
        *node = value;  // bare strings allowed without quotes
    }
}

std::string RunConfig::hash() const {
    const std::string dump = j_.dump();
    return ckpt::sha256_hex(
        std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(dump.data()), dump.size()));
}

void RunConfig::write(const std::filesystem::path& path) const {
    std::ofstream f(path);
    if (!f) throw IoError("config: cannot write " + path.string());
    f << j_.dump(2) << "\n";
}

std::uint64_t RunConfig::seed() const { return j_.at("seed").get<std::uint64_t>(); }

std::string RunConfig::out_root() const {
    if (const char* env = std::getenv("PRIORPAINT_OUT_ROOT"); env && *env) return env;
    return j_.at("out_root").get<std::string>();
}

data::DatasetSpec RunConfig::train_data_spec() const {
    const json& d = j_.at("data");
    data::DatasetSpec s;
    s.h = d.at("h").get<int>();
    s.w = d.at("w").get<int>();
    s.n_images = d.at("n_train_images").get<int>();
    s.n_sequences = d.at("n_train_sequences").get<int>();
    s.t_frames = d.at("sequence_length").get<int>();
    s.keypoint_sigma = d.at("keypoint_sigma").get<double>();
    s.smoothness = d.at("smoothness").get<double>();
    s.seed = derive_seed(seed(), "data.train");
    return s;
}

data::DatasetSpec RunConfig::heldout_data_spec() const {
    data::DatasetSpec s = train_data_spec();
    const json& d = j_.at("data");
    s.n_images = d.at("n_heldout_images").get<int>();
    s.n_sequences = d.at("n_heldout_sequences").get<int>();
    s.seed = derive_seed(seed(), "data.heldout");
    return s;
}

LossWeights RunConfig::loss_weights(const json& section) const {
    LossWeights w;
    w.lambda1 = section.at("lambda1").get<double>();
    w.lambda2 = section.at("lambda2").get<double>();
    w.lambda3 = section.at("lambda3").get<double>();
    return w;
}

gan::GanConfig RunConfig::gan_config(bool conditional) const {
    const json& g = j_.at("gan");
    gan::GanConfig c;
    c.d = g.at("d").get<int>();
    c.img = j_.at("data").at("h").get<int>();
    c.steps = g.at("steps").get<int>();
    c.batch = g.at("batch").get<int>();
    c.lr_g = g.at("lr_g").get<double>();
    c.lr_d = g.at("lr_d").get<double>();
    c.beta1 = g.at("beta1").get<double>();
    c.beta2 = g.at("beta2").get<double>();
    c.conditional = conditional;
    const std::string loss = g.at("loss").get<std::string>();
    if (loss == "saturating")
        c.saturating = true;
    else if (loss == "non_saturating")
        c.saturating = false;
    else
        throw ConfigError("config: gan.loss must be saturating or non_saturating");
    c.g_chans = g.at("g_channels").get<std::vector<int>>();
    c.d_chans = g.at("d_channels").get<std::vector<int>>();
    c.seed = derive_seed(seed(), conditional ? "train.cgan" : "train.gan");
    return c;
}

predictor::PredictorTrainConfig RunConfig::predictor_config() const {
    const json& p = j_.at("predictor");
    predictor::PredictorTrainConfig c;
    c.steps = p.at("steps").get<int>();
    c.batch = p.at("batch").get<int>();
    c.lr = p.at("lr").get<double>();
    c.beta1 = p.at("beta1").get<double>();
    c.beta2 = p.at("beta2").get<double>();
    c.weights = loss_weights(p.at("weights"));
    c.ctx = ctx_reduction_from_name(p.at("contextual").get<std::string>());
    c.mask_kinds = parse_kinds(p.at("mask_kinds"));
    c.seed = derive_seed(seed(), "train.predictor");
    return c;
}

sequence::SeqTrainConfig RunConfig::sequence_config() const {
    const json& s = j_.at("sequence");
    sequence::SeqTrainConfig c;
    c.window = s.at("window").get<int>();
    c.hidden = s.at("hidden").get<int>();
    c.lambda4 = s.at("lambda4").get<double>();
    c.steps = s.at("steps").get<int>();
    c.batch = s.at("batch").get<int>();
    c.lr = s.at("lr").get<double>();
    c.beta1 = s.at("beta1").get<double>();
    c.beta2 = s.at("beta2").get<double>();
    c.weights = loss_weights(s.at("weights"));
    c.ctx = ctx_reduction_from_name(s.at("contextual").get<std::string>());
    c.mask_kinds = parse_kinds(s.at("mask_kinds"));
    c.seed = derive_seed(seed(), "train.sequence");
    return c;
}

harness::AblationConfig RunConfig::ablation_config() const {
    const json& e = j_.at("eval");
    harness::AblationConfig c;
    c.methods.clear();
    for (const auto& m : e.at("methods")) c.methods.push_back(harness::method_from_name(m.get<std::string>()));
    if (c.methods.empty()) throw ConfigError("config: eval.methods is empty");
    c.mask_kinds = parse_kinds(e.at("mask_kinds"));
    c.t_eval = e.at("t_eval").get<int>();
    c.n_sequences = e.at("n_sequences").get<int>();
    c.seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
    if (c.seeds.empty()) throw ConfigError("config: eval.seeds is empty");
    c.iterative_iters = e.at("iterative_iters").get<int>();
    c.quality_iters = e.at("quality_iters").get<int>();
    c.iterative_step = e.at("iterative_step").get<double>();
    c.iterative_momentum = e.at("iterative_momentum").get<double>();
    const std::string region = e.at("consistency_region").get<std::string>();
    if (region == "hole")
        c.hole_only = true;
    else if (region == "full")
        c.hole_only = false;
    else
        throw ConfigError("config: eval.consistency_region must be full or hole");
    c.n_quality_images = e.at("n_quality_images").get<int>();
    c.weights = loss_weights(e.at("weights"));
    return c;
}

RunConfig::BenchSettings RunConfig::bench_settings() const {
    const json& b = j_.at("bench");
    BenchSettings s;
    s.images = b.at("images").get<int>();
    s.iters = b.at("iters").get<int>();
    s.repeats = b.at("repeats").get<int>();
    return s;
}

}  // namespace priorpaint::cfg
