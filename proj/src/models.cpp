#include "priorpaint/models.hpp"

#include <cmath>

#include "priorpaint/kernels.hpp"

namespace priorpaint::models {

namespace {

constexpr double kInitStd = 0.02;
constexpr double kScoreClamp = 1e-12;

int log2i(int v) {
    int k = 0;
    while ((1 << k) < v) ++k;
    if ((1 << k) != v) throw ArgumentError("image size must be a power of two");
    return k;
}

Tensor clamp_scores(Tensor s) {
    for (double& v : s.data) v = std::min(std::max(v, kScoreClamp), 1.0 - kScoreClamp);
    return s;
}

}  // namespace

std::vector<int> default_gen_channels(int img) {
    switch (img) {
        case 8: return {32, 24, 16};
        case 16: return {40, 28, 20, 12};
        case 32: return {40, 28, 20, 12, 6};
        default: throw ArgumentError("default_gen_channels: unsupported image size");
    }
}

std::vector<int> default_trunk_channels(int img) {
    switch (img) {
        case 8: return {16, 24};
        case 16: return {14, 20, 28};
        case 32: return {10, 14, 20, 28};
        default: throw ArgumentError("default_trunk_channels: unsupported image size");
    }
}

int GeneratorConfig::stages() const { return log2i(img) - log2i(seed_res); }

void GeneratorConfig::finalize() {
    if (chans.empty()) chans = default_gen_channels(img);
    if (static_cast<int>(chans.size()) != stages() + 1)
        throw ArgumentError("GeneratorConfig: need one channel count per stage plus the stem");
}

Generator Generator::init(GeneratorConfig cfg, std::uint64_t seed) {
    cfg.finalize();
    Generator g;
    g.cfg = cfg;
    const int cond = cfg.conditional ? 1 : 0;
    g.params.add("g.stem.w", Shape{cfg.chans[0], cfg.d + cond, 1, 1});
    g.params.add("g.stem.b", Shape{1, cfg.chans[0], 1, 1});
    for (int s = 1; s <= cfg.stages(); ++s) {
        g.params.add("g.up" + std::to_string(s) + ".w", Shape{cfg.chans[s], cfg.chans[s - 1] + cond, 3, 3});
        g.params.add("g.up" + std::to_string(s) + ".b", Shape{1, cfg.chans[s], 1, 1});
    }
    g.params.add("g.out.w", Shape{1, cfg.chans.back() + cond, 3, 3});
    g.params.add("g.out.b", Shape{1, 1, 1, 1});
    nn::init_params(g.params, kInitStd, seed);
    return g;
}

std::vector<Tensor> Generator::prior_pyramid(const Tensor& prior) const {
    std::vector<Tensor> pyr;
    int res = cfg.seed_res;
    for (int s = 0; s <= cfg.stages(); ++s) {
        pyr.push_back(res == cfg.img ? prior : kernels::avg_pool(prior, cfg.img / res));
        if (s < cfg.stages()) res *= 2;
    }
    pyr.push_back(prior);  // for the output conv at full resolution
    return pyr;
}

Tensor Generator::forward(const Tensor& z, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Generator::forward: conditional flag does not match prior presence");
    if (z.shape.c != cfg.d) throw ArgumentError("Generator::forward: latent size mismatch");
    std::vector<Tensor> pyr;
    if (prior) pyr = prior_pyramid(*prior);

    Tensor x = nn::broadcast_latent(z, cfg.seed_res, cfg.seed_res);
    if (prior) x = nn::concat_channels(x, pyr[0]);
    Tensor y;
    {
        const Tensor& w = *params.find("g.stem.w");
        y = Tensor(Shape{x.shape.n, w.shape.n, x.shape.h, x.shape.w});
        kernels::conv2d_forward(x, w, *params.find("g.stem.b"), 1, 0, y);
    }
    y = nn::apply_act(y, cfg.hidden_act);
    for (int s = 1; s <= cfg.stages(); ++s) {
        Tensor up(Shape{y.shape.n, y.shape.c, y.shape.h * 2, y.shape.w * 2});
        kernels::upsample2_forward(y, up);
        if (prior) up = nn::concat_channels(up, pyr[s]);
        const Tensor& w = *params.find("g.up" + std::to_string(s) + ".w");
        Tensor out(Shape{up.shape.n, w.shape.n, up.shape.h, up.shape.w});
        kernels::conv2d_forward(up, w, *params.find("g.up" + std::to_string(s) + ".b"), 1, 1, out);
        y = nn::apply_act(out, cfg.hidden_act);
    }
    if (prior) y = nn::concat_channels(y, pyr.back());
    const Tensor& w = *params.find("g.out.w");
    Tensor out(Shape{y.shape.n, 1, y.shape.h, y.shape.w});
    kernels::conv2d_forward(y, w, *params.find("g.out.b"), 1, 1, out);
    return cfg.sigmoid_out ? nn::sigmoid(out) : out;
}

ad::Var Generator::forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var z, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Generator::forward: conditional flag does not match prior presence");
    std::vector<Tensor> pyr;
    if (prior) pyr = prior_pyramid(*prior);

    int pi = 0;  // param index follows construction order
    ad::Var x = t.broadcast_latent(z, cfg.seed_res, cfg.seed_res);
    if (prior) x = t.concat_channels(x, t.input(pyr[0]));
    ad::Var y = t.conv2d(x, tp.vars[pi], tp.vars[pi + 1], 1, 0);
    pi += 2;
    y = nn::apply_act(t, y, cfg.hidden_act);
    for (int s = 1; s <= cfg.stages(); ++s) {
        ad::Var up = t.upsample2(y);
        if (prior) up = t.concat_channels(up, t.input(pyr[s]));
        y = t.conv2d(up, tp.vars[pi], tp.vars[pi + 1], 1, 1);
        pi += 2;
        y = nn::apply_act(t, y, cfg.hidden_act);
    }
    if (prior) y = t.concat_channels(y, t.input(pyr.back()));
    ad::Var out = t.conv2d(y, tp.vars[pi], tp.vars[pi + 1], 1, 1);
    return cfg.sigmoid_out ? t.sigmoid(out) : out;
}

int TrunkConfig::stages() const { return log2i(img) - 1; }  // down to 2x2

void TrunkConfig::finalize() {
    if (chans.empty()) chans = default_trunk_channels(img);
    if (static_cast<int>(chans.size()) != stages())
        throw ArgumentError("TrunkConfig: need one channel count per stride-2 stage");
}

long TrunkConfig::flat_size() const { return static_cast<long>(chans.back()) * 2 * 2; }

namespace {

void trunk_params(nn::ParamList& p, const TrunkConfig& t, const std::string& prefix) {
    int in_ch = t.in_ch;
    for (int s = 0; s < t.stages(); ++s) {
        p.add(prefix + ".c" + std::to_string(s) + ".w", Shape{t.chans[s], in_ch, 3, 3});
        p.add(prefix + ".c" + std::to_string(s) + ".b", Shape{1, t.chans[s], 1, 1});
        in_ch = t.chans[s];
    }
}

Tensor trunk_forward(const nn::ParamList& p, const TrunkConfig& t, const std::string& prefix, Tensor x) {
    for (int s = 0; s < t.stages(); ++s) {
        const Tensor& w = *p.find(prefix + ".c" + std::to_string(s) + ".w");
        Tensor y(Shape{x.shape.n, w.shape.n, kernels::conv_out_extent(x.shape.h, 3, 2, 1),
                       kernels::conv_out_extent(x.shape.w, 3, 2, 1)});
        kernels::conv2d_forward(x, w, *p.find(prefix + ".c" + std::to_string(s) + ".b"), 2, 1, y);
        x = nn::apply_act(y, t.act, t.leaky);
    }
    x.shape = Shape{x.shape.n, static_cast<int>(t.flat_size()), 1, 1};
    return x;
}

ad::Var trunk_forward(ad::Tape& tape, const nn::TapeParams& tp, int& pi, const TrunkConfig& t, ad::Var x) {
    for (int s = 0; s < t.stages(); ++s) {
        x = tape.conv2d(x, tp.vars[pi], tp.vars[pi + 1], 2, 1);
        pi += 2;
        x = nn::apply_act(tape, x, t.act, t.leaky);
    }
    return tape.reshape(x, Shape{tape.val(x).shape.n, static_cast<int>(t.flat_size()), 1, 1});
}

}  // namespace

Discriminator Discriminator::init(DiscriminatorConfig cfg, std::uint64_t seed) {
    Discriminator d;
    d.cfg = cfg;
    d.trunk.img = cfg.img;
    d.trunk.in_ch = cfg.conditional ? 2 : 1;
    d.trunk.chans = cfg.chans;
    d.trunk.act = cfg.act;
    d.trunk.finalize();
    d.cfg.chans = d.trunk.chans;
    trunk_params(d.params, d.trunk, "d");
    d.params.add("d.head.w", Shape{1, static_cast<int>(d.trunk.flat_size()), 1, 1});
    d.params.add("d.head.b", Shape{1, 1, 1, 1});
    nn::init_params(d.params, kInitStd, seed);
    return d;
}

Tensor Discriminator::forward(const Tensor& x, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Discriminator::forward: conditional flag does not match prior presence");
    Tensor in = prior ? nn::concat_channels(x, *prior) : x;
    Tensor f = trunk_forward(params, trunk, "d", std::move(in));
    Tensor s(Shape{f.shape.n, 1, 1, 1});
    kernels::dense_forward(f, *params.find("d.head.w"), *params.find("d.head.b"), s);
    return clamp_scores(nn::sigmoid(s));
}

ad::Var Discriminator::forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var x, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Discriminator::forward: conditional flag does not match prior presence");
    ad::Var in = prior ? t.concat_channels(x, t.input(*prior)) : x;
    int pi = 0;
    ad::Var f = trunk_forward(t, tp, pi, trunk, in);
    ad::Var s = t.dense(f, tp.vars[pi], tp.vars[pi + 1]);
    return t.sigmoid(s);
}

Predictor Predictor::init(PredictorConfig cfg, std::uint64_t seed) {
    Predictor p;
    p.cfg = cfg;
    p.trunk.img = cfg.img;
    p.trunk.in_ch = cfg.conditional ? 2 : 1;
    p.trunk.chans = cfg.chans;
    p.trunk.act = cfg.act;
    p.trunk.finalize();
    p.cfg.chans = p.trunk.chans;
    trunk_params(p.params, p.trunk, "p");
    p.params.add("p.head.w", Shape{cfg.d, static_cast<int>(p.trunk.flat_size()), 1, 1});
    p.params.add("p.head.b", Shape{1, cfg.d, 1, 1});
    nn::init_params(p.params, kInitStd, seed);
    return p;
}

Tensor Predictor::forward(const Tensor& damaged, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Predictor::forward: conditional flag does not match prior presence");
    Tensor in = prior ? nn::concat_channels(damaged, *prior) : damaged;
    Tensor f = trunk_forward(params, trunk, "p", std::move(in));
    Tensor z(Shape{f.shape.n, cfg.d, 1, 1});
    kernels::dense_forward(f, *params.find("p.head.w"), *params.find("p.head.b"), z);
    return nn::tanh_t(z);
}

ad::Var Predictor::forward(ad::Tape& t, const nn::TapeParams& tp, ad::Var damaged, const Tensor* prior) const {
    if (cfg.conditional != (prior != nullptr))
        throw ArgumentError("Predictor::forward: conditional flag does not match prior presence");
    ad::Var in = prior ? t.concat_channels(damaged, t.input(*prior)) : damaged;
    int pi = 0;
    ad::Var f = trunk_forward(t, tp, pi, trunk, in);
    return t.tanh_act(t.dense(f, tp.vars[pi], tp.vars[pi + 1]));
}

SeqModel SeqModel::init(SeqModelConfig cfg, std::uint64_t seed) {
    if (cfg.window < 1) throw ArgumentError("SeqModel: window must be >= 1");
    SeqModel m;
    m.cfg = cfg;
    m.trunk.img = cfg.img;
    m.trunk.in_ch = cfg.conditional ? 2 : 1;
    m.trunk.chans = cfg.chans;
    m.trunk.act = cfg.act;
    m.trunk.finalize();
    m.cfg.chans = m.trunk.chans;
    trunk_params(m.params, m.trunk, "enc");
    m.params.add("enc.feat.w", Shape{cfg.d, static_cast<int>(m.trunk.flat_size()), 1, 1});
    m.params.add("enc.feat.b", Shape{1, cfg.d, 1, 1});
    m.params.add("lstm.wx", Shape{4 * cfg.hidden, cfg.d, 1, 1});
    m.params.add("lstm.wh", Shape{4 * cfg.hidden, cfg.hidden, 1, 1});
    m.params.add("lstm.b", Shape{1, 4 * cfg.hidden, 1, 1});
    m.params.add("head.w", Shape{cfg.d, cfg.hidden, 1, 1});
    m.params.add("head.b", Shape{1, cfg.d, 1, 1});
    nn::init_params(m.params, kInitStd, seed);
    // Forget-gate bias starts at 1 (gate order i, f, g, o).
    Tensor& b = *m.params.find("lstm.b");
    for (int i = cfg.hidden; i < 2 * cfg.hidden; ++i) b[static_cast<size_t>(i)] = 1.0;
    return m;
}

std::vector<Tensor> SeqModel::forward(std::span<const Tensor> frames, const std::vector<Tensor>* priors) const {
    if (cfg.conditional != (priors != nullptr))
        throw ArgumentError("SeqModel::forward: conditional flag does not match prior presence");
    if (priors && priors->size() != frames.size())
        throw ArgumentError("SeqModel::forward: prior count mismatch");
    if (frames.empty()) throw ArgumentError("SeqModel::forward: empty window");

    const int batch = frames[0].shape.n;
    const int hidden = cfg.hidden;
    Tensor h(Shape{batch, hidden, 1, 1});
    Tensor c(Shape{batch, hidden, 1, 1});
    Tensor zero_b(Shape{1, 4 * hidden, 1, 1});
    const Tensor& wx = *params.find("lstm.wx");
    const Tensor& wh = *params.find("lstm.wh");
    const Tensor& lb = *params.find("lstm.b");

    std::vector<Tensor> zs;
    zs.reserve(frames.size());
    for (size_t k = 0; k < frames.size(); ++k) {
        Tensor in = priors ? nn::concat_channels(frames[k], (*priors)[k]) : frames[k];
        Tensor f = trunk_forward(params, trunk, "enc", std::move(in));
        Tensor feat(Shape{batch, cfg.d, 1, 1});
        kernels::dense_forward(f, *params.find("enc.feat.w"), *params.find("enc.feat.b"), feat);
        feat = nn::tanh_t(feat);

        Tensor gx(Shape{batch, 4 * hidden, 1, 1});
        kernels::dense_forward(feat, wx, lb, gx);
        Tensor gh(Shape{batch, 4 * hidden, 1, 1});
        kernels::dense_forward(h, wh, zero_b, gh);
        for (size_t i = 0; i < gx.data.size(); ++i) gx[i] += gh[i];

        for (int n = 0; n < batch; ++n) {
            double* g = gx.ptr() + static_cast<size_t>(n) * 4 * hidden;
            double* hp = h.ptr() + static_cast<size_t>(n) * hidden;
            double* cp = c.ptr() + static_cast<size_t>(n) * hidden;
            for (int j = 0; j < hidden; ++j) {
                const double ig = 1.0 / (1.0 + std::exp(-g[j]));
                const double fg = 1.0 / (1.0 + std::exp(-g[hidden + j]));
                const double gg = std::tanh(g[2 * hidden + j]);
                const double og = 1.0 / (1.0 + std::exp(-g[3 * hidden + j]));
                cp[j] = fg * cp[j] + ig * gg;
                hp[j] = og * std::tanh(cp[j]);
            }
        }
        Tensor z(Shape{batch, cfg.d, 1, 1});
        kernels::dense_forward(h, *params.find("head.w"), *params.find("head.b"), z);
        zs.push_back(nn::tanh_t(z));
    }
    return zs;
}

std::vector<ad::Var> SeqModel::forward(ad::Tape& t, const nn::TapeParams& tp, std::span<const ad::Var> frames,
                                       const std::vector<Tensor>* priors) const {
    if (cfg.conditional != (priors != nullptr))
        throw ArgumentError("SeqModel::forward: conditional flag does not match prior presence");
    if (priors && priors->size() != frames.size())
        throw ArgumentError("SeqModel::forward: prior count mismatch");
    if (frames.empty()) throw ArgumentError("SeqModel::forward: empty window");

    const int batch = t.val(frames[0]).shape.n;
    const int hidden = cfg.hidden;
    const int n_trunk = trunk.stages() * 2;
    const int i_feat = n_trunk;                 // enc.feat.w/b
    const int i_wx = n_trunk + 2;               // lstm.wx, wh, b
    const int i_head = n_trunk + 5;             // head.w/b

    ad::Var h = t.input(Tensor(Shape{batch, hidden, 1, 1}));
    ad::Var c = t.input(Tensor(Shape{batch, hidden, 1, 1}));
    ad::Var zero_b = t.input(Tensor(Shape{1, 4 * hidden, 1, 1}));

    std::vector<ad::Var> zs;
    zs.reserve(frames.size());
    for (size_t k = 0; k < frames.size(); ++k) {
        ad::Var in = priors ? t.concat_channels(frames[k], t.input((*priors)[k])) : frames[k];
        int pi = 0;
        ad::Var f = trunk_forward(t, tp, pi, trunk, in);
        ad::Var feat = t.tanh_act(t.dense(f, tp.vars[i_feat], tp.vars[i_feat + 1]));

        ad::Var gates = t.add(t.dense(feat, tp.vars[i_wx], tp.vars[i_wx + 2]),
                              t.dense(h, tp.vars[i_wx + 1], zero_b));
        ad::Var ig = t.sigmoid(t.slice_cols(gates, 0, hidden));
        ad::Var fg = t.sigmoid(t.slice_cols(gates, hidden, hidden));
        ad::Var gg = t.tanh_act(t.slice_cols(gates, 2 * hidden, hidden));
        ad::Var og = t.sigmoid(t.slice_cols(gates, 3 * hidden, hidden));
        c = t.add(t.mul(fg, c), t.mul(ig, gg));
        h = t.mul(og, t.tanh_act(c));
        zs.push_back(t.tanh_act(t.dense(h, tp.vars[i_head], tp.vars[i_head + 1])));
    }
    return zs;
}

}  // namespace priorpaint::models
