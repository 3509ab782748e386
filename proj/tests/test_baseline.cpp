#include <doctest.h>

#include "priorpaint/baseline.hpp"
#include "priorpaint/dataset.hpp"
#include "priorpaint/synth.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace priorpaint;

namespace {

struct Fixture {
    data::Dataset ds;
    gan::TrainedGan gan_pair;
    Fixture() {
        data::DatasetSpec spec;
        spec.n_images = 16;
        spec.n_sequences = 0;
        spec.h = spec.w = 16;
        spec.seed = 21;
        ds = data::generate_dataset(spec);
        gan::GanConfig cfg;
        cfg.d = 16;
        cfg.img = 16;
        cfg.batch = 8;
        cfg.steps = 120;
        cfg.seed = 22;
        gan_pair = gan::train_gan(ds.images, cfg);
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("optimize_z: zero step returns the seeded initial draw") {
    auto& f = fixture();
    const BinaryMask m = gen_center_mask(16, 16, 0.5, 0.7, 1);
    baseline::OptimOptions opt;
    opt.iters = 1;
    opt.step = 0.0;
    auto [z, trace] = baseline::optimize_z(f.gan_pair.g, f.gan_pair.d, f.ds.images[0], m, nullptr, opt, 77);

    Rng rng(derive_seed(77, "baseline.z0"));
    for (int k = 0; k < 16; ++k) CHECK(z.at(0, k, 0, 0) == rng.uniform(-1.0, 1.0));
    CHECK(trace.loss.size() == 1);
    CHECK(trace.best_loss.size() == 1);
}

TEST_CASE("optimize_z: traces, projection, improvement statistics") {
    auto& f = fixture();
    baseline::OptimOptions opt;
    opt.iters = 120;
    opt.step = 0.05;

    int improved = 0;
    const int n_toy = 50;
    for (int i = 0; i < n_toy; ++i) {
        Rng prng(derive_seed(4242, "toy", static_cast<std::uint64_t>(i)));
        const Image src = synth::render_face(synth::sample_params(16, 16, prng), 16, 16).first;
        const BinaryMask m = gen_center_mask(16, 16, 0.5, 0.7, 300 + i);
        auto [z, trace] =
            baseline::optimize_z(f.gan_pair.g, f.gan_pair.d, src, m, nullptr, opt, 1000 + i);
        REQUIRE(trace.loss.size() == 120);
        REQUIRE(trace.best_loss.size() == 120);
        for (size_t k = 1; k < trace.best_loss.size(); ++k)
            CHECK(trace.best_loss[k] <= trace.best_loss[k - 1]);
        CHECK(trace.best_loss.back() <= trace.loss.front());
        if (trace.best_loss.back() < trace.loss.front()) ++improved;
        for (double v : z.data) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
        // returned z is the best iterate: replaying it must give best_loss
        const Image g = gan::generate(f.gan_pair.g, z);
        const double replay = combined_loss(src, g, m, gan::discriminate(f.gan_pair.d, g), opt.weights);
        CHECK(replay == doctest::Approx(trace.best_loss.back()).epsilon(1e-9));
    }
    CHECK(improved >= 45);  // strictly lower final loss on nearly all toy images

    // determinism
    const BinaryMask m = gen_center_mask(16, 16, 0.5, 0.7, 3);
    auto r1 = baseline::optimize_z(f.gan_pair.g, f.gan_pair.d, f.ds.images[0], m, nullptr, opt, 5);
    auto r2 = baseline::optimize_z(f.gan_pair.g, f.gan_pair.d, f.ds.images[0], m, nullptr, opt, 5);
    CHECK(r1.first.data == r2.first.data);
    CHECK(r1.second.loss == r2.second.loss);
}

TEST_CASE("linear special case converges to the least-squares solution") {
    // G(z) = A z reshaped to 3x4; masked L2 contextual only. The optimum is
    // the mask-restricted least-squares solve, computed independently by
    // normal equations + Gaussian elimination.
    const int d = 5, h = 3, w = 4;
    Rng rng(9);
    std::vector<std::vector<double>> a(h * w, std::vector<double>(d));
    for (auto& row : a)
        for (double& v : row) v = rng.normal(0.0, 0.6);
    std::vector<double> target(h * w);
    for (double& v : target) v = rng.uniform(0.0, 1.0);
    BinaryMask mask(h, w, 1);
    mask.at(0, 1) = 0;
    mask.at(2, 2) = 0;
    mask.at(1, 3) = 0;

    std::vector<int> rows;
    Tensor orig_t(Shape{1, 1, h, w});
    Tensor mask_t(Shape{1, 1, h, w});
    for (int i = 0; i < h * w; ++i) {
        orig_t[static_cast<size_t>(i)] = target[static_cast<size_t>(i)];
        mask_t[static_cast<size_t>(i)] = mask.grid[static_cast<size_t>(i)] ? 1.0 : 0.0;
        if (mask.grid[static_cast<size_t>(i)]) rows.push_back(i);
    }

    const std::vector<double> want = oracles::least_squares(a, target, rows);

    auto objective = [&](ad::Tape& t, ad::Var zv) {
        Tensor at(Shape{h * w, d, 1, 1});
        for (int i = 0; i < h * w; ++i)
            for (int k = 0; k < d; ++k) at.at(i, k, 0, 0) = a[static_cast<size_t>(i)][static_cast<size_t>(k)];
        Tensor zero_b(Shape{1, h * w, 1, 1});
        ad::Var img = t.reshape(t.dense(zv, t.input(at), t.input(zero_b)), Shape{1, 1, h, w});
        return t.masked_ctx_mean(img, orig_t, mask_t, /*l2=*/true);
    };

    baseline::OptimOptions opt;
    opt.iters = 4000;
    opt.step = 0.05;
    opt.momentum = 0.9;
    auto [z, trace] = baseline::optimize_z_core(objective, d, opt, 31);
    for (int k = 0; k < d; ++k)
        CHECK(z.at(0, k, 0, 0) == doctest::Approx(want[static_cast<size_t>(k)]).epsilon(1e-3));
}

TEST_CASE("inpaint_iterative: identity mask, unsupervision, wall time recorded") {
    auto& f = fixture();
    baseline::OptimOptions opt;
    opt.iters = 30;
    opt.step = 0.05;

    BinaryMask ones(16, 16, 1);
    auto [out, trace] = baseline::inpaint_iterative(f.gan_pair.g, f.gan_pair.d, f.ds.images[2], ones, nullptr, opt, 3);
    CHECK(images_equal(out, f.ds.images[2]));
    CHECK(trace.wall_seconds > 0.0);
    CHECK(trace.iterations == 30);

    // randomizing hole pixels: loss trace bit-identical, output differs only
    // where the new visible pixels were copied (nowhere: holes aren't visible)
    const BinaryMask m = gen_freehand_mask(16, 16, 0.5, 5);
    auto [o1, t1] = baseline::inpaint_iterative(f.gan_pair.g, f.gan_pair.d, f.ds.images[2], m, nullptr, opt, 4);
    Image hacked = f.ds.images[2];
    Rng rng(8);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            if (m.at(r, c) == 0) hacked.at(r, c) = rng.uniform01();
    auto [o2, t2] = baseline::inpaint_iterative(f.gan_pair.g, f.gan_pair.d, hacked, m, nullptr, opt, 4);
    CHECK(t1.loss == t2.loss);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            if (m.at(r, c) == 0) CHECK(o1.at(r, c) == o2.at(r, c));

    CHECK_THROWS_AS(baseline::optimize_z_core([](ad::Tape& t, ad::Var z) { return t.mean_all(z); }, 4,
                                              baseline::OptimOptions{.iters = 0}, 1),
                    ArgumentError);
}
