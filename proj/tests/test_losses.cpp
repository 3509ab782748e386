#include <doctest.h>

#include "priorpaint/losses.hpp"
#include "priorpaint/rng.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace priorpaint;

namespace {

Image random_image(int h, int w, Rng& rng) {
    Image im(h, w);
    for (double& v : im.pix) v = rng.uniform01();
    return im;
}

BinaryMask random_mask(int h, int w, double keep, Rng& rng) {
    BinaryMask m(h, w);
    for (auto& v : m.grid) v = rng.uniform01() < keep ? 1 : 0;
    return m;
}

}  // namespace

TEST_CASE("contextual loss: identity, empty mask, hand value, oracle agreement") {
    Rng rng(1);
    const Image a = random_image(8, 8, rng);
    const BinaryMask m = random_mask(8, 8, 0.6, rng);
    CHECK(contextual_loss(a, a, m) == 0.0);

    BinaryMask zeros(8, 8, 0);
    const Image b = random_image(8, 8, rng);
    CHECK(contextual_loss(a, b, zeros) == 0.0);

    Image orig(4, 4, 0.0), gen(4, 4, 0.5);
    BinaryMask ones(4, 4, 1);
    CHECK(contextual_loss(orig, gen, ones) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(contextual_loss(a, b, m) == doctest::Approx(oracles::ctx_double_loop(a, b, m)).epsilon(1e-12));

    // L2 mode
    CHECK(contextual_loss(orig, gen, ones, CtxReduction::l2) == doctest::Approx(0.25).epsilon(1e-12));

    Image wrong(4, 5, 0.0);
    CHECK_THROWS_AS(contextual_loss(orig, wrong, ones), ArgumentError);
}

TEST_CASE("realism loss: exact values, clamping at both ends, monotonicity") {
    CHECK(realism_loss(0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(realism_loss(0.0) == doctest::Approx(std::log(1.0 - 1e-6)).epsilon(1e-12));
    CHECK(realism_loss(1.0) == doctest::Approx(std::log(1e-6)).epsilon(1e-9));
    CHECK(realism_loss(1.0) == doctest::Approx(-13.8155).epsilon(1e-4));
    CHECK(realism_loss(0.9) < realism_loss(0.1));  // more realistic => lower loss
}

TEST_CASE("gradient difference loss: zeros, constants, 3x3 hand case vs double-loop oracle") {
    Rng rng(2);
    const Image a = random_image(6, 6, rng);
    const BinaryMask m = random_mask(6, 6, 0.7, rng);
    CHECK(gradient_diff_loss(a, a, m) == 0.0);

    Image c1(6, 6, 0.3), c2(6, 6, 0.9);
    BinaryMask ones(6, 6, 1);
    CHECK(gradient_diff_loss(c1, c2, ones) == 0.0);  // forward differences kill constants

    // 3x3: every row of I is the ramp (0, 0.5, 1); G = 0
    Image ramp(3, 3), zero(3, 3, 0.0);
    for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) ramp.at(r, cc) = 0.5 * cc;
    BinaryMask m3(3, 3, 1);
    const double got = gradient_diff_loss(ramp, zero, m3);
    CHECK(got == doctest::Approx(oracles::gdl_double_loop(ramp, zero, m3)).epsilon(1e-12));
    // direct: horizontal diffs all |0.5| over 6 stencils -> 0.5; vertical all 0
    CHECK(got == doctest::Approx(0.5).epsilon(1e-12));

    const Image b = random_image(6, 6, rng);
    CHECK(gradient_diff_loss(a, b, m) == doctest::Approx(oracles::gdl_double_loop(a, b, m)).epsilon(1e-12));
}

TEST_CASE("combined loss: weight selection, guard, hand sum, linearity in weights") {
    Rng rng(3);
    const Image orig = random_image(8, 8, rng);
    const Image gen = random_image(8, 8, rng);
    const BinaryMask m = random_mask(8, 8, 0.6, rng);
    const double score = 0.37;

    LossWeights only_ctx{1.0, 0.0, 0.0};
    CHECK(combined_loss(orig, gen, m, score, only_ctx) ==
          doctest::Approx(contextual_loss(orig, gen, m)).epsilon(1e-12));

    LossWeights bad{0.0, 0.0, 0.0};
    CHECK_THROWS_AS(combined_loss(orig, gen, m, score, bad), ArgumentError);
    LossWeights negative{1.0, -0.1, 0.0};
    CHECK_THROWS_AS(combined_loss(orig, gen, m, score, negative), ArgumentError);

    // generated == original, score 0.5, w = (1,1,1) -> log(0.5)
    LossWeights unit{1.0, 1.0, 1.0};
    CHECK(combined_loss(orig, orig, m, 0.5, unit) == doctest::Approx(std::log(0.5)).epsilon(1e-12));

    // linear in the weights
    LossWeights w1{0.7, 0.2, 0.4};
    LossWeights w2{1.4, 0.4, 0.8};
    CHECK(combined_loss(orig, gen, m, score, w2) ==
          doctest::Approx(2.0 * combined_loss(orig, gen, m, score, w1)).epsilon(1e-9));
}

TEST_CASE("all losses ignore hole-pixel values of the original") {
    Rng rng(4);
    const Image orig = random_image(8, 8, rng);
    const Image gen = random_image(8, 8, rng);
    const BinaryMask m = random_mask(8, 8, 0.5, rng);

    Image poked = orig;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            if (m.at(r, c) == 0) poked.at(r, c) = rng.uniform01();

    CHECK(contextual_loss(orig, gen, m) == contextual_loss(poked, gen, m));
    CHECK(gradient_diff_loss(orig, gen, m) == gradient_diff_loss(poked, gen, m));
    LossWeights w;
    CHECK(combined_loss(orig, gen, m, 0.4, w) == combined_loss(poked, gen, m, 0.4, w));
}

TEST_CASE("batched tape combined loss averages the per-image plain values") {
    Rng rng(5);
    const int batch = 3, hw = 8;
    std::vector<Image> origs, gens;
    std::vector<BinaryMask> masks;
    for (int i = 0; i < batch; ++i) {
        origs.push_back(random_image(hw, hw, rng));
        gens.push_back(random_image(hw, hw, rng));
        masks.push_back(random_mask(hw, hw, 0.6, rng));
    }
    Tensor ot = batch_tensor(origs);
    Tensor gt(Shape{batch, 1, hw, hw}), mt(Shape{batch, 1, hw, hw});
    Tensor st(Shape{batch, 1, 1, 1});
    std::vector<double> scores{0.2, 0.5, 0.8};
    for (int i = 0; i < batch; ++i) {
        std::copy_n(gens[i].pix.data(), gens[i].pix.size(), gt.ptr() + gt.idx(i, 0, 0, 0));
        const Tensor mi = masks[i].to_tensor();
        std::copy_n(mi.ptr(), mi.data.size(), mt.ptr() + mt.idx(i, 0, 0, 0));
        st[i] = scores[i];
    }

    LossWeights w{1.0, 0.3, 0.5};
    ad::Tape t;
    const double batched = t.scalar(combined_loss(t, t.input(gt), ot, mt, t.input(st), w));
    double mean = 0.0;
    for (int i = 0; i < batch; ++i) mean += combined_loss(origs[i], gens[i], masks[i], scores[i], w);
    mean /= batch;
    CHECK(batched == doctest::Approx(mean).epsilon(1e-12));
}
