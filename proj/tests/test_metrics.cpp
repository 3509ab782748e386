#include <doctest.h>

#include "priorpaint/metrics.hpp"
#include "priorpaint/rng.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace priorpaint;
using namespace priorpaint::metrics;

namespace {

Image random_image(int h, int w, Rng& rng) {
    Image im(h, w);
    for (double& v : im.pix) v = rng.uniform01();
    return im;
}

}  // namespace

TEST_CASE("psnr: cap, exact dB values, symmetry") {
    Image a(4, 4, 0.3);
    CHECK(psnr(a, a) == 100.0);

    // MSE 1 at peak 1 -> 0 dB
    Image zero(4, 4, 0.0), one(4, 4, 1.0);
    CHECK(psnr(zero, one) == doctest::Approx(0.0).epsilon(1e-12));

    // MSE 0.01 -> 20 dB
    Image b(4, 4, 0.4);
    CHECK(psnr(a, b) == doctest::Approx(20.0).epsilon(1e-9));

    Rng rng(2);
    const Image x = random_image(8, 8, rng), y = random_image(8, 8, rng);
    CHECK(psnr(x, y) == psnr(y, x));
    CHECK(psnr(x, y) == doctest::Approx(oracles::psnr_direct(x, y)).epsilon(1e-12));

    Image wrong(4, 5, 0.0);
    CHECK_THROWS_AS(psnr(a, wrong), ArgumentError);

    // monotone: lower MSE => higher dB
    Image c(4, 4, 0.35);
    CHECK(psnr(a, c) > psnr(a, b));
}

TEST_CASE("temporal consistency: identical frames, single pair, permutation invariance, oracle") {
    Image a(4, 4, 0.5);
    std::vector<Image> same{a, a, a};
    CHECK(temporal_consistency(same) == 100.0);

    Image b(4, 4, 0.6);  // pairwise MSE = 0.01
    std::vector<Image> pair{a, b};
    CHECK(temporal_consistency(pair) == doctest::Approx(20.0).epsilon(1e-9));

    Rng rng(3);
    std::vector<Image> frames;
    for (int i = 0; i < 5; ++i) frames.push_back(random_image(8, 8, rng));
    const double base = temporal_consistency(frames);
    CHECK(base == doctest::Approx(oracles::pairwise_psnr_double_loop(frames)).epsilon(1e-12));

    std::vector<Image> shuffled = frames;
    std::swap(shuffled[0], shuffled[3]);
    std::swap(shuffled[1], shuffled[4]);
    CHECK(temporal_consistency(shuffled) == doctest::Approx(base).epsilon(1e-12));

    std::vector<Image> single{a};
    CHECK_THROWS_AS(temporal_consistency(single), ArgumentError);
}

TEST_CASE("hole-restricted consistency ignores shared kept pixels") {
    Rng rng(4);
    Image src = random_image(8, 8, rng);
    Image other = src;
    // differ only inside the first mask's hole
    BinaryMask m1(8, 8, 1), m2(8, 8, 1);
    for (int c = 0; c < 4; ++c) m1.at(0, c) = 0;
    for (int c = 0; c < 4; ++c) other.at(0, c) = 1.0 - src.at(0, c);
    std::vector<Image> frames{src, other};
    std::vector<BinaryMask> masks{m1, m2};
    const double hole = temporal_consistency_hole(frames, masks);
    const double full = temporal_consistency(frames);
    CHECK(hole < full);  // hole-only denominator removes agreeing pixels

    // no holes anywhere: capped
    BinaryMask ones(8, 8, 1);
    std::vector<BinaryMask> none{ones, ones};
    CHECK(temporal_consistency_hole(frames, none) == 100.0);
}

TEST_CASE("per_frame_psnr: identity, hand mean, single frame") {
    Rng rng(5);
    std::vector<Image> truth;
    for (int i = 0; i < 3; ++i) truth.push_back(random_image(8, 8, rng));
    CHECK(per_frame_psnr(truth, truth) == 100.0);

    // construct 20 dB and 30 dB frames against zero truth
    Image z(4, 4, 0.0);
    Image f20(4, 4, 0.1);                       // MSE 0.01 -> 20 dB
    Image f30(4, 4, std::sqrt(0.001));          // MSE 0.001 -> 30 dB
    std::vector<Image> rec{f20, f30}, gt{z, z};
    CHECK(per_frame_psnr(rec, gt) == doctest::Approx(25.0).epsilon(1e-9));

    std::vector<Image> one{f20}, gt1{z};
    CHECK(per_frame_psnr(one, gt1) == doctest::Approx(psnr(f20, z)).epsilon(1e-12));

    std::vector<Image> wrong{f20};
    CHECK_THROWS_AS(per_frame_psnr(wrong, gt), ArgumentError);
}
