#include <doctest.h>

#include "priorpaint/dataset.hpp"
#include "priorpaint/png_io.hpp"

#include <filesystem>
#include <fstream>

using namespace priorpaint;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

bool dirs_byte_identical(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> rel;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
    for (const auto& r : rel) {
        if (!fs::exists(b / r)) return false;
        if (slurp(a / r) != slurp(b / r)) return false;
    }
    size_t count_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) ++count_b;
    return count_b == rel.size();
}

}  // namespace

TEST_CASE("make_dataset: counts, determinism, value range, round trip") {
    const fs::path root = fs::temp_directory_path() / "priorpaint_ds_test";
    fs::remove_all(root);
    fs::remove_all(root.string() + "_b");

    data::DatasetSpec spec;
    spec.n_images = 8;
    spec.n_sequences = 2;
    spec.t_frames = 4;
    spec.h = spec.w = 32;
    spec.seed = 0;

    data::make_dataset(root, spec);

    // count contract
    size_t image_files = 0, seq_frames = 0, kp_files = 0;
    for (const auto& e : fs::directory_iterator(root / "images")) ++image_files, (void)e;
    for (const auto& e : fs::recursive_directory_iterator(root / "sequences"))
        if (e.is_regular_file()) ++seq_frames;
    for (const auto& e : fs::directory_iterator(root / "keypoints")) ++kp_files, (void)e;
    CHECK(image_files == 8);
    CHECK(seq_frames == 2 * 4);
    CHECK(kp_files == 8 + 2);

    // byte-identical rerun
    data::make_dataset(root.string() + "_b", spec);
    CHECK(dirs_byte_identical(root, root.string() + "_b"));

    // decode: all pixel values in [0,1]; loader agrees with generator up to quantisation
    const data::Dataset ds = data::load_dataset(root);
    REQUIRE(ds.images.size() == 8);
    REQUIRE(ds.sequences.size() == 2);
    for (const auto& im : ds.images)
        for (double v : im.pix) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    const data::Dataset mem = data::generate_dataset(spec);
    for (size_t i = 0; i < ds.images.size(); ++i) {
        CHECK(max_abs_diff(ds.images[i], mem.images[i]) <= 0.5 / 255.0 + 1e-12);
        CHECK(ds.image_keypoints[i].points.size() == 5);
    }

    // refuses to overwrite
    CHECK_THROWS_AS(data::make_dataset(root, spec), IoError);

    // invalid counts: error, no partial writes
    const fs::path bad = fs::temp_directory_path() / "priorpaint_ds_bad";
    fs::remove_all(bad);
    data::DatasetSpec invalid = spec;
    invalid.n_images = 0;
    invalid.n_sequences = 0;
    CHECK_THROWS_AS(data::make_dataset(bad, invalid), ArgumentError);
    CHECK(!fs::exists(bad));
    CHECK(!fs::exists(bad.string() + ".tmp"));

    // prior maps render at the manifest sigma
    const auto priors = ds.image_priors();
    REQUIRE(priors.size() == 8);
    for (const auto& p : priors) {
        double peak = 0.0;
        for (double v : p.pix) peak = std::max(peak, v);
        CHECK(peak == 1.0);
    }

    fs::remove_all(root);
    fs::remove_all(root.string() + "_b");
}
