// Benchmark of the OpenMP kernels against the serial reference: times both
// backends on the shapes the models actually use, verifies bit-identical
// results, and prints a speedup table.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "priorpaint/kernels.hpp"
#include "priorpaint/models.hpp"
#include "priorpaint/rng.hpp"

using namespace priorpaint;
using Clock = std::chrono::steady_clock;

namespace {

Tensor random_tensor(Shape s, Rng& rng) {
    Tensor t(s);
    for (double& v : t.data) v = rng.normal(0.0, 1.0);
    return t;
}

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warmup
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

struct Row {
    std::string name;
    double serial_ms;
    double omp_ms;
    bool identical;
};

void print_table(const std::vector<Row>& rows) {
    std::printf("%-34s %12s %12s %9s %6s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup", "equal");
    for (const auto& r : rows)
        std::printf("%-34s %12.3f %12.3f %8.2fx %6s\n", r.name.c_str(), r.serial_ms * 1e3, r.omp_ms * 1e3,
                    r.serial_ms / r.omp_ms, r.identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 20;
    Rng rng(1);
    std::vector<Row> rows;

    auto bench = [&](const std::string& name, const std::function<void()>& fn,
                     const std::function<std::vector<double>()>& result) {
        kernels::set_backend(kernels::Backend::serial);
        const double ts = time_of(fn, reps);
        const std::vector<double> serial_out = result();
        kernels::set_backend(kernels::Backend::openmp);
        const double to = time_of(fn, reps);
        const std::vector<double> omp_out = result();
        rows.push_back({name, ts, to, serial_out == omp_out});
    };

    // conv2d on the batch-16 training shapes
    {
        Tensor x = random_tensor(Shape{16, 12, 32, 32}, rng);
        Tensor w = random_tensor(Shape{6, 12, 3, 3}, rng);
        Tensor b = random_tensor(Shape{1, 6, 1, 1}, rng);
        auto y = std::make_shared<Tensor>(Shape{16, 6, 32, 32});
        bench("conv2d fwd 16x12x32x32 -> 6ch", [=] { kernels::conv2d_forward(x, w, b, 1, 1, *y); },
              [=] { return y->data; });

        Tensor dy = random_tensor(Shape{16, 6, 32, 32}, rng);
        auto dx = std::make_shared<Tensor>(x.shape);
        bench("conv2d bwd-input (same shape)",
              [=] {
                  dx->fill(0.0);
                  kernels::conv2d_backward_input(w, dy, 1, 1, *dx);
              },
              [=] { return dx->data; });

        auto dw = std::make_shared<Tensor>(w.shape);
        auto db = std::make_shared<Tensor>(b.shape);
        bench("conv2d bwd-params (same shape)",
              [=] {
                  dw->fill(0.0);
                  db->fill(0.0);
                  kernels::conv2d_backward_params(x, dy, 1, 1, *dw, *db);
              },
              [=] { return dw->data; });
    }

    // strided conv (discriminator stage)
    {
        Tensor x = random_tensor(Shape{16, 10, 32, 32}, rng);
        Tensor w = random_tensor(Shape{14, 10, 3, 3}, rng);
        Tensor b = random_tensor(Shape{1, 14, 1, 1}, rng);
        auto y = std::make_shared<Tensor>(Shape{16, 14, 16, 16});
        bench("conv2d fwd stride-2 32 -> 16", [=] { kernels::conv2d_forward(x, w, b, 2, 1, *y); },
              [=] { return y->data; });
    }

    // dense head
    {
        Tensor x = random_tensor(Shape{16, 112, 1, 1}, rng);
        Tensor w = random_tensor(Shape{64, 112, 1, 1}, rng);
        Tensor b = random_tensor(Shape{1, 64, 1, 1}, rng);
        auto y = std::make_shared<Tensor>(Shape{16, 64, 1, 1});
        bench("dense fwd 16x112 -> 64", [=] { kernels::dense_forward(x, w, b, *y); },
              [=] { return y->data; });
    }

    // whole generator forward, batch 16
    {
        models::GeneratorConfig gc;
        gc.d = 64;
        gc.img = 32;
        auto g = std::make_shared<models::Generator>(models::Generator::init(gc, 3));
        Tensor z = random_tensor(Shape{16, 64, 1, 1}, rng);
        auto out = std::make_shared<Tensor>();
        bench("generator fwd batch 16 @32x32", [=] { *out = g->forward(z, nullptr); },
              [=] { return out->data; });
    }

    print_table(rows);
    std::printf("\nthreads: %d, reps per timing: %d\n", kernels::max_threads(), reps);
    bool all_equal = true;
    for (const auto& r : rows) all_equal = all_equal && r.identical;
    return all_equal ? 0 : 1;
}
