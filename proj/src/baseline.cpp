#include "priorpaint/baseline.hpp"

#include <chrono>
#include <cmath>

#include "priorpaint/rng.hpp"

namespace priorpaint::baseline {

std::pair<Tensor, OptimTrace> optimize_z_core(const ZObjective& objective, int d, const OptimOptions& opt,
                                              std::uint64_t seed) {
    if (opt.iters < 1) throw ArgumentError("optimize_z: iters must be >= 1");
    if (opt.step < 0.0 || opt.momentum < 0.0 || opt.momentum >= 1.0)
        throw ArgumentError("optimize_z: bad step/momentum");

    const auto t0 = std::chrono::steady_clock::now();

    Rng rng(derive_seed(seed, "baseline.z0"));
    Tensor z(Shape{1, d, 1, 1});
    for (double& v : z.data) v = rng.uniform(-1.0, 1.0);
    Tensor velocity(z.shape);

    OptimTrace trace;
    trace.loss.reserve(static_cast<size_t>(opt.iters));
    trace.best_loss.reserve(static_cast<size_t>(opt.iters));
    double best = std::numeric_limits<double>::infinity();
    Tensor best_z = z;

    for (int it = 0; it < opt.iters; ++it) {
        ad::Tape t;
        ad::Var zv = t.input(z, true);
        ad::Var loss = objective(t, zv);
        const double value = t.scalar(loss);
        if (!std::isfinite(value)) throw TrainingDivergedError("optimize_z: non-finite loss", it);
        trace.loss.push_back(value);
        if (value < best) {
            best = value;
            best_z = z;
        }
        trace.best_loss.push_back(best);

        t.backward(loss);
        const Tensor& g = t.grad(zv);
        for (size_t k = 0; k < z.data.size(); ++k) {
            velocity[k] = opt.momentum * velocity[k] - opt.step * g[k];
            z[k] = std::clamp(z[k] + velocity[k], -1.0, 1.0);
        }
    }
    trace.iterations = opt.iters;
    trace.final_z = best_z;
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(best_z), std::move(trace)};
}

std::pair<Tensor, OptimTrace> optimize_z(const models::Generator& gen, const models::Discriminator& disc,
                                         const Image& original, const BinaryMask& mask, const PriorMap* prior,
                                         const OptimOptions& opt, std::uint64_t seed) {
    opt.weights.validate();
    if (original.h != mask.h || original.w != mask.w) throw ArgumentError("optimize_z: shape mismatch");

    const Tensor originals = to_tensor(original);
    const Tensor masks = mask.to_tensor();
    Tensor prior_t;
    if (prior) prior_t = to_tensor(*prior);
    const Tensor* c = prior ? &prior_t : nullptr;

    auto objective = [&](ad::Tape& t, ad::Var zv) {
        nn::TapeParams tp_g = nn::TapeParams::attach(t, gen.params, false);
        ad::Var fake = gen.forward(t, tp_g, zv, c);
        std::vector<std::pair<double, ad::Var>> terms;
        terms.emplace_back(opt.weights.lambda1,
                           t.masked_ctx_mean(fake, originals, masks, opt.ctx == CtxReduction::l2));
        if (opt.weights.lambda2 != 0.0) {
            nn::TapeParams tp_d = nn::TapeParams::attach(t, disc.params, false);
            ad::Var score = disc.forward(t, tp_d, fake, c);
            terms.emplace_back(opt.weights.lambda2, t.realism(score));
        }
        terms.emplace_back(opt.weights.lambda3, t.grad_diff(fake, originals, masks));
        return t.weighted_sum(terms);
    };
    return optimize_z_core(objective, gen.cfg.d, opt, seed);
}

std::pair<Image, OptimTrace> inpaint_iterative(const models::Generator& gen,
                                               const models::Discriminator& disc, const Image& original,
                                               const BinaryMask& mask, const PriorMap* prior,
                                               const OptimOptions& opt, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [z, trace] = optimize_z(gen, disc, original, mask, prior, opt, seed);
    const Image out = compose(original, mask, gan::generate(gen, z, prior));
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {out, std::move(trace)};
}

}  // namespace priorpaint::baseline
