#include "advreg/vat.hpp"

#include <cmath>

namespace advreg::vat {

namespace {

constexpr double kDegenerateNorm = 1e-12;

// Blockwise rescaling of a masked direction matrix: the embedding block gets
// epsEmbedding, every other block epsOther. Blocks whose sub-norm is
// degenerate are left untouched.
Matrix scale_blockwise(const Matrix& d, const encoder::FeatureLayout& layout, double epsEmb,
                       double epsOther) {
    Matrix r = d;
    const auto blocks = layout.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto [begin, end] = blocks[b];
        double norm = 0.0;
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t c = begin; c < end; ++c) norm += r(i, c) * r(i, c);
        norm = std::sqrt(norm);
        if (norm < kDegenerateNorm) continue;
        const double f = (b == 0 ? epsEmb : epsOther) / norm;
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t c = begin; c < end; ++c) r(i, c) *= f;
    }
    return r;
}

// p(x) with gradients detached; reused across the power iterations.
Vector constant_prediction(const encoder::EncodedInstance& x, const pcnn::ModelParams& params) {
    return pcnn::predict(x, params);
}

adv::Perturbation vat_perturbation_impl(const encoder::EncodedInstance& x,
                                        const pcnn::ModelParams& params, const VatConfig& cfg,
                                        RandomSource& rng, const Vector& p0) {
    Matrix d0(x.x.rows(), x.x.cols());
    for (std::size_t i = 0; i < d0.size(); ++i)
        if (x.mask.data()[i] != 0.0) d0.data()[i] = rng.normal();

    auto gradAt = [&](const Matrix& r) -> Matrix {
        pcnn::ForwardCache cache;
        const Vector qLogits = pcnn::forward(x, params, cache, &r);
        const auto kl = numcore::kl_divergence(p0, qLogits);
        return pcnn::input_gradient(x, params, cache, kl.dQLogits);
    };

    const Matrix d = power_iterate(gradAt, std::move(d0), cfg.xi, cfg.powerIters);
    if (l2_norm(d) < kDegenerateNorm) return adv::Perturbation{Matrix(x.x.rows(), x.x.cols())};
    return adv::Perturbation{scale_blockwise(d, x.layout, cfg.epsEmbedding, cfg.epsOther)};
}

}  // namespace

void VatConfig::validate() const {
    if (epsEmbedding <= 0.0 || epsOther <= 0.0) throw ConfigError("vat epsilons must be positive");
    if (xi <= 0.0) throw ConfigError("vat.xi must be positive");
    if (powerIters < 1) throw ConfigError("vat.power_iters must be at least 1");
    if (lambda < 0.0) throw ConfigError("vat.lambda must be non-negative");
    if (unlabeledRatio < 1) throw ConfigError("vat.unlabeled_ratio must be at least 1");
    if (unlabeledBatch < 1) throw ConfigError("vat.unlabeled_batch must be at least 1");
}

Matrix power_iterate(const std::function<Matrix(const Matrix&)>& gradAt, Matrix d0, double xi,
                     std::size_t iters) {
    const double n0 = l2_norm(d0);
    if (n0 < kDegenerateNorm) return Matrix(d0.rows(), d0.cols());
    scale_inplace(d0, 1.0 / n0);
    Matrix d = std::move(d0);
    for (std::size_t it = 0; it < iters; ++it) {
        Matrix probe = d;
        scale_inplace(probe, xi);
        Matrix g = gradAt(probe);
        const double n = l2_norm(g);
        if (n < kDegenerateNorm) return Matrix(d.rows(), d.cols());
        scale_inplace(g, 1.0 / n);
        d = std::move(g);
    }
    return d;
}

adv::Perturbation vat_perturbation(const encoder::EncodedInstance& x,
                                   const pcnn::ModelParams& params, const VatConfig& cfg,
                                   RandomSource& rng) {
    return vat_perturbation_impl(x, params, cfg, rng, constant_prediction(x, params));
}

double vat_loss(const encoder::EncodedInstance& x, const pcnn::ModelParams& params,
                const VatConfig& cfg, RandomSource& rng, double scale, pcnn::ParamGrads* pg,
                Matrix* dInput) {
    const Vector p0 = constant_prediction(x, params);
    const adv::Perturbation r = vat_perturbation_impl(x, params, cfg, rng, p0);
    if (l2_norm(r.r) < kDegenerateNorm) return 0.0;  // KL(p0 || p0) vanishes exactly

    pcnn::ForwardCache cache;
    const Vector qLogits = pcnn::forward(x, params, cache, &r.r);
    const auto kl = numcore::kl_divergence(p0, qLogits);
    pcnn::backward(x, params, cache, kl.dQLogits, scale, pg, dInput);
    return kl.kl;
}

double combined_vat_objective(std::span<const encoder::EncodedInstance> labeledBatch,
                              std::span<const encoder::EncodedInstance> unlabeledBatch,
                              const pcnn::ModelParams& params, const VatConfig& cfg,
                              RandomSource& rng, pcnn::ParamGrads* pg,
                              const InputGradSink& sink) {
    if (labeledBatch.empty()) throw ValueError("combined_vat_objective: empty labeled batch");
    const double wl = 1.0 / static_cast<double>(labeledBatch.size());
    double total = 0.0;
    Matrix scratch;
    for (const auto& x : labeledBatch) {
        if (!x.label) throw ValueError("combined_vat_objective: unlabeled instance in labeled batch");
        pcnn::ForwardCache cache;
        const Vector logits = pcnn::forward(x, params, cache);
        const auto sm = numcore::softmax_cross_entropy(logits, static_cast<std::size_t>(*x.label));
        scratch = Matrix(x.x.rows(), x.x.cols());
        pcnn::backward(x, params, cache, sm.dLogits, wl, pg, sink ? &scratch : nullptr);
        if (sink) sink(x, scratch);
        total += wl * sm.loss;
    }
    if (cfg.lambda == 0.0 || unlabeledBatch.empty()) return total;

    const double wu = cfg.lambda / static_cast<double>(unlabeledBatch.size());
    for (const auto& x : unlabeledBatch) {
        scratch = Matrix(x.x.rows(), x.x.cols());
        const double kl = vat_loss(x, params, cfg, rng, wu, pg, sink ? &scratch : nullptr);
        if (sink) sink(x, scratch);
        total += wu * kl;
    }
    return total;
}

}  // namespace advreg::vat
