#include "advreg/adversarial.hpp"

namespace advreg::adv {

namespace {
constexpr double kDegenerateNorm = 1e-12;
}

void AdvConfig::validate() const {
    if (epsilon < 0.0) throw ConfigError("adv.epsilon must be non-negative");
    if (jitterRatio <= 0.0 || jitterRatio >= 1.0)
        throw ConfigError("adv.jitter_ratio must lie in (0, 1)");
    if (alpha < 0.0) throw ConfigError("adv.alpha must be non-negative");
}

Matrix scale_to_norm(const Matrix& g, double eps) {
    const double n = l2_norm(g);
    Matrix r(g.rows(), g.cols());
    if (n < kDegenerateNorm) return r;
    const double f = eps / n;
    for (std::size_t i = 0; i < g.size(); ++i) r.data()[i] = f * g.data()[i];
    return r;
}

Perturbation fgm_perturbation(const encoder::EncodedInstance& x, int label,
                              const pcnn::ModelParams& params, const AdvConfig& cfg) {
    pcnn::ForwardCache cache;
    const Vector logits = pcnn::forward(x, params, cache);
    const auto sm = numcore::softmax_cross_entropy(logits, static_cast<std::size_t>(label));
    const Matrix g = pcnn::input_gradient(x, params, cache, sm.dLogits);
    return Perturbation{scale_to_norm(g, cfg.epsilon)};
}

std::vector<Perturbation> multi_adv_set(const Perturbation& rAdv, const Matrix& mask,
                                        const AdvConfig& cfg, RandomSource& rng) {
    if (cfg.M < 1) throw ValueError("multi_adv_set: M must be at least 1");
    if (!rAdv.r.same_shape(mask)) throw DimensionError("multi_adv_set: mask shape mismatch");
    std::vector<Perturbation> set;
    set.reserve(cfg.M);
    set.push_back(rAdv);  // e_0 = 0
    for (std::size_t i = 1; i < cfg.M; ++i) {
        Matrix e(mask.rows(), mask.cols());
        for (std::size_t j = 0; j < mask.size(); ++j)
            if (mask.data()[j] != 0.0) e.data()[j] = rng.normal();
        e = scale_to_norm(e, cfg.jitterRatio * cfg.epsilon);
        Matrix r = rAdv.r;
        add_scaled(r, e, 1.0);
        mask_inplace(r, mask);
        set.push_back(Perturbation{std::move(r)});
    }
    return set;
}

double adversarial_loss(const encoder::EncodedInstance& x, int label,
                        const pcnn::ModelParams& params, const AdvConfig& cfg, RandomSource& rng,
                        double scale, pcnn::ParamGrads* pg, Matrix* dInput) {
    pcnn::ForwardCache cache;
    const Vector logits = pcnn::forward(x, params, cache);
    const auto sm = numcore::softmax_cross_entropy(logits, static_cast<std::size_t>(label));

    // The clean pass doubles as the perturbation-generation pass: r_adv only
    // needs the gradient direction, which scaling does not change.
    Matrix raw(x.x.rows(), x.x.cols());
    pcnn::backward(x, params, cache, sm.dLogits, scale, pg, &raw);
    if (dInput) add_scaled(*dInput, raw, 1.0);
    double loss = sm.loss;

    if (cfg.M >= 1) {
        mask_inplace(raw, x.mask);
        const Perturbation rAdv{scale_to_norm(raw, cfg.epsilon)};
        const auto advSet = multi_adv_set(rAdv, x.mask, cfg, rng);
        for (const auto& r : advSet) {
            pcnn::ForwardCache advCache;
            const Vector advLogits = pcnn::forward(x, params, advCache, &r.r);
            const auto advSm =
                numcore::softmax_cross_entropy(advLogits, static_cast<std::size_t>(label));
            pcnn::backward(x, params, advCache, advSm.dLogits, scale * cfg.alpha, pg, dInput);
            loss += cfg.alpha * advSm.loss;
        }
    }
    return loss;
}

}  // namespace advreg::adv
