#include <string>

#include "advreg/adversarial.hpp"
#include "advreg/harness.hpp"
#include "advreg/random.hpp"

// The finite-difference suite behind the `gradcheck` CLI subcommand. Layer
// checks run at tight thresholds; whole-model checks run the reduced
// configuration (L=10, D=12, F=8) with architecture identical to full size.
namespace advreg::harness {

namespace {

encoder::FeatureLayout tiny_layout() {
    encoder::FeatureLayout lay;
    lay.embDim = 3;
    lay.posDim = 2;
    lay.depDim = 1;
    lay.distDim = 1;  // D = 3+2+1+1+1+4 = 12
    return lay;
}

encoder::EncodedInstance random_instance(RandomSource& rng, const encoder::FeatureLayout& lay,
                                         std::size_t L, encoder::PerturbScope scope) {
    encoder::EncodedInstance x;
    const std::size_t D = lay.totalDim();
    x.layout = lay;
    x.validLen = 4 + static_cast<std::size_t>(rng.below(L - 3));  // [4, L]
    x.s1 = static_cast<std::size_t>(rng.below(x.validLen - 1));
    x.s2 = x.s1 + 1 + static_cast<std::size_t>(rng.below(x.validLen - x.s1 - 1));
    x.label = static_cast<int>(rng.below(2));
    x.x = Matrix(L, D);
    x.mask = Matrix(L, D);
    const std::size_t maskEnd = scope == encoder::PerturbScope::All ? D : lay.posBegin();
    for (std::size_t i = 0; i < x.validLen; ++i) {
        for (std::size_t c = 0; c < D; ++c) x.x(i, c) = 0.5 * rng.normal();
        for (std::size_t c = 0; c < maskEnd; ++c) x.mask(i, c) = 1.0;
    }
    return x;
}

Matrix vec_as_matrix(const Vector& v) {
    Matrix m(1, v.size());
    m.data() = v;
    return m;
}

GradCheckRecord record(const std::string& name, double err, double threshold) {
    return GradCheckRecord{name, err, threshold, err < threshold};
}

}  // namespace

std::vector<GradCheckRecord> gradcheck_suite(std::uint64_t seed) {
    std::vector<GradCheckRecord> out;
    RandomSource rng(seed);

    // affine
    {
        const std::size_t m = 4, n = 6;
        Matrix W(m, n);
        for (double& v : W.data()) v = rng.normal();
        Vector x(n), b(m), dOut(m);
        for (double& v : x) v = rng.normal();
        for (double& v : b) v = rng.normal();
        for (double& v : dOut) v = rng.normal();
        const auto g = numcore::affine_backward(x, W, dOut);
        auto lossX = [&](const Matrix& xm) {
            Vector xv(xm.data());
            const Vector o = numcore::affine_forward(xv, W, b);
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += dOut[i] * o[i];
            return s;
        };
        out.push_back(record("affine_dx", numcore::grad_check(lossX, vec_as_matrix(x),
                                                              vec_as_matrix(g.dX)),
                             1e-6));
        auto lossW = [&](const Matrix& wm) {
            const Vector o = numcore::affine_forward(x, wm, b);
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += dOut[i] * o[i];
            return s;
        };
        out.push_back(record("affine_dw", numcore::grad_check(lossW, W, g.dW), 1e-6));
    }

    // conv1d
    {
        const std::size_t L = 7, D = 3, F = 4, w = 3;
        Matrix input(L, D), filters(F, w * D), dOut(L, F);
        for (double& v : input.data()) v = rng.normal();
        for (double& v : filters.data()) v = rng.normal();
        for (double& v : dOut.data()) v = rng.normal();
        Vector bias(F);
        for (double& v : bias) v = rng.normal();
        const auto g = numcore::conv1d_backward(input, filters, dOut);
        auto weighted = [&](const Matrix& fm) {
            double s = 0.0;
            for (std::size_t i = 0; i < fm.size(); ++i) s += dOut.data()[i] * fm.data()[i];
            return s;
        };
        auto lossIn = [&](const Matrix& in) {
            return weighted(numcore::conv1d_forward(in, filters, bias));
        };
        auto lossFilt = [&](const Matrix& f) {
            return weighted(numcore::conv1d_forward(input, f, bias));
        };
        out.push_back(record("conv_dinput", numcore::grad_check(lossIn, input, g.dInput), 1e-5));
        out.push_back(record("conv_dfilters", numcore::grad_check(lossFilt, filters, g.dFilters),
                             1e-5));
    }

    // piecewise max pooling (values spread out to stay away from ties)
    {
        const std::size_t L = 8, F = 3;
        Matrix fm(L, F);
        for (std::size_t i = 0; i < fm.size(); ++i)
            fm.data()[i] = static_cast<double>(i % 7) + 0.1 * rng.normal();
        const std::size_t s1 = 2, s2 = 5, validLen = 7;
        Vector dPooled(3 * F);
        for (double& v : dPooled) v = rng.normal();
        const auto pool = numcore::segment_max_pool(fm, s1, s2, validLen);
        const Matrix g = numcore::segment_max_pool_backward(pool.argmax, dPooled, L, F);
        auto loss = [&](const Matrix& m) {
            const auto p = numcore::segment_max_pool(m, s1, s2, validLen);
            double s = 0.0;
            for (std::size_t i = 0; i < p.pooled.size(); ++i) s += dPooled[i] * p.pooled[i];
            return s;
        };
        out.push_back(record("pool_dinput", numcore::grad_check(loss, fm, g), 1e-5));
    }

    // tanh
    {
        Vector v(9), dOut(9);
        for (double& x : v) x = rng.normal();
        for (double& x : dOut) x = rng.normal();
        const Vector act = numcore::tanh_forward(v);
        const Vector dIn = numcore::tanh_backward(act, dOut);
        auto loss = [&](const Matrix& m) {
            const Vector o = numcore::tanh_forward(m.data());
            double s = 0.0;
            for (std::size_t i = 0; i < o.size(); ++i) s += dOut[i] * o[i];
            return s;
        };
        out.push_back(record("tanh", numcore::grad_check(loss, vec_as_matrix(v),
                                                         vec_as_matrix(dIn)),
                             1e-7));
    }

    // softmax cross entropy
    {
        Vector logits(5);
        for (double& v : logits) v = rng.normal();
        const std::size_t label = 2;
        const auto sm = numcore::softmax_cross_entropy(logits, label);
        auto loss = [&](const Matrix& m) {
            return numcore::softmax_cross_entropy(m.data(), label).loss;
        };
        out.push_back(record("softmax_dlogits",
                             numcore::grad_check(loss, vec_as_matrix(logits),
                                                 vec_as_matrix(sm.dLogits)),
                             1e-6));
    }

    // KL divergence, q side
    {
        Vector pLogits(4), qLogits(4);
        for (double& v : pLogits) v = rng.normal();
        for (double& v : qLogits) v = rng.normal();
        const Vector p = numcore::softmax(pLogits);
        const auto kl = numcore::kl_divergence(p, qLogits);
        auto loss = [&](const Matrix& m) { return numcore::kl_divergence(p, m.data()).kl; };
        out.push_back(record("kl_dqlogits", numcore::grad_check(loss, vec_as_matrix(qLogits),
                                                                vec_as_matrix(kl.dQLogits)),
                             1e-6));
    }

    // whole model, reduced configuration
    const encoder::FeatureLayout lay = tiny_layout();
    const std::size_t L = 10, F = 8;
    for (std::size_t cfgIdx = 0; cfgIdx < 5; ++cfgIdx) {
        const auto x = random_instance(rng, lay, L, encoder::PerturbScope::All);
        const auto params = pcnn::init_params(F, 3, lay.totalDim(), rng.next_u64());
        const std::size_t label = static_cast<std::size_t>(*x.label);

        pcnn::ForwardCache cache;
        const Vector logits = pcnn::forward(x, params, cache);
        const auto sm = numcore::softmax_cross_entropy(logits, label);
        pcnn::ParamGrads pg;
        pg.init(params);
        Matrix dInput(x.x.rows(), x.x.cols());
        pcnn::backward(x, params, cache, sm.dLogits, 1.0, &pg, &dInput);

        auto lossAtX = [&](const Matrix& xm) {
            encoder::EncodedInstance probe = x;
            probe.x = xm;
            pcnn::ForwardCache c;
            return numcore::softmax_cross_entropy(pcnn::forward(probe, params, c), label).loss;
        };
        const std::string tag = "_cfg" + std::to_string(cfgIdx);
        out.push_back(record("model_input" + tag, numcore::grad_check(lossAtX, x.x, dInput), 1e-4));

        auto lossWithParams = [&](const pcnn::ModelParams& q) {
            pcnn::ForwardCache c;
            return numcore::softmax_cross_entropy(pcnn::forward(x, q, c), label).loss;
        };
        double worst = 0.0;
        {
            auto fn = [&](const Matrix& w) {
                pcnn::ModelParams q = params;
                q.convFilters = w;
                return lossWithParams(q);
            };
            worst = std::max(worst, numcore::grad_check(fn, params.convFilters, pg.dConvFilters));
        }
        {
            auto fn = [&](const Matrix& w) {
                pcnn::ModelParams q = params;
                q.convBias = w.data();
                return lossWithParams(q);
            };
            worst = std::max(worst, numcore::grad_check(fn, vec_as_matrix(params.convBias),
                                                        vec_as_matrix(pg.dConvBias)));
        }
        {
            auto fn = [&](const Matrix& w) {
                pcnn::ModelParams q = params;
                q.fcW = w;
                return lossWithParams(q);
            };
            worst = std::max(worst, numcore::grad_check(fn, params.fcW, pg.dFcW));
        }
        {
            auto fn = [&](const Matrix& w) {
                pcnn::ModelParams q = params;
                q.fcB = w.data();
                return lossWithParams(q);
            };
            worst = std::max(worst, numcore::grad_check(fn, vec_as_matrix(params.fcB),
                                                        vec_as_matrix(pg.dFcB)));
        }
        out.push_back(record("model_params" + tag, worst, 1e-4));
    }
    return out;
}

}  // namespace advreg::harness
