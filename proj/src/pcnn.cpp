#include "advreg/pcnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "advreg/random.hpp"

namespace advreg::pcnn {

namespace {

// Rows whose convolution output can differ from the bias, or whose input
// gradient can be nonzero: the valid tokens plus a half-window margin.
std::size_t slice_length(std::size_t L, std::size_t validLen, std::size_t window) {
    const std::size_t half = window / 2;
    return std::min(L, std::max(validLen + half, window));
}

}  // namespace

ModelParams init_params(std::size_t filters, std::size_t window, std::size_t inputDim,
                        std::uint64_t seed, std::size_t classes) {
    if (filters == 0 || inputDim == 0 || classes < 2) throw ConfigError("init_params: bad sizes");
    if (window == 0 || window % 2 == 0) throw ConfigError("init_params: window must be odd");
    RandomSource rng(seed);
    ModelParams p;
    p.window = window;
    const std::size_t wd = window * inputDim;
    const double convBound = std::sqrt(6.0 / static_cast<double>(wd + filters));
    p.convFilters = Matrix(filters, wd);
    for (double& v : p.convFilters.data()) v = rng.uniform(-convBound, convBound);
    p.convBias.assign(filters, 0.0);
    const double fcBound = std::sqrt(6.0 / static_cast<double>(3 * filters + classes));
    p.fcW = Matrix(classes, 3 * filters);
    for (double& v : p.fcW.data()) v = rng.uniform(-fcBound, fcBound);
    p.fcB.assign(classes, 0.0);
    return p;
}

void ParamGrads::init(const ModelParams& p) {
    dConvFilters = Matrix(p.convFilters.rows(), p.convFilters.cols());
    dConvBias.assign(p.convBias.size(), 0.0);
    dFcW = Matrix(p.fcW.rows(), p.fcW.cols());
    dFcB.assign(p.fcB.size(), 0.0);
}

void ParamGrads::zero() {
    dConvFilters.fill(0.0);
    std::fill(dConvBias.begin(), dConvBias.end(), 0.0);
    dFcW.fill(0.0);
    std::fill(dFcB.begin(), dFcB.end(), 0.0);
}

Vector forward(const encoder::EncodedInstance& x, const ModelParams& p, ForwardCache& cache,
               const Matrix* perturbation) {
    if (x.x.cols() != p.input_dim()) throw DimensionError("forward: input dimension mismatch");
    if (x.validLen == 0) throw DimensionError("forward: empty instance");
    if (perturbation && !perturbation->same_shape(x.x))
        throw DimensionError("forward: perturbation shape mismatch");

    const std::size_t D = x.x.cols();
    const std::size_t sliceLen = slice_length(x.x.rows(), x.validLen, p.window);
    cache.sliceLen = sliceLen;
    cache.validLen = x.validLen;
    cache.s1 = x.s1;
    cache.s2 = x.s2;
    if (cache.inputSlice.rows() != sliceLen || cache.inputSlice.cols() != D)
        cache.inputSlice = Matrix(sliceLen, D);
    std::memcpy(cache.inputSlice.data().data(), x.x.data().data(),
                sliceLen * D * sizeof(double));
    if (perturbation)
        for (std::size_t i = 0; i < sliceLen * D; ++i)
            cache.inputSlice.data()[i] += perturbation->data()[i];

    const Matrix featmap = numcore::conv1d_forward(cache.inputSlice, p.convFilters, p.convBias);
    cache.pool = numcore::segment_max_pool(featmap, x.s1, x.s2, x.validLen);
    cache.activated = numcore::tanh_forward(cache.pool.pooled);
    cache.logits = numcore::affine_forward(cache.activated, p.fcW, p.fcB);
    return cache.logits;
}

void backward(const encoder::EncodedInstance& x, const ModelParams& p, const ForwardCache& cache,
              const Vector& dLogits, double scale, ParamGrads* pg, Matrix* dInput) {
    if (dLogits.size() != p.classes()) throw DimensionError("backward: dLogits size mismatch");
    if (cache.activated.size() != 3 * p.filters() || cache.inputSlice.cols() != p.input_dim())
        throw DimensionError("backward: cache does not match parameters");
    if (cache.validLen != x.validLen || cache.s1 != x.s1)
        throw DimensionError("backward: cache does not match instance");

    const auto fc = numcore::affine_backward(cache.activated, p.fcW, dLogits);
    const Vector dPooled = numcore::tanh_backward(cache.activated, fc.dX);
    const Matrix dFeatmap = numcore::segment_max_pool_backward(cache.pool.argmax, dPooled,
                                                               cache.sliceLen, p.filters());
    const auto conv = numcore::conv1d_backward(cache.inputSlice, p.convFilters, dFeatmap);

    if (pg) {
        add_scaled(pg->dFcW, fc.dW, scale);
        add_scaled(pg->dFcB, fc.dB, scale);
        add_scaled(pg->dConvFilters, conv.dFilters, scale);
        add_scaled(pg->dConvBias, conv.dBias, scale);
    }
    if (dInput) {
        if (!dInput->same_shape(x.x)) throw DimensionError("backward: dInput shape mismatch");
        const std::size_t n = cache.sliceLen * x.x.cols();
        for (std::size_t i = 0; i < n; ++i) dInput->data()[i] += scale * conv.dInput.data()[i];
    }
}

Matrix input_gradient(const encoder::EncodedInstance& x, const ModelParams& p,
                      const ForwardCache& cache, const Vector& dLogits) {
    Matrix g(x.x.rows(), x.x.cols());
    backward(x, p, cache, dLogits, 1.0, nullptr, &g);
    mask_inplace(g, x.mask);
    return g;
}

Vector predict(const encoder::EncodedInstance& x, const ModelParams& p) {
    ForwardCache cache;
    return numcore::softmax(forward(x, p, cache));
}

}  // namespace advreg::pcnn
