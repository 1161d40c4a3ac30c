#pragma once

#include <cstdint>
#include <optional>

#include "advreg/encoder.hpp"
#include "advreg/matrix.hpp"
#include "advreg/numcore.hpp"

// Piecewise-CNN classifier: convolution over the input matrix, three-segment
// max pooling, tanh, one fully connected layer, softmax.
namespace advreg::pcnn {

struct ModelParams {
    Matrix convFilters;  // F x (window * D)
    Vector convBias;     // F
    Matrix fcW;          // C x 3F
    Vector fcB;          // C
    std::size_t window = 3;

    std::size_t filters() const { return convFilters.rows(); }
    std::size_t input_dim() const { return window ? convFilters.cols() / window : 0; }
    std::size_t classes() const { return fcW.rows(); }
};

// Weights uniform on +-sqrt(6/(fanIn+fanOut)), biases zero; bit-identical
// parameters for identical seeds.
ModelParams init_params(std::size_t filters, std::size_t window, std::size_t inputDim,
                        std::uint64_t seed, std::size_t classes = 2);

struct ForwardCache {
    Matrix inputSlice;  // the rows the convolution actually saw (perturbation included)
    std::size_t sliceLen = 0;
    std::size_t validLen = 0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    numcore::PoolResult pool;
    Vector activated;  // tanh of the pooled vector
    Vector logits;
};

struct ParamGrads {
    Matrix dConvFilters;
    Vector dConvBias;
    Matrix dFcW;
    Vector dFcB;

    void init(const ModelParams& p);
    void zero();
};

// logits = fc(tanh(segment_max_pool(conv1d(x.x + r)))). Only the rows that can
// influence the pooled segments are convolved; padding rows beyond that are
// zero and pooled segments never reach them. `perturbation`, when given, must
// be shaped like x.x.
Vector forward(const encoder::EncodedInstance& x, const ModelParams& p, ForwardCache& cache,
               const Matrix* perturbation = nullptr);

// Exact gradients through fc, tanh, pooling routing and convolution.
// Adds scale * parameter gradients into *pg and scale * the raw input
// gradient into *dInput (either sink may be null). The raw input gradient is
// nonzero only on rows < validLen + window/2.
void backward(const encoder::EncodedInstance& x, const ModelParams& p, const ForwardCache& cache,
              const Vector& dLogits, double scale, ParamGrads* pg, Matrix* dInput);

// Input gradient with the instance mask applied: zero at padded rows and at
// columns outside the perturbation scope.
Matrix input_gradient(const encoder::EncodedInstance& x, const ModelParams& p,
                      const ForwardCache& cache, const Vector& dLogits);

// softmax(forward(x)); sums to 1 within 1e-9.
Vector predict(const encoder::EncodedInstance& x, const ModelParams& p);

}  // namespace advreg::pcnn
