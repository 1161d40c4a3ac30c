#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "advreg/matrix.hpp"

// Deterministic forward/backward primitives for every layer the model needs.
// All operations are pure functions of their arguments; accumulation order is
// fixed so repeated runs are bit-identical.
namespace advreg::numcore {

// out = W * x + b, with W of shape m x n.
Vector affine_forward(const Vector& x, const Matrix& W, const Vector& b);

struct AffineGrads {
    Vector dX;   // n
    Matrix dW;   // m x n
    Vector dB;   // m
};
AffineGrads affine_backward(const Vector& x, const Matrix& W, const Vector& dOut);

// 1-D convolution over the rows of `input` (L x D). Filter f is the row
// filters[f], laid out as w contiguous D-blocks where w =
// filters.cols()/input.cols() and must be odd. Output position i covers input
// rows [i - w/2, i + w/2]; rows outside the matrix count as zero, so out[i]
// stays aligned with token i.
Matrix conv1d_forward(const Matrix& input, const Matrix& filters, const Vector& bias);

struct Conv1dGrads {
    Matrix dInput;
    Matrix dFilters;
    Vector dBias;
};
Conv1dGrads conv1d_backward(const Matrix& input, const Matrix& filters, const Matrix& dOut);

struct PoolResult {
    Vector pooled;                       // 3F, segment-major
    std::vector<std::ptrdiff_t> argmax;  // 3F row indices; -1 marks an empty segment
};

// Column-wise max over the three row ranges [0,s1], (s1,s2], (s2,validLen).
// Empty segments pool to 0 with argmax -1; rows >= validLen never
// participate. Ties break toward the lowest row index.
PoolResult segment_max_pool(const Matrix& featmap, std::size_t s1, std::size_t s2,
                            std::size_t validLen);

Matrix segment_max_pool_backward(const std::vector<std::ptrdiff_t>& argmax,
                                 const Vector& dPooled, std::size_t L, std::size_t F);

Vector tanh_forward(const Vector& v);
// `activated` is the tanh output of the matching forward call.
Vector tanh_backward(const Vector& activated, const Vector& dOut);

Vector softmax(const Vector& logits);

struct SoftmaxLoss {
    double loss;
    Vector p;
    Vector dLogits;  // p - onehot(label)
};
// Numerically stabilized (max subtraction); loss = -ln p[label].
SoftmaxLoss softmax_cross_entropy(const Vector& logits, std::size_t label);

struct KlResult {
    double kl;
    Vector dQLogits;  // q - p; no gradient flows into p
};
// KL(p || softmax(qLogits)) with p treated as a constant distribution and the
// convention 0*ln 0 = 0.
KlResult kl_divergence(const Vector& p, const Vector& qLogits);

// Max over entries of |analytic - numeric| / max(1e-8, |analytic| + |numeric|),
// where numeric is the central finite difference of `fn` at `x` with step h.
double grad_check(const std::function<double(const Matrix&)>& fn, Matrix x,
                  const Matrix& analytic, double h = 1e-5);

}  // namespace advreg::numcore
