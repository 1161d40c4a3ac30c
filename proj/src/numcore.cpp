#include "advreg/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace advreg::numcore {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Window width implied by the filter bank; validated against the input.
std::size_t conv_window(const Matrix& input, const Matrix& filters) {
    const std::size_t D = input.cols();
    if (D == 0 || filters.cols() == 0 || filters.cols() % D != 0)
        throw DimensionError("conv1d: filter width is not a multiple of the input dimension");
    const std::size_t w = filters.cols() / D;
    if (w % 2 == 0) throw DimensionError("conv1d: window size must be odd");
    if (w > input.rows()) throw DimensionError("conv1d: window exceeds input length");
    return w;
}

}  // namespace

Vector affine_forward(const Vector& x, const Matrix& W, const Vector& b) {
    if (W.cols() != x.size()) throw DimensionError("affine_forward: W.cols != x.size");
    if (W.rows() != b.size()) throw DimensionError("affine_forward: W.rows != b.size");
    Vector out(W.rows());
    for (std::size_t r = 0; r < W.rows(); ++r) out[r] = b[r] + dot(W.row(r), x.data(), x.size());
    return out;
}

AffineGrads affine_backward(const Vector& x, const Matrix& W, const Vector& dOut) {
    if (W.cols() != x.size()) throw DimensionError("affine_backward: W.cols != x.size");
    if (W.rows() != dOut.size()) throw DimensionError("affine_backward: W.rows != dOut.size");
    AffineGrads g{Vector(x.size(), 0.0), Matrix(W.rows(), W.cols()), dOut};
    for (std::size_t r = 0; r < W.rows(); ++r) {
        const double d = dOut[r];
        const double* wr = W.row(r);
        double* dwr = g.dW.row(r);
        for (std::size_t c = 0; c < W.cols(); ++c) {
            g.dX[c] += wr[c] * d;
            dwr[c] = d * x[c];
        }
    }
    return g;
}

Matrix conv1d_forward(const Matrix& input, const Matrix& filters, const Vector& bias) {
    const std::size_t w = conv_window(input, filters);
    const std::size_t L = input.rows();
    const std::size_t D = input.cols();
    const std::size_t F = filters.rows();
    if (bias.size() != F) throw DimensionError("conv1d_forward: bias size != filter count");
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(w / 2);

    Matrix out(L, F);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t f = 0; f < F; ++f) {
            double acc = bias[f];
            for (std::size_t k = 0; k < w; ++k) {
                const std::ptrdiff_t j =
                    static_cast<std::ptrdiff_t>(i) + static_cast<std::ptrdiff_t>(k) - half;
                if (j < 0 || j >= static_cast<std::ptrdiff_t>(L)) continue;
                acc += dot(filters.row(f) + k * D, input.row(static_cast<std::size_t>(j)), D);
            }
            out(i, f) = acc;
        }
    }
    return out;
}

Conv1dGrads conv1d_backward(const Matrix& input, const Matrix& filters, const Matrix& dOut) {
    const std::size_t w = conv_window(input, filters);
    const std::size_t L = input.rows();
    const std::size_t D = input.cols();
    const std::size_t F = filters.rows();
    if (dOut.rows() != L || dOut.cols() != F)
        throw DimensionError("conv1d_backward: dOut shape mismatch");
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(w / 2);

    Conv1dGrads g{Matrix(L, D), Matrix(F, filters.cols()), Vector(F, 0.0)};
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t f = 0; f < F; ++f) {
            const double d = dOut(i, f);
            if (d == 0.0) continue;  // pooling routes only a few entries here
            g.dBias[f] += d;
            for (std::size_t k = 0; k < w; ++k) {
                const std::ptrdiff_t j =
                    static_cast<std::ptrdiff_t>(i) + static_cast<std::ptrdiff_t>(k) - half;
                if (j < 0 || j >= static_cast<std::ptrdiff_t>(L)) continue;
                const double* in = input.row(static_cast<std::size_t>(j));
                const double* fr = filters.row(f) + k * D;
                double* dfr = g.dFilters.row(f) + k * D;
                double* din = g.dInput.row(static_cast<std::size_t>(j));
                for (std::size_t c = 0; c < D; ++c) {
                    dfr[c] += d * in[c];
                    din[c] += d * fr[c];
                }
            }
        }
    }
    return g;
}

PoolResult segment_max_pool(const Matrix& featmap, std::size_t s1, std::size_t s2,
                            std::size_t validLen) {
    const std::size_t L = featmap.rows();
    const std::size_t F = featmap.cols();
    if (s1 > s2) throw DimensionError("segment_max_pool: s1 > s2");
    if (s2 > validLen) throw DimensionError("segment_max_pool: s2 > validLen");
    if (validLen > L) throw DimensionError("segment_max_pool: validLen > rows");

    // Half-open row ranges per segment, clipped to validLen.
    const std::size_t ends[3] = {std::min(s1 + 1, validLen), std::min(s2 + 1, validLen), validLen};
    PoolResult res{Vector(3 * F, 0.0), std::vector<std::ptrdiff_t>(3 * F, -1)};
    std::size_t begin = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t end = ends[k];
        for (std::size_t f = 0; f < F; ++f) {
            double best = -std::numeric_limits<double>::infinity();
            std::ptrdiff_t bestRow = -1;
            for (std::size_t r = begin; r < end; ++r) {
                if (featmap(r, f) > best) {
                    best = featmap(r, f);
                    bestRow = static_cast<std::ptrdiff_t>(r);
                }
            }
            if (bestRow >= 0) {
                res.pooled[k * F + f] = best;
                res.argmax[k * F + f] = bestRow;
            }
        }
        begin = end;
    }
    return res;
}

Matrix segment_max_pool_backward(const std::vector<std::ptrdiff_t>& argmax,
                                 const Vector& dPooled, std::size_t L, std::size_t F) {
    if (argmax.size() != 3 * F || dPooled.size() != 3 * F)
        throw DimensionError("segment_max_pool_backward: expected 3F entries");
    Matrix dFeatmap(L, F);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t f = 0; f < F; ++f) {
            const std::ptrdiff_t r = argmax[k * F + f];
            if (r < 0) continue;
            dFeatmap(static_cast<std::size_t>(r), f) += dPooled[k * F + f];
        }
    }
    return dFeatmap;
}

Vector tanh_forward(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

Vector tanh_backward(const Vector& activated, const Vector& dOut) {
    if (activated.size() != dOut.size()) throw DimensionError("tanh_backward: length mismatch");
    Vector dIn(dOut.size());
    for (std::size_t i = 0; i < dOut.size(); ++i)
        dIn[i] = dOut[i] * (1.0 - activated[i] * activated[i]);
    return dIn;
}

Vector softmax(const Vector& logits) {
    if (logits.empty()) throw DimensionError("softmax: empty logits");
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    Vector p(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

SoftmaxLoss softmax_cross_entropy(const Vector& logits, std::size_t label) {
    if (logits.size() < 2) throw DimensionError("softmax_cross_entropy: need at least 2 classes");
    if (label >= logits.size()) throw ValueError("softmax_cross_entropy: label out of range");
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - m);
    const double logZ = m + std::log(sum);

    SoftmaxLoss res;
    res.loss = logZ - logits[label];
    res.p.resize(logits.size());
    res.dLogits.resize(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        res.p[i] = std::exp(logits[i] - logZ);
        res.dLogits[i] = res.p[i];
    }
    res.dLogits[label] -= 1.0;
    return res;
}

KlResult kl_divergence(const Vector& p, const Vector& qLogits) {
    if (p.size() != qLogits.size()) throw DimensionError("kl_divergence: length mismatch");
    if (p.size() < 2) throw DimensionError("kl_divergence: need at least 2 classes");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v)) throw ValueError("kl_divergence: invalid distribution p");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-6) throw ValueError("kl_divergence: p does not sum to 1");

    const double m = *std::max_element(qLogits.begin(), qLogits.end());
    double z = 0.0;
    for (double v : qLogits) z += std::exp(v - m);
    const double logZ = m + std::log(z);

    KlResult res;
    res.kl = 0.0;
    res.dQLogits.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double logq = qLogits[i] - logZ;
        if (p[i] > 0.0) res.kl += p[i] * (std::log(p[i]) - logq);
        res.dQLogits[i] = std::exp(logq) - p[i];
    }
    res.kl = std::max(res.kl, 0.0);  // guard against -1e-17 style rounding
    return res;
}

double grad_check(const std::function<double(const Matrix&)>& fn, Matrix x,
                  const Matrix& analytic, double h) {
    if (!x.same_shape(analytic)) throw DimensionError("grad_check: shape mismatch");
    double maxRel = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x.data()[i];
        x.data()[i] = orig + h;
        const double fPlus = fn(x);
        x.data()[i] = orig - h;
        const double fMinus = fn(x);
        x.data()[i] = orig;
        const double numeric = (fPlus - fMinus) / (2.0 * h);
        const double a = analytic.data()[i];
        const double rel = std::fabs(a - numeric) / std::max(1e-8, std::fabs(a) + std::fabs(numeric));
        maxRel = std::max(maxRel, rel);
    }
    return maxRel;
}

}  // namespace advreg::numcore
