#pragma once

#include <functional>
#include <span>

#include "advreg/adversarial.hpp"
#include "advreg/pcnn.hpp"
#include "advreg/random.hpp"

// Virtual adversarial training: KL-based local smoothness loss, power
// iteration approximation of the worst-case direction, and the
// semi-supervised combined objective.
namespace advreg::vat {

struct VatConfig {
    double epsEmbedding = 2.0;  // L2 budget for the word-embedding block
    double epsOther = 0.01;     // L2 budget for each remaining feature block
    double xi = 1e-6;
    std::size_t powerIters = 1;
    double lambda = 1.0;
    std::size_t unlabeledRatio = 1;  // |D_ul| = ratio * |D_l|
    std::size_t unlabeledBatch = 128;
    bool star = false;  // unlabeled pool = labeled instances, labels dropped

    void validate() const;
};

// One step of the normalized-gradient power method: d starts from d0
// (normalized; the result is invariant to positive rescaling of d0) and is
// repeatedly replaced by normalize(gradAt(xi * d)). gradAt must return the
// gradient of the KL surrogate with respect to the perturbation, already
// masked. Returns the zero matrix when the gradient degenerates.
Matrix power_iterate(const std::function<Matrix(const Matrix&)>& gradAt, Matrix d0, double xi,
                     std::size_t iters);

// Virtual adversarial perturbation: the power-method direction scaled
// blockwise, with the embedding block at epsEmbedding and every other
// unmasked feature block at epsOther (blocks with sub-norm < 1e-12 skipped).
adv::Perturbation vat_perturbation(const encoder::EncodedInstance& x,
                                   const pcnn::ModelParams& params, const VatConfig& cfg,
                                   RandomSource& rng);

// L_vadv = KL(p(x) || p(x + r_vadv)) with p(x) treated as a constant
// distribution: gradients flow only through the perturbed pass. Accumulates
// scale * gradients into the sinks and returns the (non-negative) loss.
double vat_loss(const encoder::EncodedInstance& x, const pcnn::ModelParams& params,
                const VatConfig& cfg, RandomSource& rng, double scale, pcnn::ParamGrads* pg,
                Matrix* dInput);

// Receives each instance's scaled raw input gradient so the caller can route
// it into the embedding and feature tables.
using InputGradSink =
    std::function<void(const encoder::EncodedInstance&, const Matrix& dInput)>;

// Mean labeled cross-entropy plus lambda * mean L_vadv over the unlabeled
// batch. lambda == 0 or an empty unlabeled batch reduces to the supervised
// step exactly (the VAT passes are skipped entirely).
double combined_vat_objective(std::span<const encoder::EncodedInstance> labeledBatch,
                              std::span<const encoder::EncodedInstance> unlabeledBatch,
                              const pcnn::ModelParams& params, const VatConfig& cfg,
                              RandomSource& rng, pcnn::ParamGrads* pg,
                              const InputGradSink& sink);

}  // namespace advreg::vat
