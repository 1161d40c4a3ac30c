#pragma once

#include <vector>

#include "advreg/pcnn.hpp"
#include "advreg/random.hpp"

// Supervised adversarial training: fast-gradient-method perturbations, the
// multi-adversarial-example set, and the combined labeled loss.
namespace advreg::adv {

struct AdvConfig {
    double epsilon = 0.01;
    encoder::PerturbScope scope = encoder::PerturbScope::Embedding;
    std::size_t M = 1;         // number of adversarial examples per instance
    double jitterRatio = 0.1;  // |e_i| = jitterRatio * epsilon for i >= 1
    double alpha = 1.0;

    // epsilon == 0 is allowed as a degenerate case: it yields the zero
    // perturbation, which the trainer equivalence checks rely on.
    void validate() const;
};

// A perturbation shaped like the input matrix; zero at masked positions and
// norm-bounded over the unmasked ones.
struct Perturbation {
    Matrix r;
};

// g scaled to L2 norm eps; the zero matrix when |g| < 1e-12.
Matrix scale_to_norm(const Matrix& g, double eps);

// r_adv = epsilon * g / |g| with g the masked input gradient of the
// cross-entropy loss at (x, label). Model gradients from this pass are
// discarded. A flat loss surface (|g| < 1e-12) gives the zero perturbation.
Perturbation fgm_perturbation(const encoder::EncodedInstance& x, int label,
                              const pcnn::ModelParams& params, const AdvConfig& cfg);

// {r_adv + e_i} with e_0 = 0; for i >= 1, e_i is an isotropic random
// direction over the unmasked entries scaled to |e_i| = jitterRatio*epsilon,
// and every element is re-masked after the addition.
std::vector<Perturbation> multi_adv_set(const Perturbation& rAdv, const Matrix& mask,
                                        const AdvConfig& cfg, RandomSource& rng);

// Combined labeled loss: L(x,y) + alpha * sum over the adversarial set of
// L(x+r_i,y). Parameter gradients and the raw input gradient accumulate into
// the sinks scaled by `scale`; perturbations are treated as constants. With
// M = 0 this is numerically identical to the plain supervised loss.
double adversarial_loss(const encoder::EncodedInstance& x, int label,
                        const pcnn::ModelParams& params, const AdvConfig& cfg, RandomSource& rng,
                        double scale, pcnn::ParamGrads* pg, Matrix* dInput);

}  // namespace advreg::adv
