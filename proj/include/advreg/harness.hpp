#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "advreg/config.hpp"
#include "advreg/corpus.hpp"
#include "advreg/encoder.hpp"
#include "advreg/pcnn.hpp"

namespace advreg::harness {

// lr0 * decayRate^(step / decaySteps), real-valued exponent.
double lr_schedule(std::size_t step, const TrainConfig& cfg);

// Positive-class precision/recall/F with the 0-when-undefined convention.
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    static Metrics from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);
};

// Adam over flat parameter/gradient buffer pairs registered up front.
// Buffers must stay valid and fixed-size for the optimizer's lifetime.
class AdamOptimizer {
public:
    explicit AdamOptimizer(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void attach(Vector* param, const Vector* grad);
    void step(double lr);
    std::size_t steps() const { return t_; }
    double grad_norm() const;  // over all attached gradient buffers

private:
    struct Slot {
        Vector* p;
        const Vector* g;
        Vector m, v;
    };
    double beta1_, beta2_, eps_;
    std::size_t t_ = 0;
    std::vector<Slot> slots_;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double meanLoss = 0.0;
    std::optional<Metrics> heldout;
};

// Everything needed to encode and classify new instances.
struct TrainedModel {
    pcnn::ModelParams params;
    encoder::FeatureTables tables;
    corpus::EmbeddingTable embeddings;
    encoder::FeatureLayout layout;
    std::size_t maxLen = 100;
};

struct TrainResult {
    TrainedModel model;
    std::vector<EpochRecord> history;
    std::size_t skippedLabeled = 0;
    std::size_t skippedUnlabeled = 0;
};

// Mode-dispatched training loop. `unlabeled` feeds the VAT modes (vat_star
// synthesizes its pool from `labeled` and ignores the argument). `heldout`,
// when non-empty, is evaluated after every epoch into the history.
TrainResult train(std::span<const corpus::Instance> labeled,
                  std::span<const corpus::Instance> unlabeled,
                  const corpus::EmbeddingTable& embeddings, const TrainConfig& cfg,
                  std::span<const corpus::Instance> heldout = {});

// The unlabeled pool a training run would use; exposed for verification.
std::vector<corpus::Instance> build_unlabeled_pool(std::span<const corpus::Instance> labeled,
                                                   std::span<const corpus::Instance> unlabeled,
                                                   const TrainConfig& cfg);

Metrics evaluate(const TrainedModel& model, std::span<const corpus::Instance> testSet,
                 std::size_t* skipped = nullptr);

struct FoldRecord {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    Metrics metrics;
    std::size_t trainSkipped = 0;
    std::size_t testSkipped = 0;
};

struct CvResult {
    std::vector<FoldRecord> folds;     // repeat-major, fold-minor
    std::vector<Metrics> perRepeat;    // micro-averaged over pooled fold confusions
    Metrics aggregate;                 // arithmetic mean of per-repeat P/R/F; counts summed
    std::size_t foldsK = 0;
    std::size_t repeats = 0;
};

// Fold partition is seeded by cfg.seed only; repeat r trains with seed
// cfg.seed + r. Cells run in parallel when ADVREG_THREADS > 1 with identical
// results to the serial order.
CvResult cross_validate(std::span<const corpus::Instance> corpus,
                        std::span<const corpus::Instance> unlabeled,
                        const corpus::EmbeddingTable& embeddings, const TrainConfig& cfg,
                        std::size_t k = 10, std::size_t repeats = 3);

// Versioned JSON checkpoint of every parameter block, the feature tables and
// the fine-tuned embeddings.
void save_model(const std::string& path, const TrainedModel& model,
                const std::string& configHash);
TrainedModel load_model(const std::string& path, std::string* configHash = nullptr);

struct GradCheckRecord {
    std::string name;
    double maxRelError = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// The finite-difference suite behind the `gradcheck` CLI subcommand: layer
// and whole-model gradients on reduced configurations.
std::vector<GradCheckRecord> gradcheck_suite(std::uint64_t seed = 20240901);

// Result-file builders; all fields except wall_clock_sec are deterministic
// functions of (seed, config, data).
nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json cv_result_to_json(const CvResult& cv, const TrainConfig& cfg, double wallSec);
nlohmann::json train_result_to_json(const TrainResult& res, const TrainConfig& cfg,
                                    double wallSec);

std::size_t worker_threads();  // ADVREG_THREADS, default 1

}  // namespace advreg::harness
