#include "advreg/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "advreg/adversarial.hpp"
#include "advreg/random.hpp"
#include "advreg/vat.hpp"

namespace advreg::harness {

using nlohmann::json;

namespace {

// Derived-stream tags; fixed so that run reproducibility survives refactors.
constexpr std::uint64_t kStreamTables = 1;
constexpr std::uint64_t kStreamInit = 2;
constexpr std::uint64_t kStreamShuffle = 3;
constexpr std::uint64_t kStreamStep = 4;
constexpr std::uint64_t kStreamPool = 5;
constexpr std::uint64_t kStreamUnlabeledOrder = 6;

void zero_rows(Matrix& m, std::size_t rowEnd) {
    rowEnd = std::min(rowEnd, m.rows());
    if (rowEnd) std::memset(m.data().data(), 0, rowEnd * m.cols() * sizeof(double));
}

// Scatter a raw input gradient back into the lookup-table gradients using the
// instance's row ids. The entity-type one-hot block is not trainable.
void route_input_grad(const encoder::EncodedInstance& x, const Matrix& dInput, Matrix& dEmb,
                      Matrix& dPos, Matrix& dDep, Matrix& dDist) {
    const auto& lay = x.layout;
    for (std::size_t i = 0; i < x.validLen; ++i) {
        const double* g = dInput.row(i);
        double* e = dEmb.row(x.tokenRows[i]);
        for (std::size_t c = 0; c < lay.embDim; ++c) e[c] += g[lay.embBegin() + c];
        double* p = dPos.row(x.posRows[i]);
        for (std::size_t c = 0; c < lay.posDim; ++c) p[c] += g[lay.posBegin() + c];
        double* d = dDep.row(x.depRows[i]);
        for (std::size_t c = 0; c < lay.depDim; ++c) d[c] += g[lay.depBegin() + c];
        double* d1 = dDist.row(x.dist1Rows[i]);
        for (std::size_t c = 0; c < lay.distDim; ++c) d1[c] += g[lay.dist1Begin() + c];
        double* d2 = dDist.row(x.dist2Rows[i]);
        for (std::size_t c = 0; c < lay.distDim; ++c) d2[c] += g[lay.dist2Begin() + c];
    }
}

Metrics evaluate_state(const pcnn::ModelParams& params, const encoder::FeatureTables& tables,
                       const corpus::EmbeddingTable& embeddings,
                       const encoder::FeatureLayout& layout, std::size_t maxLen,
                       std::span<const corpus::Instance> testSet, std::size_t* skipped) {
    if (testSet.empty()) throw ValueError("evaluate: empty test set");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0, skip = 0;
    encoder::EncodedInstance buf;
    for (const auto& inst : testSet) {
        if (!inst.label) throw ValueError("evaluate: instance without label");
        encoder::EncodedSkeleton sk;
        try {
            sk = encoder::prepare(inst, tables, embeddings, maxLen);
        } catch (const EncodeSkipError&) {
            ++skip;
            continue;
        }
        encoder::materialize_into(buf, sk, layout, tables, embeddings,
                                  encoder::PerturbScope::Embedding, maxLen);
        const Vector p = pcnn::predict(buf, params);
        const int pred = p[1] > p[0] ? 1 : 0;
        const int y = *inst.label;
        if (pred == 1 && y == 1) ++tp;
        else if (pred == 1 && y == 0) ++fp;
        else if (pred == 0 && y == 1) ++fn;
        else ++tn;
    }
    if (skipped) *skipped = skip;
    return Metrics::from_counts(tp, fp, fn, tn);
}

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<Vector>();
    if (data.size() != m.size()) throw ParseError("checkpoint: matrix payload size mismatch");
    m.data() = data;
    return m;
}

}  // namespace

double lr_schedule(std::size_t step, const TrainConfig& cfg) {
    return cfg.lr0 * std::pow(cfg.decayRate, static_cast<double>(step) / cfg.decaySteps);
}

Metrics Metrics::from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    m.tn = tn;
    m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.fscore = m.precision + m.recall > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    return m;
}

AdamOptimizer::AdamOptimizer(double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::attach(Vector* param, const Vector* grad) {
    if (!param || !grad || param->size() != grad->size())
        throw DimensionError("AdamOptimizer: parameter/gradient size mismatch");
    slots_.push_back(Slot{param, grad, Vector(param->size(), 0.0), Vector(param->size(), 0.0)});
}

void AdamOptimizer::step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (auto& s : slots_) {
        for (std::size_t i = 0; i < s.p->size(); ++i) {
            const double g = (*s.g)[i];
            s.m[i] = beta1_ * s.m[i] + (1.0 - beta1_) * g;
            s.v[i] = beta2_ * s.v[i] + (1.0 - beta2_) * g * g;
            (*s.p)[i] -= lr * (s.m[i] / bc1) / (std::sqrt(s.v[i] / bc2) + eps_);
        }
    }
}

double AdamOptimizer::grad_norm() const {
    double s = 0.0;
    for (const auto& slot : slots_)
        for (double g : *slot.g) s += g * g;
    return std::sqrt(s);
}

std::vector<corpus::Instance> build_unlabeled_pool(std::span<const corpus::Instance> labeled,
                                                   std::span<const corpus::Instance> unlabeled,
                                                   const TrainConfig& cfg) {
    if (cfg.mode == Mode::VatStar) return corpus::strip_labels(labeled);
    if (cfg.mode != Mode::Vat) return {};
    if (unlabeled.empty()) throw ValueError("vat mode requires unlabeled data");
    std::vector<std::size_t> idx(unlabeled.size());
    std::iota(idx.begin(), idx.end(), 0);
    RandomSource rng = RandomSource(cfg.seed).split(kStreamPool);
    rng.shuffle(idx);
    const std::size_t want = std::min<std::size_t>(cfg.vat.unlabeledRatio * labeled.size(),
                                                   unlabeled.size());
    std::vector<corpus::Instance> pool;
    pool.reserve(want);
    for (std::size_t i = 0; i < want; ++i) {
        pool.push_back(unlabeled[idx[i]]);
        pool.back().label.reset();
    }
    return pool;
}

TrainResult train(std::span<const corpus::Instance> labeled,
                  std::span<const corpus::Instance> unlabeled,
                  const corpus::EmbeddingTable& embeddings, const TrainConfig& cfg,
                  std::span<const corpus::Instance> heldout) {
    cfg.validate();
    if (labeled.empty()) throw ValueError("train: empty labeled set");
    const bool vatMode = cfg.mode == Mode::Vat || cfg.mode == Mode::VatStar;
    RandomSource rootRng(cfg.seed);

    std::vector<corpus::Instance> pool = build_unlabeled_pool(labeled, unlabeled, cfg);

    RandomSource tablesRng = rootRng.split(kStreamTables);
    TrainedModel model;
    model.layout = cfg.layout;
    model.maxLen = cfg.maxSentenceLen;
    model.tables = encoder::FeatureTables::build(cfg.layout, labeled, pool, tablesRng);
    model.embeddings = embeddings;
    model.params = pcnn::init_params(cfg.filters, cfg.window, cfg.layout.totalDim(),
                                     rootRng.derive_seed(kStreamInit));

    std::vector<encoder::EncodedSkeleton> labSk;
    labSk.reserve(labeled.size());
    std::size_t skippedLabeled = 0;
    for (const auto& inst : labeled) {
        if (!inst.label) throw ValueError("train: instance without label in labeled data");
        try {
            labSk.push_back(encoder::prepare(inst, model.tables, model.embeddings, cfg.maxSentenceLen));
        } catch (const EncodeSkipError&) {
            ++skippedLabeled;
        }
    }
    if (labSk.empty()) throw ValueError("train: every labeled instance was skipped");

    std::vector<encoder::EncodedSkeleton> unlSk;
    std::size_t skippedUnlabeled = 0;
    if (vatMode) {
        unlSk.reserve(pool.size());
        for (const auto& inst : pool) {
            try {
                unlSk.push_back(encoder::prepare(inst, model.tables, model.embeddings, cfg.maxSentenceLen));
            } catch (const EncodeSkipError&) {
                ++skippedUnlabeled;
            }
        }
    }

    adv::AdvConfig advEff = cfg.adv;
    if (cfg.mode == Mode::Baseline) advEff.M = 0;
    else if (cfg.mode == Mode::At) advEff.M = 1;
    const encoder::PerturbScope labScope =
        vatMode ? encoder::PerturbScope::All : cfg.adv.scope;

    pcnn::ParamGrads pg;
    pg.init(model.params);
    Matrix dEmb(model.embeddings.vectors().rows(), model.embeddings.vectors().cols());
    Matrix dPos(model.tables.pos.rows().rows(), model.tables.pos.rows().cols());
    Matrix dDep(model.tables.dep.rows().rows(), model.tables.dep.rows().cols());
    Matrix dDist(model.tables.dist.rows(), model.tables.dist.cols());
    Matrix dInputScratch(cfg.maxSentenceLen, cfg.layout.totalDim());

    AdamOptimizer opt;
    opt.attach(&model.params.convFilters.data(), &pg.dConvFilters.data());
    opt.attach(&model.params.convBias, &pg.dConvBias);
    opt.attach(&model.params.fcW.data(), &pg.dFcW.data());
    opt.attach(&model.params.fcB, &pg.dFcB);
    opt.attach(&model.embeddings.vectors().data(), &dEmb.data());
    opt.attach(&model.tables.pos.rows().data(), &dPos.data());
    opt.attach(&model.tables.dep.rows().data(), &dDep.data());
    opt.attach(&model.tables.dist.data(), &dDist.data());

    RandomSource shuffleRng = rootRng.split(kStreamShuffle);
    RandomSource stepRng = rootRng.split(kStreamStep);
    RandomSource unlOrderRng = rootRng.split(kStreamUnlabeledOrder);

    std::vector<std::size_t> order(labSk.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> uorder(unlSk.size());
    std::iota(uorder.begin(), uorder.end(), 0);
    std::size_t ucursor = 0;

    std::vector<encoder::EncodedInstance> labBuf(cfg.batchLabeled);
    std::vector<encoder::EncodedInstance> unlBuf(vatMode ? cfg.vat.unlabeledBatch : 0);

    const std::size_t half = cfg.window / 2;
    auto route_and_clear = [&](const encoder::EncodedInstance& x) {
        route_input_grad(x, dInputScratch, dEmb, dPos, dDep, dDist);
        zero_rows(dInputScratch, x.validLen + half + 1);
    };

    std::vector<EpochRecord> history;
    history.reserve(cfg.epochs);
    std::size_t globalStep = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffleRng.shuffle(order);
        if (vatMode && !unlSk.empty()) {
            unlOrderRng.shuffle(uorder);
            ucursor = 0;
        }
        double epochLoss = 0.0;
        std::size_t nBatches = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batchLabeled) {
            const std::size_t bsz = std::min(cfg.batchLabeled, order.size() - start);
            for (std::size_t i = 0; i < bsz; ++i)
                encoder::materialize_into(labBuf[i], labSk[order[start + i]], cfg.layout,
                                          model.tables, model.embeddings, labScope,
                                          cfg.maxSentenceLen);
            pg.zero();
            dEmb.fill(0.0);
            dPos.fill(0.0);
            dDep.fill(0.0);
            dDist.fill(0.0);

            double batchLoss = 0.0;
            if (!vatMode) {
                const double w = 1.0 / static_cast<double>(bsz);
                for (std::size_t i = 0; i < bsz; ++i) {
                    const auto& x = labBuf[i];
                    const double loss = adv::adversarial_loss(x, *x.label, model.params, advEff,
                                                              stepRng, w, &pg, &dInputScratch);
                    route_and_clear(x);
                    batchLoss += w * loss;
                }
            } else {
                std::size_t ub = 0;
                if (!unlSk.empty()) {
                    ub = cfg.vat.unlabeledBatch;
                    for (std::size_t i = 0; i < ub; ++i) {
                        if (ucursor >= uorder.size()) {
                            unlOrderRng.shuffle(uorder);
                            ucursor = 0;
                        }
                        encoder::materialize_into(unlBuf[i], unlSk[uorder[ucursor++]], cfg.layout,
                                                  model.tables, model.embeddings,
                                                  encoder::PerturbScope::All, cfg.maxSentenceLen);
                    }
                }
                batchLoss = vat::combined_vat_objective(
                    std::span<const encoder::EncodedInstance>(labBuf.data(), bsz),
                    std::span<const encoder::EncodedInstance>(unlBuf.data(), ub), model.params,
                    cfg.vat, stepRng, &pg,
                    [&](const encoder::EncodedInstance& x, const Matrix& dIn) {
                        route_input_grad(x, dIn, dEmb, dPos, dDep, dDist);
                    });
            }

            const double lr = lr_schedule(globalStep, cfg);
            if (!std::isfinite(batchLoss)) {
                std::ostringstream msg;
                msg << "training diverged: non-finite loss at step " << globalStep << " (lr=" << lr
                    << ", grad_norm=" << opt.grad_norm() << ")";
                throw TrainingDiverged(msg.str());
            }
            opt.step(lr);
            ++globalStep;
            epochLoss += batchLoss;
            ++nBatches;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.meanLoss = epochLoss / static_cast<double>(nBatches);
        if (!heldout.empty())
            rec.heldout = evaluate_state(model.params, model.tables, model.embeddings, cfg.layout,
                                         cfg.maxSentenceLen, heldout, nullptr);
        history.push_back(std::move(rec));
    }

    TrainResult res;
    res.model = std::move(model);
    res.history = std::move(history);
    res.skippedLabeled = skippedLabeled;
    res.skippedUnlabeled = skippedUnlabeled;
    return res;
}

Metrics evaluate(const TrainedModel& model, std::span<const corpus::Instance> testSet,
                 std::size_t* skipped) {
    return evaluate_state(model.params, model.tables, model.embeddings, model.layout,
                          model.maxLen, testSet, skipped);
}

std::size_t worker_threads() {
    const char* env = std::getenv("ADVREG_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end || v == 0) return 1;
    return static_cast<std::size_t>(v);
}

CvResult cross_validate(std::span<const corpus::Instance> corpusData,
                        std::span<const corpus::Instance> unlabeled,
                        const corpus::EmbeddingTable& embeddings, const TrainConfig& cfg,
                        std::size_t k, std::size_t repeats) {
    cfg.validate();
    if (repeats < 1) throw ValueError("cross_validate: repeats must be at least 1");
    const auto folds = corpus::split_folds(corpusData.size(), k, cfg.seed);

    std::vector<FoldRecord> records(repeats * k);
    auto run_cell = [&](std::size_t r, std::size_t f) {
        TrainConfig cellCfg = cfg;
        cellCfg.seed = cfg.seed + r;  // repeats vary initialization/shuffling only
        std::vector<char> inTest(corpusData.size(), 0);
        for (std::size_t i : folds[f]) inTest[i] = 1;
        std::vector<corpus::Instance> trainSet, testSet;
        trainSet.reserve(corpusData.size() - folds[f].size());
        testSet.reserve(folds[f].size());
        for (std::size_t i = 0; i < corpusData.size(); ++i)
            (inTest[i] ? testSet : trainSet).push_back(corpusData[i]);
        const TrainResult tr = train(trainSet, unlabeled, embeddings, cellCfg);
        std::size_t testSkipped = 0;
        const Metrics m = evaluate(tr.model, testSet, &testSkipped);
        records[r * k + f] = FoldRecord{r, f, m, tr.skippedLabeled, testSkipped};
    };

    const std::size_t total = repeats * k;
    const std::size_t threads = std::min(worker_threads(), total);
    if (threads <= 1) {
        for (std::size_t r = 0; r < repeats; ++r)
            for (std::size_t f = 0; f < k; ++f) run_cell(r, f);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr firstError;
        std::mutex errorMutex;
        std::vector<std::thread> workers;
        workers.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t cell = next.fetch_add(1);
                    if (cell >= total) break;
                    try {
                        run_cell(cell / k, cell % k);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(errorMutex);
                        if (!firstError) firstError = std::current_exception();
                        break;
                    }
                }
            });
        }
        for (auto& w : workers) w.join();
        if (firstError) std::rethrow_exception(firstError);
    }

    CvResult res;
    res.folds = std::move(records);
    res.foldsK = k;
    res.repeats = repeats;
    double sp = 0.0, sr = 0.0, sf = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t r = 0; r < repeats; ++r) {
        std::size_t rtp = 0, rfp = 0, rfn = 0, rtn = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const auto& m = res.folds[r * k + f].metrics;
            rtp += m.tp;
            rfp += m.fp;
            rfn += m.fn;
            rtn += m.tn;
        }
        const Metrics rm = Metrics::from_counts(rtp, rfp, rfn, rtn);
        res.perRepeat.push_back(rm);
        sp += rm.precision;
        sr += rm.recall;
        sf += rm.fscore;
        tp += rtp;
        fp += rfp;
        fn += rfn;
        tn += rtn;
    }
    res.aggregate.tp = tp;
    res.aggregate.fp = fp;
    res.aggregate.fn = fn;
    res.aggregate.tn = tn;
    res.aggregate.precision = sp / static_cast<double>(repeats);
    res.aggregate.recall = sr / static_cast<double>(repeats);
    res.aggregate.fscore = sf / static_cast<double>(repeats);
    return res;
}

void save_model(const std::string& path, const TrainedModel& model,
                const std::string& configHash) {
    json j;
    j["format"] = "advreg-model";
    j["version"] = 1;
    j["config_hash"] = configHash;
    j["window"] = model.params.window;
    j["max_len"] = model.maxLen;
    j["layout"] = {{"emb_dim", model.layout.embDim},
                   {"pos_dim", model.layout.posDim},
                   {"dep_dim", model.layout.depDim},
                   {"dist_dim", model.layout.distDim}};
    j["conv_filters"] = matrix_to_json(model.params.convFilters);
    j["conv_bias"] = model.params.convBias;
    j["fc_w"] = matrix_to_json(model.params.fcW);
    j["fc_b"] = model.params.fcB;
    j["pos_tags"] = model.tables.pos.tags();
    j["pos_rows"] = matrix_to_json(model.tables.pos.rows());
    j["dep_tags"] = model.tables.dep.tags();
    j["dep_rows"] = matrix_to_json(model.tables.dep.rows());
    j["dist_rows"] = matrix_to_json(model.tables.dist);
    j["emb_words"] = model.embeddings.words();
    j["emb_vectors"] = matrix_to_json(model.embeddings.vectors());
    j["emb_nmax"] = model.embeddings.n_max();
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write model file " + path);
    out << j.dump();
}

TrainedModel load_model(const std::string& path, std::string* configHash) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    if (j.value("format", std::string{}) != "advreg-model")
        throw ParseError("not an advreg model file");
    if (j.value("version", 0) != 1) throw ParseError("unsupported model file version");
    if (configHash) *configHash = j.value("config_hash", std::string{});

    TrainedModel m;
    m.params.window = j.at("window").get<std::size_t>();
    m.maxLen = j.at("max_len").get<std::size_t>();
    m.layout.embDim = j.at("layout").at("emb_dim").get<std::size_t>();
    m.layout.posDim = j.at("layout").at("pos_dim").get<std::size_t>();
    m.layout.depDim = j.at("layout").at("dep_dim").get<std::size_t>();
    m.layout.distDim = j.at("layout").at("dist_dim").get<std::size_t>();
    m.params.convFilters = matrix_from_json(j.at("conv_filters"));
    m.params.convBias = j.at("conv_bias").get<Vector>();
    m.params.fcW = matrix_from_json(j.at("fc_w"));
    m.params.fcB = j.at("fc_b").get<Vector>();
    m.tables.pos = encoder::TagTable::restore(j.at("pos_tags").get<std::vector<std::string>>(),
                                              matrix_from_json(j.at("pos_rows")));
    m.tables.dep = encoder::TagTable::restore(j.at("dep_tags").get<std::vector<std::string>>(),
                                              matrix_from_json(j.at("dep_rows")));
    m.tables.dist = matrix_from_json(j.at("dist_rows"));
    m.embeddings = corpus::EmbeddingTable::restore(
        j.at("emb_words").get<std::vector<std::string>>(), matrix_from_json(j.at("emb_vectors")),
        j.at("emb_nmax").get<double>());
    return m;
}

nlohmann::json metrics_to_json(const Metrics& m) {
    return json{{"precision", m.precision}, {"recall", m.recall}, {"fscore", m.fscore},
                {"tp", m.tp},               {"fp", m.fp},         {"fn", m.fn},
                {"tn", m.tn}};
}

nlohmann::json cv_result_to_json(const CvResult& cv, const TrainConfig& cfg, double wallSec) {
    json j;
    j["command"] = "cv";
    j["config"] = cfg.to_json();
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    j["folds"] = cv.foldsK;
    j["repeats"] = cv.repeats;
    json recs = json::array();
    for (const auto& fr : cv.folds) {
        json r = metrics_to_json(fr.metrics);
        r["repeat"] = fr.repeat;
        r["fold"] = fr.fold;
        r["train_skipped"] = fr.trainSkipped;
        r["test_skipped"] = fr.testSkipped;
        recs.push_back(std::move(r));
    }
    j["fold_records"] = std::move(recs);
    json reps = json::array();
    for (const auto& m : cv.perRepeat) reps.push_back(metrics_to_json(m));
    j["per_repeat"] = std::move(reps);
    j["aggregate"] = metrics_to_json(cv.aggregate);
    j["wall_clock_sec"] = wallSec;
    return j;
}

nlohmann::json train_result_to_json(const TrainResult& res, const TrainConfig& cfg,
                                    double wallSec) {
    json j;
    j["command"] = "train";
    j["config"] = cfg.to_json();
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    json hist = json::array();
    for (const auto& rec : res.history) {
        json h{{"epoch", rec.epoch}, {"mean_loss", rec.meanLoss}};
        if (rec.heldout) h["heldout"] = metrics_to_json(*rec.heldout);
        hist.push_back(std::move(h));
    }
    j["history"] = std::move(hist);
    j["skipped_labeled"] = res.skippedLabeled;
    j["skipped_unlabeled"] = res.skippedUnlabeled;
    j["wall_clock_sec"] = wallSec;
    return j;
}

}  // namespace advreg::harness
