#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "advreg/config.hpp"
#include "advreg/corpus.hpp"
#include "advreg/harness.hpp"

namespace {

using advreg::corpus::Instance;
using advreg::harness::TrainConfig;
using nlohmann::json;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw advreg::ParseError("cannot write result file " + path);
    out << j.dump(2) << '\n';
}

struct CommonOpts {
    std::string configPath;
    std::string modeStr;
    std::vector<std::string> sets;
    std::int64_t seed = -1;
    std::int64_t epochs = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.configPath, "Config file (JSON or key=value lines)");
    cmd->add_option("--mode", o.modeStr, "baseline|at|at_multi|vat|vat_star");
    cmd->add_option("--set", o.sets, "Override a config key, e.g. --set adv.epsilon=0.02");
    cmd->add_option("--seed", o.seed, "Run seed");
    cmd->add_option("--epochs", o.epochs, "Training epochs");
}

TrainConfig resolve_config(const CommonOpts& o) {
    TrainConfig cfg;
    if (!o.configPath.empty()) cfg = advreg::harness::load_config_file(o.configPath);
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw advreg::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.apply_key_value(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.modeStr.empty()) {
        cfg.mode = advreg::harness::mode_from_string(o.modeStr);
        cfg.vat.star = cfg.mode == advreg::harness::Mode::VatStar;
    }
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.epochs > 0) cfg.epochs = static_cast<std::size_t>(o.epochs);
    return cfg;
}

advreg::corpus::EmbeddingTable load_and_normalize(const std::string& path) {
    auto table = advreg::corpus::load_embeddings(path);
    advreg::corpus::normalize_embeddings(table);
    return table;
}

void print_metrics(const char* label, const advreg::harness::Metrics& m) {
    std::printf("%s  P=%.4f  R=%.4f  F=%.4f  (tp=%zu fp=%zu fn=%zu tn=%zu)\n", label, m.precision,
                m.recall, m.fscore, m.tp, m.fp, m.fn, m.tn);
}

int run_train(const CommonOpts& common, const std::string& corpusPath,
              const std::string& unlabeledPath, const std::string& embeddingsPath,
              const std::string& outPath, const std::string& resultPath) {
    Timer timer;
    TrainConfig cfg = resolve_config(common);
    if (!embeddingsPath.empty()) cfg.embeddingsPath = embeddingsPath;
    if (cfg.embeddingsPath.empty())
        throw advreg::ConfigError("an embeddings file is required (--embeddings or config)");
    cfg.validate();

    const auto labeled = advreg::corpus::load_corpus(corpusPath);
    std::vector<Instance> unlabeled;
    if (!unlabeledPath.empty()) unlabeled = advreg::corpus::load_unlabeled(unlabeledPath);
    const auto embeddings = load_and_normalize(cfg.embeddingsPath);

    // Optional held-out slice for per-epoch monitoring.
    std::vector<Instance> trainSet(labeled.begin(), labeled.end());
    std::vector<Instance> heldout;
    if (cfg.heldoutFraction > 0.0) {
        std::vector<std::size_t> idx(labeled.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        advreg::RandomSource rng = advreg::RandomSource(cfg.seed).split(7);
        rng.shuffle(idx);
        std::size_t nHeld = static_cast<std::size_t>(cfg.heldoutFraction *
                                                     static_cast<double>(labeled.size()));
        nHeld = std::min(nHeld, labeled.size() - 1);
        if (nHeld > 0) {
            trainSet.clear();
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < nHeld ? heldout : trainSet).push_back(labeled[idx[i]]);
        }
    }

    const auto res = advreg::harness::train(trainSet, unlabeled, embeddings, cfg, heldout);
    advreg::harness::save_model(outPath, res.model, advreg::harness::config_hash(cfg));

    json j = advreg::harness::train_result_to_json(res, cfg, timer.seconds());
    j["model_path"] = outPath;
    write_json_file(resultPath, j);

    std::printf("trained %s model on %zu instances (%zu skipped), %zu epochs\n",
                advreg::harness::mode_to_string(cfg.mode).c_str(), trainSet.size(),
                res.skippedLabeled, cfg.epochs);
    if (!res.history.empty())
        std::printf("final mean loss %.6f\n", res.history.back().meanLoss);
    if (!heldout.empty() && res.history.back().heldout)
        print_metrics("heldout", *res.history.back().heldout);
    std::printf("model -> %s\nresult -> %s\n", outPath.c_str(), resultPath.c_str());
    return 0;
}

int run_eval(const std::string& modelPath, const std::string& corpusPath,
             const std::string& resultPath) {
    Timer timer;
    std::string configHash;
    const auto model = advreg::harness::load_model(modelPath, &configHash);
    const auto testSet = advreg::corpus::load_corpus(corpusPath);
    std::size_t skipped = 0;
    const auto metrics = advreg::harness::evaluate(model, testSet, &skipped);

    json j;
    j["command"] = "eval";
    j["model_path"] = modelPath;
    j["model_config_hash"] = configHash;
    j["corpus"] = corpusPath;
    j["instances"] = testSet.size();
    j["skipped"] = skipped;
    j["metrics"] = advreg::harness::metrics_to_json(metrics);
    j["wall_clock_sec"] = timer.seconds();
    write_json_file(resultPath, j);

    print_metrics("eval", metrics);
    if (skipped) std::printf("skipped %zu instances (entities beyond max length)\n", skipped);
    std::printf("result -> %s\n", resultPath.c_str());
    return 0;
}

int run_cv(const CommonOpts& common, const std::string& corpusPath,
           const std::string& unlabeledPath, const std::string& embeddingsPath,
           std::size_t folds, std::size_t repeats, const std::string& resultPath) {
    Timer timer;
    TrainConfig cfg = resolve_config(common);
    if (!embeddingsPath.empty()) cfg.embeddingsPath = embeddingsPath;
    if (cfg.embeddingsPath.empty())
        throw advreg::ConfigError("an embeddings file is required (--embeddings or config)");
    if (folds) cfg.cvFolds = folds;
    if (repeats) cfg.cvRepeats = repeats;
    cfg.validate();

    const auto corpusData = advreg::corpus::load_corpus(corpusPath);
    std::vector<Instance> unlabeled;
    if (!unlabeledPath.empty()) unlabeled = advreg::corpus::load_unlabeled(unlabeledPath);
    const auto embeddings = load_and_normalize(cfg.embeddingsPath);

    const auto cv = advreg::harness::cross_validate(corpusData, unlabeled, embeddings, cfg,
                                                    cfg.cvFolds, cfg.cvRepeats);
    write_json_file(resultPath, advreg::harness::cv_result_to_json(cv, cfg, timer.seconds()));

    for (const auto& fr : cv.folds)
        std::printf("repeat %zu fold %zu  P=%.4f R=%.4f F=%.4f\n", fr.repeat, fr.fold,
                    fr.metrics.precision, fr.metrics.recall, fr.metrics.fscore);
    for (std::size_t r = 0; r < cv.perRepeat.size(); ++r)
        std::printf("repeat %zu micro  P=%.4f R=%.4f F=%.4f\n", r, cv.perRepeat[r].precision,
                    cv.perRepeat[r].recall, cv.perRepeat[r].fscore);
    print_metrics("aggregate", cv.aggregate);
    std::printf("result -> %s\n", resultPath.c_str());
    return 0;
}

int run_gen_unlabeled(const std::string& sentencesPath, const std::string& outPath,
                      const std::string& resultPath) {
    Timer timer;
    const auto sentences = advreg::corpus::load_sentences(sentencesPath);
    const auto instances = advreg::corpus::generate_unlabeled(sentences);
    advreg::corpus::save_instances(outPath, instances);

    json j;
    j["command"] = "gen-unlabeled";
    j["sentences"] = sentences.size();
    j["instances"] = instances.size();
    j["out"] = outPath;
    j["wall_clock_sec"] = timer.seconds();
    write_json_file(resultPath, j);

    std::printf("%zu sentences -> %zu unlabeled instances -> %s\n", sentences.size(),
                instances.size(), outPath.c_str());
    return 0;
}

int run_gradcheck(const std::string& resultPath) {
    Timer timer;
    const auto records = advreg::harness::gradcheck_suite();
    bool allPass = true;
    json recs = json::array();
    for (const auto& r : records) {
        std::printf("%s  %-18s max_rel_err=%.3e  (threshold %.0e)\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.maxRelError, r.threshold);
        allPass = allPass && r.pass;
        recs.push_back({{"name", r.name},
                        {"max_rel_error", r.maxRelError},
                        {"threshold", r.threshold},
                        {"pass", r.pass}});
    }
    json j;
    j["command"] = "gradcheck";
    j["checks"] = std::move(recs);
    j["pass"] = allPass;
    j["wall_clock_sec"] = timer.seconds();
    write_json_file(resultPath, j);
    std::printf("%s (%zu checks)\n", allPass ? "all gradient checks passed" : "GRADIENT CHECKS FAILED",
                records.size());
    return allPass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piecewise-CNN relation extraction with adversarial and virtual adversarial training"};
    app.require_subcommand(1);

    CommonOpts trainCommon, cvCommon;
    std::string corpusPath, unlabeledPath, embeddingsPath, outPath;
    std::string trainResult = "train_result.json";
    auto* trainCmd = app.add_subcommand("train", "Train a model and save a checkpoint");
    add_common(trainCmd, trainCommon);
    trainCmd->add_option("--corpus", corpusPath, "Labeled instance file")->required();
    trainCmd->add_option("--unlabeled", unlabeledPath, "Unlabeled instance file (vat mode)");
    trainCmd->add_option("--embeddings", embeddingsPath, "Pre-trained embedding file");
    trainCmd->add_option("--out", outPath, "Model checkpoint path")->required();
    trainCmd->add_option("--result", trainResult, "Result JSON path");

    std::string evalModel, evalCorpus, evalResult = "eval_result.json";
    auto* evalCmd = app.add_subcommand("eval", "Evaluate a checkpoint on a labeled corpus");
    evalCmd->add_option("--model", evalModel, "Model checkpoint")->required();
    evalCmd->add_option("--corpus", evalCorpus, "Labeled instance file")->required();
    evalCmd->add_option("--result", evalResult, "Result JSON path");

    std::string cvCorpus, cvUnlabeled, cvEmbeddings, cvResult = "cv_result.json";
    std::size_t cvFolds = 0, cvRepeats = 0;
    auto* cvCmd = app.add_subcommand("cv", "Cross-validate with repeated runs");
    add_common(cvCmd, cvCommon);
    cvCmd->add_option("--corpus", cvCorpus, "Labeled instance file")->required();
    cvCmd->add_option("--unlabeled", cvUnlabeled, "Unlabeled instance file (vat mode)");
    cvCmd->add_option("--embeddings", cvEmbeddings, "Pre-trained embedding file");
    cvCmd->add_option("--folds", cvFolds, "Number of folds");
    cvCmd->add_option("--repeats", cvRepeats, "Number of repeated runs");
    cvCmd->add_option("--result", cvResult, "Result JSON path");

    std::string sentencesPath, genOut, genResult = "gen_unlabeled_result.json";
    auto* genCmd = app.add_subcommand("gen-unlabeled",
                                      "Enumerate entity pairs into unlabeled instances");
    genCmd->add_option("--sentences", sentencesPath, "Sentence file")->required();
    genCmd->add_option("--out", genOut, "Output instance file")->required();
    genCmd->add_option("--result", genResult, "Result JSON path");

    std::string gcResult = "gradcheck_result.json";
    auto* gcCmd = app.add_subcommand("gradcheck", "Run the finite-difference gradient suite");
    gcCmd->add_option("--result", gcResult, "Result JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (trainCmd->parsed())
            return run_train(trainCommon, corpusPath, unlabeledPath, embeddingsPath, outPath,
                             trainResult);
        if (evalCmd->parsed()) return run_eval(evalModel, evalCorpus, evalResult);
        if (cvCmd->parsed())
            return run_cv(cvCommon, cvCorpus, cvUnlabeled, cvEmbeddings, cvFolds, cvRepeats,
                          cvResult);
        if (genCmd->parsed()) return run_gen_unlabeled(sentencesPath, genOut, genResult);
        if (gcCmd->parsed()) return run_gradcheck(gcResult);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
