#include "advreg/config.hpp"

#include <fstream>
#include <sstream>

namespace advreg::harness {

using nlohmann::json;

Mode mode_from_string(const std::string& s) {
    if (s == "baseline") return Mode::Baseline;
    if (s == "at") return Mode::At;
    if (s == "at_multi") return Mode::AtMulti;
    if (s == "vat") return Mode::Vat;
    if (s == "vat_star") return Mode::VatStar;
    throw ConfigError("unknown mode '" + s + "'");
}

std::string mode_to_string(Mode m) {
    switch (m) {
        case Mode::Baseline: return "baseline";
        case Mode::At: return "at";
        case Mode::AtMulti: return "at_multi";
        case Mode::Vat: return "vat";
        case Mode::VatStar: return "vat_star";
    }
    throw ConfigError("unknown mode value");
}

void TrainConfig::validate() const {
    if (epochs == 0) throw ConfigError("epochs must be positive");
    if (batchLabeled == 0) throw ConfigError("batch_labeled must be positive");
    if (lr0 <= 0.0) throw ConfigError("lr0 must be positive");
    if (decayRate <= 0.0 || decayRate > 1.0) throw ConfigError("decay_rate must lie in (0, 1]");
    if (decaySteps <= 0.0) throw ConfigError("decay_steps must be positive");
    if (filters == 0) throw ConfigError("model.filters must be positive");
    if (window == 0 || window % 2 == 0) throw ConfigError("model.window must be odd");
    if (maxSentenceLen < window)
        throw ConfigError("max_sentence_len must be at least the convolution window");
    if (heldoutFraction < 0.0 || heldoutFraction >= 1.0)
        throw ConfigError("heldout_fraction must lie in [0, 1)");
    if (cvFolds < 2) throw ConfigError("cv.folds must be at least 2");
    if (cvRepeats < 1) throw ConfigError("cv.repeats must be at least 1");
    layout.validate();
    adv.validate();
    vat.validate();
}

json TrainConfig::to_json() const {
    json j;
    j["mode"] = mode_to_string(mode);
    j["epochs"] = epochs;
    j["batch_labeled"] = batchLabeled;
    j["lr0"] = lr0;
    j["decay_rate"] = decayRate;
    j["decay_steps"] = decaySteps;
    j["seed"] = seed;
    j["max_sentence_len"] = maxSentenceLen;
    j["heldout_fraction"] = heldoutFraction;
    j["model"] = {{"filters", filters}, {"window", window}};
    j["layout"] = {{"emb_dim", layout.embDim},
                   {"pos_dim", layout.posDim},
                   {"dep_dim", layout.depDim},
                   {"dist_dim", layout.distDim}};
    j["adv"] = {{"epsilon", adv.epsilon},
                {"scope", adv.scope == encoder::PerturbScope::All ? "all" : "embedding"},
                {"M", adv.M},
                {"jitter_ratio", adv.jitterRatio},
                {"alpha", adv.alpha}};
    j["vat"] = {{"eps_embedding", vat.epsEmbedding},
                {"eps_other", vat.epsOther},
                {"xi", vat.xi},
                {"power_iters", vat.powerIters},
                {"lambda", vat.lambda},
                {"unlabeled_ratio", vat.unlabeledRatio},
                {"unlabeled_batch", vat.unlabeledBatch},
                {"star", vat.star}};
    j["cv"] = {{"folds", cvFolds}, {"repeats", cvRepeats}};
    j["embeddings_path"] = embeddingsPath;
    return j;
}

namespace {

encoder::PerturbScope scope_from_string(const std::string& s) {
    if (s == "embedding") return encoder::PerturbScope::Embedding;
    if (s == "all") return encoder::PerturbScope::All;
    throw ConfigError("unknown perturbation scope '" + s + "'");
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

TrainConfig TrainConfig::from_json(const json& j) {
    TrainConfig cfg;
    if (j.contains("mode")) cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    maybe(j, "epochs", cfg.epochs);
    maybe(j, "batch_labeled", cfg.batchLabeled);
    maybe(j, "lr0", cfg.lr0);
    maybe(j, "decay_rate", cfg.decayRate);
    maybe(j, "decay_steps", cfg.decaySteps);
    maybe(j, "seed", cfg.seed);
    maybe(j, "max_sentence_len", cfg.maxSentenceLen);
    maybe(j, "heldout_fraction", cfg.heldoutFraction);
    maybe(j, "embeddings_path", cfg.embeddingsPath);
    if (j.contains("model")) {
        maybe(j["model"], "filters", cfg.filters);
        maybe(j["model"], "window", cfg.window);
    }
    if (j.contains("layout")) {
        maybe(j["layout"], "emb_dim", cfg.layout.embDim);
        maybe(j["layout"], "pos_dim", cfg.layout.posDim);
        maybe(j["layout"], "dep_dim", cfg.layout.depDim);
        maybe(j["layout"], "dist_dim", cfg.layout.distDim);
    }
    if (j.contains("adv")) {
        const auto& a = j["adv"];
        maybe(a, "epsilon", cfg.adv.epsilon);
        if (a.contains("scope")) cfg.adv.scope = scope_from_string(a.at("scope").get<std::string>());
        maybe(a, "M", cfg.adv.M);
        maybe(a, "jitter_ratio", cfg.adv.jitterRatio);
        maybe(a, "alpha", cfg.adv.alpha);
    }
    if (j.contains("vat")) {
        const auto& v = j["vat"];
        maybe(v, "eps_embedding", cfg.vat.epsEmbedding);
        maybe(v, "eps_other", cfg.vat.epsOther);
        maybe(v, "xi", cfg.vat.xi);
        maybe(v, "power_iters", cfg.vat.powerIters);
        maybe(v, "lambda", cfg.vat.lambda);
        maybe(v, "unlabeled_ratio", cfg.vat.unlabeledRatio);
        maybe(v, "unlabeled_batch", cfg.vat.unlabeledBatch);
        maybe(v, "star", cfg.vat.star);
    }
    if (j.contains("cv")) {
        maybe(j["cv"], "folds", cfg.cvFolds);
        maybe(j["cv"], "repeats", cfg.cvRepeats);
    }
    // vat.star and mode=vat_star are two spellings of the same thing.
    if (cfg.vat.star && cfg.mode == Mode::Vat) cfg.mode = Mode::VatStar;
    if (cfg.mode == Mode::VatStar) cfg.vat.star = true;
    return cfg;
}

void TrainConfig::apply_key_value(const std::string& key, const std::string& value) {
    json j = to_json();
    json leaf;
    try {
        leaf = json::parse(value);
    } catch (const json::exception&) {
        leaf = value;  // bare strings need no quotes in key=value files
    }
    // Walk the dotted path.
    json* node = &j;
    std::string rest = key;
    while (true) {
        const auto dot = rest.find('.');
        const std::string head = rest.substr(0, dot);
        if (!node->contains(head)) throw ConfigError("unknown config key '" + key + "'");
        if (dot == std::string::npos) {
            if ((*node)[head].is_string() && !leaf.is_string())
                leaf = value;  // e.g. mode=vat parsed as string, not identifier
            (*node)[head] = leaf;
            break;
        }
        node = &(*node)[head];
        if (!node->is_object()) throw ConfigError("config key '" + key + "' is not nested");
        rest = rest.substr(dot + 1);
    }
    *this = from_json(j);
}

TrainConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto firstChar = text.find_first_not_of(" \t\r\n");
    if (firstChar != std::string::npos && text[firstChar] == '{') {
        try {
            return TrainConfig::from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config file: ") + e.what());
        }
    }
    TrainConfig cfg;
    std::istringstream lines(text);
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(lines, line)) {
        ++lineNo;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineNo) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        cfg.apply_key_value(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string config_hash(const TrainConfig& cfg) {
    const std::string s = cfg.to_json().dump();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace advreg::harness
