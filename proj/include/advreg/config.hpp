#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "advreg/adversarial.hpp"
#include "advreg/encoder.hpp"
#include "advreg/vat.hpp"

namespace advreg::harness {

enum class Mode { Baseline, At, AtMulti, Vat, VatStar };

Mode mode_from_string(const std::string& s);
std::string mode_to_string(Mode m);

struct TrainConfig {
    Mode mode = Mode::Baseline;
    std::size_t epochs = 200;
    std::size_t batchLabeled = 128;
    double lr0 = 0.001;
    double decayRate = 0.95;
    double decaySteps = 1000.0;
    std::uint64_t seed = 1;
    std::size_t maxSentenceLen = 100;
    double heldoutFraction = 0.0;

    std::size_t filters = 400;
    std::size_t window = 3;
    encoder::FeatureLayout layout;

    adv::AdvConfig adv;
    vat::VatConfig vat;

    std::size_t cvFolds = 10;
    std::size_t cvRepeats = 3;

    std::string embeddingsPath;

    void validate() const;

    nlohmann::json to_json() const;
    static TrainConfig from_json(const nlohmann::json& j);

    // Dotted key access for flat key=value files and --set overrides,
    // e.g. "adv.epsilon=0.02" or "mode=vat_star".
    void apply_key_value(const std::string& key, const std::string& value);
};

// Auto-detects JSON (first non-space character '{') versus flat key=value
// lines ('#' comments allowed). Values land on top of the defaults.
TrainConfig load_config_file(const std::string& path);

// FNV-1a over the canonical JSON dump, as a 16-digit hex string.
std::string config_hash(const TrainConfig& cfg);

}  // namespace advreg::harness
