#include "advreg/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "advreg/random.hpp"

namespace advreg::corpus {

using nlohmann::json;

namespace {

constexpr std::uint64_t kUnkSeed = 0x5EEDFACEull;

Span span_from_json(const json& j, std::size_t nTokens, std::size_t lineNo, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("line " + std::to_string(lineNo) + ": " + name +
                         " must be a [start,end] integer pair");
    const long long s = j[0].get<long long>();
    const long long e = j[1].get<long long>();
    if (s < 0 || e < s || static_cast<std::size_t>(e) >= nTokens)
        throw ParseError("line " + std::to_string(lineNo) + ": " + name + " span out of bounds");
    return Span{static_cast<std::size_t>(s), static_cast<std::size_t>(e)};
}

Instance instance_from_json(const json& j, std::size_t lineNo, bool requireLabel) {
    Instance inst;
    if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_array() || j["tokens"].empty())
        throw ParseError("line " + std::to_string(lineNo) + ": missing or empty tokens array");
    for (const auto& tj : j["tokens"]) {
        Token t;
        if (!tj.is_object() || !tj.contains("t") || !tj["t"].is_string())
            throw ParseError("line " + std::to_string(lineNo) + ": token missing surface field");
        t.surface = tj["t"].get<std::string>();
        if (t.surface.empty())
            throw ParseError("line " + std::to_string(lineNo) + ": empty token surface");
        t.pos = tj.value("pos", std::string{});
        t.dep = tj.value("dep", std::string{});
        inst.tokens.push_back(std::move(t));
    }
    const std::size_t n = inst.tokens.size();
    if (!j.contains("e1") || !j.contains("e2"))
        throw ParseError("line " + std::to_string(lineNo) + ": missing e1/e2 spans");
    inst.e1 = span_from_json(j["e1"], n, lineNo, "e1");
    inst.e2 = span_from_json(j["e2"], n, lineNo, "e2");
    if (inst.e1.overlaps(inst.e2))
        throw ParseError("line " + std::to_string(lineNo) + ": overlapping e1/e2 spans");
    if (inst.e2.start < inst.e1.start) std::swap(inst.e1, inst.e2);  // canonical order

    if (j.contains("other")) {
        if (!j["other"].is_array())
            throw ParseError("line " + std::to_string(lineNo) + ": other must be an array");
        for (const auto& oj : j["other"])
            inst.other.push_back(span_from_json(oj, n, lineNo, "other"));
    }
    if (requireLabel) {
        if (!j.contains("label") || !j["label"].is_number_integer())
            throw ParseError("line " + std::to_string(lineNo) + ": missing label");
        const long long y = j["label"].get<long long>();
        if (y != 0 && y != 1)
            throw ParseError("line " + std::to_string(lineNo) + ": label must be 0 or 1");
        inst.label = static_cast<int>(y);
    }
    return inst;
}

std::vector<Instance> load_instances(const std::string& path, bool requireLabel) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<Instance> out;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineNo) + ": " + e.what());
        }
        out.push_back(instance_from_json(j, lineNo, requireLabel));
    }
    return out;
}

bool looks_like_header(const std::vector<std::string>& fields) {
    if (fields.size() != 2) return false;
    for (const auto& f : fields)
        if (f.find_first_not_of("0123456789") != std::string::npos) return false;
    return true;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream iss(line);
    std::string f;
    while (iss >> f) fields.push_back(std::move(f));
    return fields;
}

}  // namespace

EmbeddingTable EmbeddingTable::build(std::size_t dim,
                                     const std::vector<std::pair<std::string, Vector>>& entries) {
    EmbeddingTable t;
    t.vectors_ = Matrix(entries.size() + 1, dim);
    double nMax = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& [word, vec] = entries[i];
        if (vec.size() != dim) throw DimensionError("embedding vector dimension mismatch");
        if (t.index_.count(word)) continue;  // keep the first occurrence
        t.index_[word] = t.words_.size();
        for (std::size_t c = 0; c < dim; ++c) {
            t.vectors_(t.words_.size(), c) = vec[c];
            nMax = std::max(nMax, std::fabs(vec[c]));
        }
        t.words_.push_back(word);
    }
    // Drop rows left empty by duplicate words.
    if (t.words_.size() + 1 != t.vectors_.rows()) {
        Matrix trimmed(t.words_.size() + 1, dim);
        for (std::size_t r = 0; r < t.words_.size(); ++r)
            std::copy(t.vectors_.row(r), t.vectors_.row(r) + dim, trimmed.row(r));
        t.vectors_ = std::move(trimmed);
    }
    RandomSource rng(kUnkSeed);
    for (std::size_t c = 0; c < dim; ++c) t.vectors_(t.words_.size(), c) = rng.uniform(-0.05, 0.05);
    t.nMax_ = nMax;
    return t;
}

EmbeddingTable EmbeddingTable::restore(std::vector<std::string> words, Matrix vectors,
                                       double nMax) {
    if (vectors.rows() != words.size() + 1)
        throw DimensionError("embedding restore: row count must be word count + 1");
    EmbeddingTable t;
    t.words_ = std::move(words);
    t.vectors_ = std::move(vectors);
    t.nMax_ = nMax;
    for (std::size_t i = 0; i < t.words_.size(); ++i) t.index_[t.words_[i]] = i;
    return t;
}

std::size_t EmbeddingTable::row_of(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? unk_row() : it->second;
}

std::vector<Instance> load_corpus(const std::string& path) { return load_instances(path, true); }

std::vector<Instance> load_unlabeled(const std::string& path) {
    auto out = load_instances(path, false);
    for (auto& inst : out) inst.label.reset();
    return out;
}

std::string serialize_instance(const Instance& inst) {
    json j;
    json toks = json::array();
    for (const auto& t : inst.tokens) toks.push_back({{"t", t.surface}, {"pos", t.pos}, {"dep", t.dep}});
    j["tokens"] = std::move(toks);
    j["e1"] = {inst.e1.start, inst.e1.end};
    j["e2"] = {inst.e2.start, inst.e2.end};
    json other = json::array();
    for (const auto& s : inst.other) other.push_back({s.start, s.end});
    j["other"] = std::move(other);
    if (inst.label) j["label"] = *inst.label;
    return j.dump();
}

void save_instances(const std::string& path, std::span<const Instance> instances) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& inst : instances) out << serialize_instance(inst) << '\n';
}

std::vector<Sentence> load_sentences(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<Sentence> out;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineNo) + ": " + e.what());
        }
        Sentence s;
        if (!j.contains("tokens") || !j["tokens"].is_array() || j["tokens"].empty())
            throw ParseError("line " + std::to_string(lineNo) + ": missing or empty tokens array");
        for (const auto& tj : j["tokens"]) {
            Token t;
            t.surface = tj.at("t").get<std::string>();
            t.pos = tj.value("pos", std::string{});
            t.dep = tj.value("dep", std::string{});
            s.tokens.push_back(std::move(t));
        }
        if (j.contains("entities")) {
            for (const auto& ej : j["entities"])
                s.entities.push_back(span_from_json(ej, s.tokens.size(), lineNo, "entities"));
        }
        out.push_back(std::move(s));
    }
    return out;
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::pair<std::string, Vector>> entries;
    std::string line;
    std::size_t lineNo = 0;
    std::size_t dim = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineNo;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (first && looks_like_header(fields)) {
            first = false;
            continue;  // `count dim` header
        }
        first = false;
        if (fields.size() < 2)
            throw ParseError("line " + std::to_string(lineNo) + ": expected word and vector");
        if (dim == 0) dim = fields.size() - 1;
        if (fields.size() - 1 != dim)
            throw ParseError("line " + std::to_string(lineNo) + ": inconsistent dimension (got " +
                             std::to_string(fields.size() - 1) + ", expected " +
                             std::to_string(dim) + ")");
        Vector v(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            std::istringstream iss(fields[i + 1]);
            iss >> v[i];
            if (iss.fail() || !iss.eof())
                throw ParseError("line " + std::to_string(lineNo) + ": non-numeric field '" +
                                 fields[i + 1] + "'");
        }
        entries.emplace_back(fields[0], std::move(v));
    }
    if (entries.empty()) throw ParseError("no embedding records in " + path);
    auto table = EmbeddingTable::build(dim, entries);
    if (table.n_max() == 0.0)
        throw ValueError("degenerate embedding table: every component is zero");
    return table;
}

void normalize_embeddings(EmbeddingTable& table) {
    const double nMax = table.n_max();
    if (nMax == 0.0) throw ValueError("normalize_embeddings: nMax is zero");
    scale_inplace(table.vectors(), 1.0 / nMax);
    double fresh = 0.0;
    for (std::size_t r = 0; r < table.word_count(); ++r)
        for (std::size_t c = 0; c < table.dim(); ++c)
            fresh = std::max(fresh, std::fabs(table.vectors()(r, c)));
    table.set_n_max(fresh);
}

std::vector<Instance> generate_unlabeled(std::span<const Sentence> sentences) {
    std::vector<Instance> out;
    for (const auto& s : sentences) {
        if (s.entities.size() < 2) continue;
        auto spans = s.entities;
        std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
            return a.start != b.start ? a.start < b.start : a.end < b.end;
        });
        for (std::size_t i = 0; i < spans.size(); ++i) {
            for (std::size_t j = i + 1; j < spans.size(); ++j) {
                if (spans[i].overlaps(spans[j])) continue;  // nested/overlapping mentions
                Instance inst;
                inst.tokens = s.tokens;
                inst.e1 = spans[i];
                inst.e2 = spans[j];
                for (std::size_t m = 0; m < spans.size(); ++m)
                    if (m != i && m != j) inst.other.push_back(spans[m]);
                out.push_back(std::move(inst));
            }
        }
    }
    return out;
}

std::vector<Instance> strip_labels(std::span<const Instance> instances) {
    std::vector<Instance> out(instances.begin(), instances.end());
    for (auto& inst : out) inst.label.reset();
    return out;
}

std::uint64_t instance_content_hash(const Instance& inst) {
    Instance copy = inst;
    copy.label.reset();
    const std::string s = serialize_instance(copy);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::vector<std::vector<std::size_t>> split_folds(std::size_t n, std::size_t k,
                                                  std::uint64_t seed) {
    if (k < 2) throw ValueError("split_folds: k must be at least 2");
    if (k > n) throw ValueError("split_folds: more folds than instances");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    RandomSource rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t j = 0; j < n; ++j) folds[j % k].push_back(order[j]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

}  // namespace advreg::corpus
