#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "advreg/matrix.hpp"

namespace advreg::corpus {

// Inclusive token-index range.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;
    bool contains(std::size_t i) const { return i >= start && i <= end; }
    bool overlaps(const Span& o) const { return start <= o.end && o.start <= end; }
    bool operator==(const Span&) const = default;
};

struct Token {
    std::string surface;
    std::string pos;
    std::string dep;  // incoming dependency relation label
    bool operator==(const Token&) const = default;
};

// A tokenized sentence with the two target entity spans, any remaining
// entity mentions, and (for labeled data) a binary relation label.
// e1 always precedes e2 after loading.
struct Instance {
    std::vector<Token> tokens;
    Span e1;
    Span e2;
    std::vector<Span> other;
    std::optional<int> label;  // 0/1; empty for unlabeled instances
    bool operator==(const Instance&) const = default;
};

// Raw sentence with all recognized entity mentions; the input to unlabeled
// instance generation.
struct Sentence {
    std::vector<Token> tokens;
    std::vector<Span> entities;
};

// Word -> vector table with a synthetic UNK row (drawn uniform(-0.05, 0.05)
// from a fixed seed). nMax is the largest absolute component over the loaded
// vectors and feeds the normalization step.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    static EmbeddingTable build(std::size_t dim,
                                const std::vector<std::pair<std::string, Vector>>& entries);
    static EmbeddingTable restore(std::vector<std::string> words, Matrix vectors, double nMax);

    std::size_t dim() const { return vectors_.cols(); }
    std::size_t word_count() const { return words_.size(); }
    double n_max() const { return nMax_; }

    std::size_t unk_row() const { return vectors_.rows() - 1; }
    std::size_t row_of(const std::string& word) const;
    const double* vector_of(const std::string& word) const { return vectors_.row(row_of(word)); }

    Matrix& vectors() { return vectors_; }
    const Matrix& vectors() const { return vectors_; }
    const std::vector<std::string>& words() const { return words_; }

    void set_n_max(double v) { nMax_ = v; }

private:
    std::vector<std::string> words_;  // row i, for i < word_count(); last row is UNK
    std::unordered_map<std::string, std::size_t> index_;
    Matrix vectors_;  // (word_count + 1) x dim
    double nMax_ = 0.0;
};

// One JSON object per line:
//   {"tokens":[{"t":..,"pos":..,"dep":..},...],"e1":[s,e],"e2":[s,e],
//    "other":[[s,e],...],"label":0|1}
// Unlabeled files omit "label". Spans are inclusive token-index pairs.
// Instances with e2 before e1 are canonicalized by swapping the roles.
std::vector<Instance> load_corpus(const std::string& path);
std::vector<Instance> load_unlabeled(const std::string& path);

std::string serialize_instance(const Instance& inst);
void save_instances(const std::string& path, std::span<const Instance> instances);

// Sentence file, one JSON object per line: {"tokens":[...],"entities":[[s,e],...]}.
std::vector<Sentence> load_sentences(const std::string& path);

// Plain text embeddings: `word v1 ... vD` per line, optional `count dim`
// header auto-detected. Fails when every component is zero (nMax == 0).
EmbeddingTable load_embeddings(const std::string& path);

// v <- v / nMax componentwise for every vector including UNK; recomputes
// nMax, so a second call rescales by 1 and is the identity.
void normalize_embeddings(EmbeddingTable& table);

// One instance per unordered pair of distinct entity spans per sentence; the
// remaining spans become otherEntities. Sentences with fewer than two
// entities yield nothing.
std::vector<Instance> generate_unlabeled(std::span<const Sentence> sentences);

std::vector<Instance> strip_labels(std::span<const Instance> instances);

// FNV-1a over the canonical serialized form, label excluded.
std::uint64_t instance_content_hash(const Instance& inst);

// Seeded shuffle then round-robin assignment; folds are disjoint, exhaustive,
// and their sizes differ by at most one.
std::vector<std::vector<std::size_t>> split_folds(std::size_t n, std::size_t k,
                                                  std::uint64_t seed);

}  // namespace advreg::corpus
