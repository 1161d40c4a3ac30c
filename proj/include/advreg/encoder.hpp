#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "advreg/corpus.hpp"
#include "advreg/matrix.hpp"
#include "advreg/random.hpp"

namespace advreg::encoder {

// Distances are clipped to this radius; the distance table has
// 2*kDistClip + 1 rows keyed by distance + kDistClip.
inline constexpr int kDistClip = 50;
inline constexpr std::size_t kDistRows = 2 * kDistClip + 1;
inline constexpr std::size_t kEntTypeDim = 4;  // Entity1, Entity2, Entity, O

// Contiguous column blocks of the assembled input matrix. Defaults follow
// the 200/10/10/5/5/4 feature dimensions (D = 234).
struct FeatureLayout {
    std::size_t embDim = 200;
    std::size_t posDim = 10;
    std::size_t depDim = 10;
    std::size_t distDim = 5;

    std::size_t embBegin() const { return 0; }
    std::size_t posBegin() const { return embDim; }
    std::size_t depBegin() const { return embDim + posDim; }
    std::size_t dist1Begin() const { return embDim + posDim + depDim; }
    std::size_t dist2Begin() const { return dist1Begin() + distDim; }
    std::size_t entBegin() const { return dist2Begin() + distDim; }
    std::size_t totalDim() const { return entBegin() + kEntTypeDim; }

    // Half-open column ranges: embedding, pos, dep, dist1, dist2, entity type.
    std::array<std::pair<std::size_t, std::size_t>, 6> blocks() const {
        return {{{embBegin(), posBegin()},
                 {posBegin(), depBegin()},
                 {depBegin(), dist1Begin()},
                 {dist1Begin(), dist2Begin()},
                 {dist2Begin(), entBegin()},
                 {entBegin(), totalDim()}}};
    }

    void validate() const;
    bool operator==(const FeatureLayout&) const = default;
};

// Learned lookup table keyed by tag string; row 0 is the UNK row that every
// unseen tag maps to. Rows are trainable parameters.
class TagTable {
public:
    TagTable() = default;
    TagTable(std::size_t dim, RandomSource& rng);
    static TagTable restore(std::vector<std::string> tags, Matrix rows);

    void add(const std::string& tag, RandomSource& rng);
    std::size_t id(const std::string& tag) const;

    std::size_t dim() const { return rows_.cols(); }
    std::size_t size() const { return rows_.rows(); }
    Matrix& rows() { return rows_; }
    const Matrix& rows() const { return rows_; }
    const std::vector<std::string>& tags() const { return tags_; }

private:
    std::vector<std::string> tags_;
    std::unordered_map<std::string, std::size_t> index_;
    Matrix rows_;
};

// The trainable feature lookups: POS tags, dependency labels, and the shared
// clipped-distance table used by both positional blocks.
struct FeatureTables {
    TagTable pos;
    TagTable dep;
    Matrix dist;  // kDistRows x distDim

    // Registers every tag seen in the given instances (first-encounter order)
    // and initializes all rows uniform(-0.05, 0.05).
    static FeatureTables build(const FeatureLayout& layout,
                               std::span<const corpus::Instance> labeled,
                               std::span<const corpus::Instance> unlabeled, RandomSource& rng);
};

enum class PerturbScope { Embedding, All };

// Index-level encoding of one instance; stable across parameter updates, so
// it is computed once and re-materialized per step as the lookups train.
struct EncodedSkeleton {
    std::vector<std::size_t> tokenRows;
    std::vector<std::size_t> posRows;
    std::vector<std::size_t> depRows;
    std::vector<std::size_t> dist1Rows;
    std::vector<std::size_t> dist2Rows;
    std::vector<int> entType;  // 0=Entity1, 1=Entity2, 2=Entity, 3=O
    std::size_t validLen = 0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::optional<int> label;
};

// The model input: x plus the {0,1} perturbation mask, segment boundaries,
// and the lookup row ids used to route input gradients back into the tables.
// Rows >= validLen are all-zero and fully masked.
struct EncodedInstance {
    Matrix x;     // maxLen x D
    Matrix mask;  // maxLen x D
    std::size_t validLen = 0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::optional<int> label;
    FeatureLayout layout;
    std::vector<std::size_t> tokenRows;
    std::vector<std::size_t> posRows;
    std::vector<std::size_t> depRows;
    std::vector<std::size_t> dist1Rows;
    std::vector<std::size_t> dist2Rows;
};

// 0 inside the span, otherwise the signed token count to the nearest span
// boundary (negative left of the span), clipped to [-kDistClip, kDistClip].
int relative_distance(std::size_t tokenIdx, corpus::Span span);

// Entity tokens close segments one and two: s1/s2 are the last token indices
// of e1/e2.
std::pair<std::size_t, std::size_t> segment_boundaries(corpus::Span e1, corpus::Span e2);

// Throws EncodeSkipError when an entity falls beyond maxLen after pruning.
EncodedSkeleton prepare(const corpus::Instance& inst, const FeatureTables& tables,
                        const corpus::EmbeddingTable& embeddings, std::size_t maxLen);

void materialize_into(EncodedInstance& out, const EncodedSkeleton& sk,
                      const FeatureLayout& layout, const FeatureTables& tables,
                      const corpus::EmbeddingTable& embeddings, PerturbScope scope,
                      std::size_t maxLen);

EncodedInstance encode(const corpus::Instance& inst, const FeatureLayout& layout,
                       const FeatureTables& tables, const corpus::EmbeddingTable& embeddings,
                       PerturbScope scope, std::size_t maxLen = 100);

}  // namespace advreg::encoder
