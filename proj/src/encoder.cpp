#include "advreg/encoder.hpp"

#include <algorithm>
#include <cstring>

namespace advreg::encoder {

void FeatureLayout::validate() const {
    if (embDim == 0 || posDim == 0 || depDim == 0 || distDim == 0)
        throw ConfigError("feature layout: all block dimensions must be positive");
}

TagTable::TagTable(std::size_t dim, RandomSource& rng) : rows_(1, dim) {
    tags_.push_back("<unk>");
    index_["<unk>"] = 0;
    for (std::size_t c = 0; c < dim; ++c) rows_(0, c) = rng.uniform(-0.05, 0.05);
}

TagTable TagTable::restore(std::vector<std::string> tags, Matrix rows) {
    if (tags.size() != rows.rows()) throw DimensionError("tag table restore: row count mismatch");
    TagTable t;
    t.tags_ = std::move(tags);
    t.rows_ = std::move(rows);
    for (std::size_t i = 0; i < t.tags_.size(); ++i) t.index_[t.tags_[i]] = i;
    return t;
}

void TagTable::add(const std::string& tag, RandomSource& rng) {
    if (index_.count(tag)) return;
    const std::size_t dim = rows_.cols();
    Matrix grown(rows_.rows() + 1, dim);
    std::copy(rows_.data().begin(), rows_.data().end(), grown.data().begin());
    for (std::size_t c = 0; c < dim; ++c) grown(rows_.rows(), c) = rng.uniform(-0.05, 0.05);
    index_[tag] = rows_.rows();
    tags_.push_back(tag);
    rows_ = std::move(grown);
}

std::size_t TagTable::id(const std::string& tag) const {
    auto it = index_.find(tag);
    return it == index_.end() ? 0 : it->second;
}

FeatureTables FeatureTables::build(const FeatureLayout& layout,
                                   std::span<const corpus::Instance> labeled,
                                   std::span<const corpus::Instance> unlabeled,
                                   RandomSource& rng) {
    layout.validate();
    FeatureTables t;
    t.pos = TagTable(layout.posDim, rng);
    t.dep = TagTable(layout.depDim, rng);
    auto register_tags = [&](std::span<const corpus::Instance> instances) {
        for (const auto& inst : instances) {
            for (const auto& tok : inst.tokens) {
                t.pos.add(tok.pos, rng);
                t.dep.add(tok.dep, rng);
            }
        }
    };
    register_tags(labeled);
    register_tags(unlabeled);
    t.dist = Matrix(kDistRows, layout.distDim);
    for (double& v : t.dist.data()) v = rng.uniform(-0.05, 0.05);
    return t;
}

int relative_distance(std::size_t tokenIdx, corpus::Span span) {
    long d = 0;
    if (tokenIdx < span.start)
        d = -static_cast<long>(span.start - tokenIdx);
    else if (tokenIdx > span.end)
        d = static_cast<long>(tokenIdx - span.end);
    return static_cast<int>(std::clamp(d, -static_cast<long>(kDistClip),
                                       static_cast<long>(kDistClip)));
}

std::pair<std::size_t, std::size_t> segment_boundaries(corpus::Span e1, corpus::Span e2) {
    if (e1.overlaps(e2) || e1.end >= e2.start)
        throw ValueError("segment_boundaries: entity spans must be disjoint and ordered");
    return {e1.end, e2.end};
}

EncodedSkeleton prepare(const corpus::Instance& inst, const FeatureTables& tables,
                        const corpus::EmbeddingTable& embeddings, std::size_t maxLen) {
    if (inst.tokens.empty()) throw ValueError("encode: empty instance");
    if (inst.e2.end >= maxLen || inst.e1.end >= maxLen)
        throw EncodeSkipError("entity beyond maximum sentence length; instance skipped");
    auto [s1, s2] = segment_boundaries(inst.e1, inst.e2);

    EncodedSkeleton sk;
    sk.validLen = std::min(inst.tokens.size(), maxLen);
    sk.s1 = s1;
    sk.s2 = s2;
    sk.label = inst.label;
    sk.tokenRows.resize(sk.validLen);
    sk.posRows.resize(sk.validLen);
    sk.depRows.resize(sk.validLen);
    sk.dist1Rows.resize(sk.validLen);
    sk.dist2Rows.resize(sk.validLen);
    sk.entType.assign(sk.validLen, 3);

    for (std::size_t i = 0; i < sk.validLen; ++i) {
        const auto& tok = inst.tokens[i];
        sk.tokenRows[i] = embeddings.row_of(tok.surface);
        sk.posRows[i] = tables.pos.id(tok.pos);
        sk.depRows[i] = tables.dep.id(tok.dep);
        sk.dist1Rows[i] = static_cast<std::size_t>(relative_distance(i, inst.e1) + kDistClip);
        sk.dist2Rows[i] = static_cast<std::size_t>(relative_distance(i, inst.e2) + kDistClip);
        if (inst.e1.contains(i))
            sk.entType[i] = 0;
        else if (inst.e2.contains(i))
            sk.entType[i] = 1;
        else {
            for (const auto& o : inst.other) {
                if (o.contains(i)) {
                    sk.entType[i] = 2;
                    break;
                }
            }
        }
    }
    return sk;
}

void materialize_into(EncodedInstance& out, const EncodedSkeleton& sk,
                      const FeatureLayout& layout, const FeatureTables& tables,
                      const corpus::EmbeddingTable& embeddings, PerturbScope scope,
                      std::size_t maxLen) {
    const std::size_t D = layout.totalDim();
    if (out.x.rows() != maxLen || out.x.cols() != D) {
        out.x = Matrix(maxLen, D);
        out.mask = Matrix(maxLen, D);
    } else {
        // Clear only the rows the previous occupant touched.
        const std::size_t stale = std::min(out.validLen, maxLen);
        for (std::size_t r = 0; r < stale; ++r) {
            std::memset(out.x.row(r), 0, D * sizeof(double));
            std::memset(out.mask.row(r), 0, D * sizeof(double));
        }
    }
    out.validLen = sk.validLen;
    out.s1 = sk.s1;
    out.s2 = sk.s2;
    out.label = sk.label;
    out.layout = layout;
    out.tokenRows = sk.tokenRows;
    out.posRows = sk.posRows;
    out.depRows = sk.depRows;
    out.dist1Rows = sk.dist1Rows;
    out.dist2Rows = sk.dist2Rows;

    if (embeddings.dim() != layout.embDim)
        throw DimensionError("encode: embedding dimension does not match layout");
    if (tables.pos.dim() != layout.posDim || tables.dep.dim() != layout.depDim ||
        tables.dist.cols() != layout.distDim)
        throw DimensionError("encode: table dimensions do not match layout");

    for (std::size_t i = 0; i < sk.validLen; ++i) {
        double* row = out.x.row(i);
        std::memcpy(row + layout.embBegin(), embeddings.vectors().row(sk.tokenRows[i]),
                    layout.embDim * sizeof(double));
        std::memcpy(row + layout.posBegin(), tables.pos.rows().row(sk.posRows[i]),
                    layout.posDim * sizeof(double));
        std::memcpy(row + layout.depBegin(), tables.dep.rows().row(sk.depRows[i]),
                    layout.depDim * sizeof(double));
        std::memcpy(row + layout.dist1Begin(), tables.dist.row(sk.dist1Rows[i]),
                    layout.distDim * sizeof(double));
        std::memcpy(row + layout.dist2Begin(), tables.dist.row(sk.dist2Rows[i]),
                    layout.distDim * sizeof(double));
        row[layout.entBegin() + static_cast<std::size_t>(sk.entType[i])] = 1.0;

        double* mrow = out.mask.row(i);
        const std::size_t maskEnd = scope == PerturbScope::All ? D : layout.posBegin();
        for (std::size_t c = 0; c < maskEnd; ++c) mrow[c] = 1.0;
    }
}

EncodedInstance encode(const corpus::Instance& inst, const FeatureLayout& layout,
                       const FeatureTables& tables, const corpus::EmbeddingTable& embeddings,
                       PerturbScope scope, std::size_t maxLen) {
    const EncodedSkeleton sk = prepare(inst, tables, embeddings, maxLen);
    EncodedInstance out;
    materialize_into(out, sk, layout, tables, embeddings, scope, maxLen);
    return out;
}

}  // namespace advreg::encoder
