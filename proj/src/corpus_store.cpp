// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/corpus_store.hpp"

#include <algorithm>
#include <mutex>

#include "binary_io.hpp"
#include "groundcite/error.hpp"

namespace groundcite {

PaperMetadata PaperRecord::metadata() const {
    return PaperMetadata{arxiv_id, title, authors, abstract, updated_at.time_since_epoch().count() == 0
                                                                 ? std::string{}
                                                                 : format_utc_date(updated_at)};
}

PaperRecord make_record(const PaperMetadata& meta, EmbeddingVector embedding, std::int64_t topic_id) {
    PaperRecord r;
    r.arxiv_id = meta.arxiv_id;
    r.title = meta.title;
    r.authors = meta.authors;
    r.abstract = meta.abstract;
    r.embedding = std::move(embedding);
    r.topic_id = topic_id;
    r.content_hash = content_hash(meta);
    r.updated_at = parse_utc_date(meta.update_date);
    return r;
}

FlatCorpusStore::FlatCorpusStore(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw validation_error("dim", "store dimension must be positive");
}

FlatCorpusStore::FlatCorpusStore(FlatCorpusStore&& other) noexcept
    : dim_(other.dim_), records_(std::move(other.records_)), slot_(std::move(other.slot_)) {}

void FlatCorpusStore::validate(const PaperRecord& r) const {
    if (r.arxiv_id.empty()) throw validation_error("arxiv_id", "record id is empty");
    if (r.embedding.dim() != dim_) {
        throw validation_error("embedding", "dimension mismatch: store " + std::to_string(dim_) + ", record " +
                                                std::to_string(r.embedding.dim()));
    }
}

void FlatCorpusStore::upsert(PaperRecord record) {
    validate(record);
    std::unique_lock lock(mu_);
    if (auto it = slot_.find(record.arxiv_id); it != slot_.end()) {
        records_[it->second] = std::move(record);
        return;
    }
    slot_.emplace(record.arxiv_id, records_.size());
    records_.push_back(std::move(record));
}

std::optional<PaperRecord> FlatCorpusStore::get(const std::string& arxiv_id) const {
    std::shared_lock lock(mu_);
    auto it = slot_.find(arxiv_id);
    if (it == slot_.end()) return std::nullopt;
    return records_[it->second];
}

void FlatCorpusStore::erase(const std::string& arxiv_id) {
    std::unique_lock lock(mu_);
    auto it = slot_.find(arxiv_id);
    if (it == slot_.end()) return;
    const std::size_t pos = it->second;
    slot_.erase(it);
    if (pos + 1 != records_.size()) {
        records_[pos] = std::move(records_.back());
        slot_[records_[pos].arxiv_id] = pos;
    }
    records_.pop_back();
}

std::size_t FlatCorpusStore::count() const {
    std::shared_lock lock(mu_);
    return records_.size();
}

std::vector<SearchHit> FlatCorpusStore::search(const EmbeddingVector& query, std::size_t k,
                                               std::optional<std::int64_t> topic_filter) const {
    if (k == 0) throw validation_error("k", "k must be at least 1");
    if (query.dim() != dim_) {
        throw validation_error("query", "dimension mismatch: store " + std::to_string(dim_) + ", query " +
                                            std::to_string(query.dim()));
    }
    std::shared_lock lock(mu_);
    std::vector<SearchHit> hits;
    hits.reserve(records_.size());
    for (const auto& r : records_) {
        if (topic_filter && r.topic_id != *topic_filter) continue;
        hits.push_back({r.arxiv_id, dot(query.values(), r.embedding.values())});
    }
    lock.unlock();

    const std::size_t n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), hit_before);
    hits.resize(n);
    return hits;
}

std::vector<std::string> FlatCorpusStore::ids() const {
    std::vector<std::string> out;
    {
        std::shared_lock lock(mu_);
        out.reserve(records_.size());
        for (const auto& r : records_) out.push_back(r.arxiv_id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void FlatCorpusStore::save(const std::filesystem::path& path) const {
    std::vector<PaperRecord> sorted;
    {
        std::shared_lock lock(mu_);
        sorted = records_;
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const PaperRecord& a, const PaperRecord& b) { return a.arxiv_id < b.arxiv_id; });
    detail::write_file_atomic(path, encode_snapshot(dim_, sorted));
}

FlatCorpusStore FlatCorpusStore::load(const std::filesystem::path& path) {
    auto [dim, records] = decode_snapshot(detail::read_file(path));
    FlatCorpusStore store(dim);
    for (auto& r : records) store.upsert(std::move(r));
    return store;
}

std::string encode_snapshot(std::size_t dim, const std::vector<PaperRecord>& records_sorted) {
    detail::ByteWriter w;
    w.raw(kSnapshotMagic, 4);
    w.u32(kSnapshotVersion);
    w.u32(static_cast<std::uint32_t>(dim));
    w.u64(records_sorted.size());
    for (const auto& r : records_sorted) {
        detail::ByteWriter rec;
        rec.str(r.arxiv_id);
        rec.str(r.title);
        rec.u32(static_cast<std::uint32_t>(r.authors.size()));
        for (const auto& a : r.authors) rec.str(a);
        rec.str(r.abstract);
        rec.i64(r.topic_id);
        rec.raw(r.content_hash.data(), r.content_hash.size());
        rec.i64(r.updated_at.time_since_epoch().count());
        for (double v : r.embedding.values()) rec.f64(v);
        w.str(rec.bytes());
    }
    return std::move(w.bytes());
}

std::pair<std::size_t, std::vector<PaperRecord>> decode_snapshot(std::string_view bytes) {
    detail::ByteReader r(bytes);
    if (r.raw(4) != std::string_view(kSnapshotMagic, 4)) throw Error(ErrorCode::kParse, "not a store snapshot (bad magic)");
    const auto version = r.u32();
    if (version != kSnapshotVersion) {
        throw Error(ErrorCode::kParse, "unsupported snapshot version " + std::to_string(version));
    }
    const std::size_t dim = r.u32();
    const std::uint64_t n = r.u64();
    std::vector<PaperRecord> out;
    out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 20)));
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::string blob = r.str();
        detail::ByteReader rr(blob);
        PaperRecord rec;
        rec.arxiv_id = rr.str();
        rec.title = rr.str();
        const auto n_authors = rr.u32();
        for (std::uint32_t a = 0; a < n_authors; ++a) rec.authors.push_back(rr.str());
        rec.abstract = rr.str();
        rec.topic_id = rr.i64();
        const auto hash = rr.raw(32);
        std::copy(hash.begin(), hash.end(), rec.content_hash.begin());
        rec.updated_at = std::chrono::sys_seconds{std::chrono::seconds{rr.i64()}};
        std::vector<double> v(dim);
        for (auto& x : v) x = rr.f64();
        if (!rr.at_end()) throw Error(ErrorCode::kParse, "record " + rec.arxiv_id + " has trailing bytes");
        rec.embedding = EmbeddingVector::from_unit(std::move(v));
        out.push_back(std::move(rec));
    }
    if (!r.at_end()) throw Error(ErrorCode::kParse, "snapshot has trailing bytes");
    return {dim, std::move(out)};
}

}  // namespace groundcite
