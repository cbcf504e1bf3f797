// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "groundcite/arxiv.hpp"
#include "groundcite/content_hash.hpp"
#include "groundcite/embedding.hpp"

namespace groundcite {

inline constexpr std::int64_t kNoTopic = -1;
inline constexpr std::size_t kDefaultEmbeddingDim = 768;

struct PaperRecord {
    std::string arxiv_id;
    std::string title;
    std::vector<std::string> authors;
    std::string abstract;
    EmbeddingVector embedding;
    std::int64_t topic_id = kNoTopic;
    Digest content_hash{};
    std::chrono::sys_seconds updated_at{};

    PaperMetadata metadata() const;

    friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

/// Builds a record from dump metadata, computing its content hash.
PaperRecord make_record(const PaperMetadata& meta, EmbeddingVector embedding, std::int64_t topic_id = kNoTopic);

struct SearchHit {
    std::string arxiv_id;
    double similarity = 0.0;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Similarity descending, ties by ascending id.
inline bool hit_before(const SearchHit& a, const SearchHit& b) noexcept {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.arxiv_id < b.arxiv_id;
}

/// Vector + metadata store over paper records.
///
/// Implementations must allow concurrent readers and serialize writers; a
/// search concurrent with a write observes either the pre- or post-write
/// state.
class CorpusStore {
public:
    virtual ~CorpusStore() = default;

    virtual std::size_t dim() const = 0;
    virtual void upsert(PaperRecord record) = 0;
    virtual std::optional<PaperRecord> get(const std::string& arxiv_id) const = 0;
    virtual void erase(const std::string& arxiv_id) = 0;
    virtual std::size_t count() const = 0;
    /// Exact top-k by cosine similarity among records passing the topic
    /// filter, ordered per hit_before.
    virtual std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t k,
                                          std::optional<std::int64_t> topic_filter = std::nullopt) const = 0;
    /// All stored ids in ascending order.
    virtual std::vector<std::string> ids() const = 0;
};

/// In-process exact (flat) index. Records live in a dense array so a search
/// is one linear scan.
class FlatCorpusStore final : public CorpusStore {
public:
    explicit FlatCorpusStore(std::size_t dim = kDefaultEmbeddingDim);

    std::size_t dim() const override { return dim_; }
    void upsert(PaperRecord record) override;
    std::optional<PaperRecord> get(const std::string& arxiv_id) const override;
    void erase(const std::string& arxiv_id) override;
    std::size_t count() const override;
    std::vector<SearchHit> search(const EmbeddingVector& query, std::size_t k,
                                  std::optional<std::int64_t> topic_filter = std::nullopt) const override;
    std::vector<std::string> ids() const override;

    /// Writes a "CGST" snapshot (records in ascending id order).
    void save(const std::filesystem::path& path) const;
    static FlatCorpusStore load(const std::filesystem::path& path);

    FlatCorpusStore(FlatCorpusStore&& other) noexcept;
    FlatCorpusStore& operator=(FlatCorpusStore&&) = delete;
    FlatCorpusStore(const FlatCorpusStore&) = delete;
    FlatCorpusStore& operator=(const FlatCorpusStore&) = delete;

private:
    void validate(const PaperRecord& r) const;

    std::size_t dim_;
    mutable std::shared_mutex mu_;
    std::vector<PaperRecord> records_;
    std::unordered_map<std::string, std::size_t> slot_;
};

/// Snapshot codec, exposed for tools and tests.
inline constexpr char kSnapshotMagic[4] = {'C', 'G', 'S', 'T'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::string encode_snapshot(std::size_t dim, const std::vector<PaperRecord>& records_sorted);
/// Returns (dim, records). Throws a parse error on bad magic/version or
/// truncated input.
std::pair<std::size_t, std::vector<PaperRecord>> decode_snapshot(std::string_view bytes);

}  // namespace groundcite
