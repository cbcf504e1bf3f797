// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groundcite/arxiv.hpp"
#include "groundcite/content_hash.hpp"
#include "groundcite/corpus_store.hpp"
#include "groundcite/embed_gateway.hpp"

namespace groundcite {

/// paper id -> content hash of the last synchronized metadata.
class HashIndex {
public:
    std::optional<Digest> find(const std::string& paper_id) const;
    void set(const std::string& paper_id, const Digest& hash) { entries_[paper_id] = hash; }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<std::string, Digest>& entries() const noexcept { return entries_; }

    /// Binary file: "CGHX", u32 version, u64 count, then per entry a
    /// u32-length-prefixed id and the 32-byte digest (ascending id order).
    std::string encode() const;
    static HashIndex decode(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    /// Missing file -> empty index.
    static HashIndex load(const std::filesystem::path& path);

    friend bool operator==(const HashIndex&, const HashIndex&) = default;

private:
    std::map<std::string, Digest> entries_;
};

enum class SyncKind { kNoChange, kUpdate, kInsert };
const char* sync_kind_name(SyncKind k) noexcept;

struct SyncAction {
    SyncKind kind = SyncKind::kNoChange;
    std::string paper_id;
    Digest new_hash{};
};

/// Id known with the same hash -> NoChange; id known with a different hash
/// -> Update; unknown id -> Insert.
SyncAction classify(const PaperMetadata& record, const HashIndex& index);

/// Topic model hook used on insert.
class TopicAssigner {
public:
    virtual ~TopicAssigner() = default;
    virtual std::int64_t assign(const PaperMetadata& record, const EmbeddingVector& embedding) = 0;
};

/// Default when no topic model is configured: always kNoTopic.
class NullTopicAssigner final : public TopicAssigner {
public:
    std::int64_t assign(const PaperMetadata&, const EmbeddingVector&) override { return kNoTopic; }
};

struct SyncFailure {
    std::string paper_id;  // "line <n>" when the line could not be parsed
    std::string reason;

    friend bool operator==(const SyncFailure&, const SyncFailure&) = default;
};

/// Applies one classified record. NoChange touches nothing; Update re-embeds,
/// upserts (keeping the stored topic) and refreshes the hash; Insert embeds,
/// assigns a topic, upserts and adds the hash. An embedding failure is
/// appended to `failures` and leaves store and index unchanged. Returns true
/// when the action was applied.
bool apply(const SyncAction& action, const PaperMetadata& record, CorpusStore& store, HashIndex& index,
           const Embedder& embedder, TopicAssigner& topics, std::vector<SyncFailure>& failures);

struct SyncReport {
    std::size_t no_change = 0;
    std::size_t updated = 0;
    std::size_t inserted = 0;
    std::size_t lines_read = 0;    // non-blank snapshot lines
    std::size_t records_read = 0;  // lines_read minus superseded duplicates
    std::size_t batch_count = 0;
    bool dry_run = false;
    std::chrono::milliseconds duration{0};
    std::vector<SyncFailure> failures;
    std::vector<std::string> warnings;

    /// no_change + updated + inserted == records_read - failures.size()
    std::size_t applied_total() const noexcept { return no_change + updated + inserted; }

    /// Everything except the wall-clock duration.
    bool same_outcome(const SyncReport& other) const;
};

void to_json(nlohmann::json& j, const SyncReport& r);

struct SyncOptions {
    std::size_t batch_size = 512;
    bool dry_run = false;
};

/// Synchronizes `store`/`index` with a metadata dump (one JSON object per
/// line). The stream must be seekable: a first pass finds the last
/// occurrence of every id (earlier duplicates are skipped with a warning);
/// the second pass processes records in batches, embedding only
/// Update/Insert records. Malformed lines, bad ids and records without an
/// abstract are reported and skipped. Records missing from the dump are kept.
SyncReport reload(std::istream& snapshot, CorpusStore& store, HashIndex& index, const Embedder& embedder,
                  TopicAssigner& topics, const SyncOptions& opts = {});
SyncReport reload(const std::filesystem::path& snapshot, CorpusStore& store, HashIndex& index,
                  const Embedder& embedder, TopicAssigner& topics, const SyncOptions& opts = {});

/// Rebuilds the hash index from the store contents.
HashIndex index_from_store(const CorpusStore& store);

}  // namespace groundcite
