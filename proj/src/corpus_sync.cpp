// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/corpus_sync.hpp"

#include <fstream>
#include <istream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "groundcite/error.hpp"
#include "text_util.hpp"

namespace groundcite {

namespace {
constexpr char kIndexMagic[4] = {'C', 'G', 'H', 'X'};
constexpr std::uint32_t kIndexVersion = 1;
}  // namespace

std::optional<Digest> HashIndex::find(const std::string& paper_id) const {
    auto it = entries_.find(paper_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string HashIndex::encode() const {
    detail::ByteWriter w;
    w.raw(kIndexMagic, 4);
    w.u32(kIndexVersion);
    w.u64(entries_.size());
    for (const auto& [id, hash] : entries_) {
        w.str(id);
        w.raw(hash.data(), hash.size());
    }
    return std::move(w.bytes());
}

HashIndex HashIndex::decode(std::string_view bytes) {
    detail::ByteReader r(bytes);
    if (r.raw(4) != std::string_view(kIndexMagic, 4)) throw Error(ErrorCode::kParse, "not a hash index (bad magic)");
    if (const auto v = r.u32(); v != kIndexVersion) {
        throw Error(ErrorCode::kParse, "unsupported hash index version " + std::to_string(v));
    }
    HashIndex index;
    const auto n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string id = r.str();
        const auto raw = r.raw(32);
        Digest d{};
        std::copy(raw.begin(), raw.end(), d.begin());
        index.entries_[std::move(id)] = d;
    }
    if (!r.at_end()) throw Error(ErrorCode::kParse, "hash index has trailing bytes");
    return index;
}

void HashIndex::save(const std::filesystem::path& path) const { detail::write_file_atomic(path, encode()); }

HashIndex HashIndex::load(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return {};
    return decode(detail::read_file(path));
}

const char* sync_kind_name(SyncKind k) noexcept {
    switch (k) {
        case SyncKind::kNoChange: return "no_change";
        case SyncKind::kUpdate: return "update";
        case SyncKind::kInsert: return "insert";
    }
    return "no_change";
}

SyncAction classify(const PaperMetadata& record, const HashIndex& index) {
    SyncAction a;
    a.paper_id = record.arxiv_id;
    a.new_hash = content_hash(record);
    const auto known = index.find(record.arxiv_id);
    if (!known) {
        a.kind = SyncKind::kInsert;
    } else if (*known == a.new_hash) {
        a.kind = SyncKind::kNoChange;
    } else {
        a.kind = SyncKind::kUpdate;
    }
    return a;
}

namespace {

// A dump line that can be stored: parseable, a well-formed id, an abstract.
PaperMetadata parse_sync_record(const std::string& line) {
    PaperMetadata meta = parse_metadata_line(line);
    if (!is_valid_arxiv_id(meta.arxiv_id)) throw Error(ErrorCode::kParse, "malformed arXiv id: " + meta.arxiv_id, "id");
    if (meta.abstract.empty()) throw Error(ErrorCode::kParse, "record " + meta.arxiv_id + " has no abstract", "abstract");
    return meta;
}

void write_record(const SyncAction& action, const PaperMetadata& record, EmbeddingVector embedding,
                  CorpusStore& store, HashIndex& index, TopicAssigner& topics) {
    std::int64_t topic = kNoTopic;
    if (action.kind == SyncKind::kInsert) {
        topic = topics.assign(record, embedding);
    } else if (auto existing = store.get(record.arxiv_id)) {
        topic = existing->topic_id;
    }
    PaperRecord rec = make_record(record, std::move(embedding), topic);
    store.upsert(std::move(rec));
    index.set(action.paper_id, action.new_hash);
}

}  // namespace

bool apply(const SyncAction& action, const PaperMetadata& record, CorpusStore& store, HashIndex& index,
           const Embedder& embedder, TopicAssigner& topics, std::vector<SyncFailure>& failures) {
    if (action.kind == SyncKind::kNoChange) return true;
    EmbeddingVector embedding;
    try {
        embedding = embedder.embed_one(record.abstract);
    } catch (const Error& e) {
        failures.push_back({record.arxiv_id, std::string("embedding failed: ") + e.what()});
        return false;
    }
    write_record(action, record, std::move(embedding), store, index, topics);
    return true;
}

bool SyncReport::same_outcome(const SyncReport& o) const {
    return no_change == o.no_change && updated == o.updated && inserted == o.inserted &&
           lines_read == o.lines_read && records_read == o.records_read && dry_run == o.dry_run &&
           failures == o.failures && warnings == o.warnings;
}

void to_json(nlohmann::json& j, const SyncReport& r) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : r.failures) failures.push_back({{"paper_id", f.paper_id}, {"reason", f.reason}});
    j = {{"counts", {{"no_change", r.no_change}, {"update", r.updated}, {"insert", r.inserted}}},
         {"lines_read", r.lines_read},
         {"records_read", r.records_read},
         {"batch_count", r.batch_count},
         {"dry_run", r.dry_run},
         {"duration_ms", r.duration.count()},
         {"failures", failures},
         {"warnings", r.warnings}};
}

SyncReport reload(std::istream& snapshot, CorpusStore& store, HashIndex& index, const Embedder& embedder,
                  TopicAssigner& topics, const SyncOptions& opts) {
    if (opts.batch_size == 0) throw validation_error("batch_size", "batch_size must be at least 1");
    const auto started = std::chrono::steady_clock::now();
    SyncReport report;
    report.dry_run = opts.dry_run;

    // Pass 1: last occurrence of every id.
    std::unordered_map<std::string, std::size_t> last_line;
    {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(snapshot, line)) {
            ++lineno;
            if (detail::trim(line).empty()) continue;
            try {
                last_line[parse_sync_record(line).arxiv_id] = lineno;
            } catch (const Error&) {
                // Reported in pass 2.
            }
        }
    }
    snapshot.clear();
    snapshot.seekg(0);
    if (!snapshot) throw Error(ErrorCode::kIo, "snapshot stream is not seekable");

    std::vector<PaperMetadata> batch;
    batch.reserve(opts.batch_size);

    auto flush = [&] {
        if (batch.empty()) return;
        ++report.batch_count;
        std::vector<SyncAction> actions;
        actions.reserve(batch.size());
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            actions.push_back(classify(batch[i], index));
            switch (actions.back().kind) {
                case SyncKind::kNoChange: ++report.no_change; break;
                case SyncKind::kUpdate: ++report.updated; todo.push_back(i); break;
                case SyncKind::kInsert: ++report.inserted; todo.push_back(i); break;
            }
        }
        if (opts.dry_run || todo.empty()) {
            batch.clear();
            return;
        }

        std::vector<std::string> texts;
        texts.reserve(todo.size());
        for (std::size_t i : todo) texts.push_back(batch[i].abstract);
        std::vector<std::optional<EmbeddingVector>> vectors(todo.size());
        try {
            auto embedded = embedder.embed_texts(texts);
            for (std::size_t k = 0; k < todo.size(); ++k) vectors[k] = std::move(embedded[k]);
        } catch (const Error&) {
            // Isolate the failing records one by one.
            for (std::size_t k = 0; k < todo.size(); ++k) {
                try {
                    vectors[k] = embedder.embed_one(texts[k]);
                } catch (const Error&) {
                }
            }
        }
        for (std::size_t k = 0; k < todo.size(); ++k) {
            const auto& action = actions[todo[k]];
            if (!vectors[k]) {
                report.failures.push_back({action.paper_id, "embedding failed"});
                if (action.kind == SyncKind::kUpdate) --report.updated; else --report.inserted;
                continue;
            }
            write_record(action, batch[todo[k]], std::move(*vectors[k]), store, index, topics);
        }
        batch.clear();
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(snapshot, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        ++report.lines_read;
        PaperMetadata meta;
        try {
            meta = parse_sync_record(line);
        } catch (const Error& e) {
            ++report.records_read;
            report.failures.push_back({"line " + std::to_string(lineno), e.what()});
            continue;
        }
        if (const auto last = last_line[meta.arxiv_id]; last != lineno) {
            report.warnings.push_back("duplicate id " + meta.arxiv_id + " at line " + std::to_string(lineno) +
                                      " superseded by line " + std::to_string(last));
            continue;
        }
        ++report.records_read;
        batch.push_back(std::move(meta));
        if (batch.size() == opts.batch_size) flush();
    }
    flush();

    report.duration =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return report;
}

SyncReport reload(const std::filesystem::path& snapshot, CorpusStore& store, HashIndex& index,
                  const Embedder& embedder, TopicAssigner& topics, const SyncOptions& opts) {
    std::ifstream in(snapshot, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open snapshot " + snapshot.string());
    return reload(in, store, index, embedder, topics, opts);
}

HashIndex index_from_store(const CorpusStore& store) {
    HashIndex index;
    for (const auto& id : store.ids()) {
        if (auto rec = store.get(id)) index.set(id, rec->content_hash);
    }
    return index;
}

}  // namespace groundcite
