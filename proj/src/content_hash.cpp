// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#include "groundcite/content_hash.hpp"

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "groundcite/arxiv.hpp"
#include "groundcite/error.hpp"

namespace groundcite {

Digest compute_hash(std::span<const std::uint8_t> bytes) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size()) {
        throw Error(ErrorCode::kIo, "SHA-256 computation failed");
    }
    return out;
}

Digest compute_hash(std::string_view bytes) {
    return compute_hash(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string to_hex(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : d) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xF]);
    }
    return s;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Digest digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) throw validation_error("content_hash", "digest must be 64 hex characters");
    Digest d{};
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw validation_error("content_hash", "digest has a non-hex character");
        d[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return d;
}

std::string canonical_serialize(const nlohmann::json& fields) {
    static constexpr const char* kKeys[] = {"abstract", "authors", "id", "title"};
    // nlohmann::json objects are std::map backed, so dump() emits sorted keys.
    nlohmann::json out = nlohmann::json::object();
    if (fields.is_object()) {
        for (const char* key : kKeys) {
            if (auto it = fields.find(key); it != fields.end()) out[key] = *it;
        }
    }
    return out.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string canonical_serialize(const PaperMetadata& meta) {
    nlohmann::json j = {
        {"id", meta.arxiv_id},
        {"title", meta.title},
        {"authors", meta.authors},
        {"abstract", meta.abstract},
    };
    return canonical_serialize(j);
}

}  // namespace groundcite
