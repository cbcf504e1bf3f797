// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace groundcite {

struct PaperMetadata;

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of `bytes`.
Digest compute_hash(std::span<const std::uint8_t> bytes);
Digest compute_hash(std::string_view bytes);

std::string to_hex(const Digest& d);
/// Parses 64 hex characters; throws a validation error otherwise.
Digest digest_from_hex(std::string_view hex);

/// Byte-stable serialization of the hashed metadata fields (id, title,
/// authors, abstract): UTF-8 JSON, keys sorted, no insignificant whitespace.
/// Keys outside that set are ignored; absent keys are omitted.
std::string canonical_serialize(const nlohmann::json& fields);
std::string canonical_serialize(const PaperMetadata& meta);

inline Digest content_hash(const PaperMetadata& meta) { return compute_hash(canonical_serialize(meta)); }

}  // namespace groundcite
