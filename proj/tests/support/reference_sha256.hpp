// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace testsupport {

/// Straight FIPS 180-4 SHA-256, written independently of the library's
/// OpenSSL-backed digest so the two can be cross-checked.
std::array<std::uint8_t, 32> reference_sha256(std::string_view data);
std::string reference_sha256_hex(std::string_view data);

}  // namespace testsupport
