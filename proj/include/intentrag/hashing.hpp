// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace intentrag {

/// 64-bit FNV-1a. Platform independent, used wherever a value must be
/// bit-stable across runs and machines.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

} // namespace intentrag
