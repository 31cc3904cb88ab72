// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace intentrag::text {

/// ASCII whitespace only; multi-byte UTF-8 sequences are never whitespace.
bool is_space(char c) noexcept;

std::string_view trim(std::string_view s) noexcept;

/// Trims and replaces every whitespace run by a single space.
std::string collapse_whitespace(std::string_view s);

/// ASCII lowercase; bytes >= 0x80 pass through untouched.
std::string fold_case(std::string_view s);

/// Dedup key for generated statements: case-folded, whitespace-collapsed.
std::string statement_key(std::string_view s);

/// Open-domain QA answer normalization: lowercase, strip ASCII punctuation,
/// drop the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view s);

/// Whitespace tokens of normalize_answer(s).
std::vector<std::string> answer_tokens(std::string_view s);

/// Lowercased alphanumeric runs. Bytes >= 0x80 count as word characters so
/// UTF-8 words stay intact.
std::vector<std::string> lexical_tokens(std::string_view s);

/// Largest position <= pos that starts a code point (or equals s.size()).
std::size_t floor_to_codepoint(std::string_view s, std::size_t pos) noexcept;

/// Sentences of s, each trimmed. Terminators are '.', '!' and '?' followed by
/// whitespace or end of input; text without a terminator is one sentence.
std::vector<std::string> split_sentences(std::string_view s);

/// Cuts s to at most max_bytes, preferring the last whitespace, never
/// splitting a code point. Result is trimmed.
std::string truncate_at_word(std::string_view s, std::size_t max_bytes);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Splits on a single character, keeping empty fields.
std::vector<std::string> split(std::string_view s, char sep);

} // namespace intentrag::text
