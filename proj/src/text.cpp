// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/text.hpp"

namespace intentrag::text {

namespace {

bool is_ascii_punct(unsigned char c) noexcept {
    return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
           (c >= 123 && c <= 126);
}

bool is_word_byte(unsigned char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           c >= 0x80;
}

char lower(char c) noexcept {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

} // namespace

bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) noexcept {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : trim(s)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string fold_case(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = lower(c);
    return out;
}

std::string statement_key(std::string_view s) {
    return fold_case(collapse_whitespace(s));
}

std::string normalize_answer(std::string_view s) {
    std::string stripped;
    stripped.reserve(s.size());
    for (char c : s) {
        if (is_ascii_punct(static_cast<unsigned char>(c))) continue;
        stripped.push_back(lower(c));
    }
    std::string out;
    std::size_t i = 0;
    while (i < stripped.size()) {
        while (i < stripped.size() && is_space(stripped[i])) ++i;
        std::size_t j = i;
        while (j < stripped.size() && !is_space(stripped[j])) ++j;
        if (j == i) break;
        std::string_view word(stripped.data() + i, j - i);
        if (word != "a" && word != "an" && word != "the") {
            if (!out.empty()) out.push_back(' ');
            out.append(word);
        }
        i = j;
    }
    return out;
}

std::vector<std::string> answer_tokens(std::string_view s) {
    const std::string normalized = normalize_answer(s);
    if (normalized.empty()) return {};
    return split(normalized, ' ');
}

std::vector<std::string> lexical_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : s) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            current.push_back(lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::size_t floor_to_codepoint(std::string_view s, std::size_t pos) noexcept {
    if (pos >= s.size()) return s.size();
    while (pos > 0 && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) --pos;
    return pos;
}

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t end = i + 1;
        while (end < s.size() && (s[end] == '"' || s[end] == '\'' || s[end] == ')')) ++end;
        if (end < s.size() && !is_space(s[end])) continue;
        auto sentence = trim(s.substr(start, end - start));
        if (!sentence.empty()) out.emplace_back(sentence);
        start = end;
        i = end == 0 ? 0 : end - 1;
    }
    auto rest = trim(s.substr(start));
    if (!rest.empty()) out.emplace_back(rest);
    return out;
}

std::string truncate_at_word(std::string_view s, std::size_t max_bytes) {
    s = trim(s);
    if (s.size() <= max_bytes) return std::string(s);
    std::size_t cut = floor_to_codepoint(s, max_bytes);
    std::size_t ws = cut;
    while (ws > 0 && !is_space(s[ws])) --ws;
    if (ws > 0) cut = ws;
    return std::string(trim(s.substr(0, cut)));
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace intentrag::text
