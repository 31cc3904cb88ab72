// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/prompts.hpp"

#include <array>
#include <stdexcept>

#include "intentrag/hashing.hpp"

namespace intentrag {

namespace {

// Generated at configure time from prompts/*.txt.
#include "prompt_templates.inc"

} // namespace

std::span<const PromptTemplate> prompt_templates() noexcept {
    return kPromptTemplates;
}

const PromptTemplate& prompt_template(std::string_view name) {
    for (const auto& t : kPromptTemplates) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("unknown prompt template \"" + std::string(name) + "\"");
}

std::string render_prompt(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string>> vars) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        const auto open = tmpl.find("{{", i);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(i));
            break;
        }
        const auto close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(i));
            break;
        }
        out.append(tmpl.substr(i, open - i));
        const auto key = tmpl.substr(open + 2, close - open - 2);
        bool replaced = false;
        for (const auto& [k, v] : vars) {
            if (k == key) {
                out.append(v);
                replaced = true;
                break;
            }
        }
        if (!replaced) out.append(tmpl.substr(open, close + 2 - open));
        i = close + 2;
    }
    return out;
}

std::map<std::string, std::string> prompt_template_hashes() {
    std::map<std::string, std::string> out;
    for (const auto& t : kPromptTemplates) {
        out.emplace(std::string(t.name) + "." + std::string(t.version), sha256_hex(t.text));
    }
    return out;
}

} // namespace intentrag
