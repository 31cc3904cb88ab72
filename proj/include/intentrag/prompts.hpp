// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace intentrag {

/// A prompt template shipped under prompts/<name>.<version>.txt and compiled
/// into the library.
struct PromptTemplate {
    std::string_view name;
    std::string_view version;
    std::string_view text;
};

std::span<const PromptTemplate> prompt_templates() noexcept;

/// Throws std::out_of_range for an unknown name.
const PromptTemplate& prompt_template(std::string_view name);

/// Replaces every {{key}} with its value. Unknown placeholders are left as is.
std::string render_prompt(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string>> vars);

/// "<name>.<version>" -> SHA-256 of the template text, for run fingerprints.
std::map<std::string, std::string> prompt_template_hashes();

} // namespace intentrag
