// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/hypothesis.hpp"

#include <cctype>
#include <future>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "intentrag/error.hpp"
#include "intentrag/prompts.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

using json = nlohmann::ordered_json;

namespace {

// Length of a list marker plus the whitespace after it, or nullopt.
std::optional<std::size_t> list_marker(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i > 0) {
        if (i >= line.size() || (line[i] != '.' && line[i] != ')')) return std::nullopt;
        ++i;
    } else if (line.starts_with("\xE2\x80\xA2")) {
        i = 3;
    } else if (!line.empty() && (line[0] == '-' || line[0] == '*')) {
        i = 1;
    } else {
        return std::nullopt;
    }
    if (i < line.size() && !text::is_space(line[i])) return std::nullopt;
    while (i < line.size() && text::is_space(line[i])) ++i;
    return i;
}

std::string template_text(std::string_view name) {
    return std::string(text::trim(prompt_template(name).text));
}

std::string render(std::string_view name, std::initializer_list<std::pair<std::string_view, std::string>> vars) {
    const std::vector<std::pair<std::string_view, std::string>> v(vars);
    return render_prompt(template_text(name), v);
}

std::vector<std::string> distinct(std::vector<std::string> items) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (auto& item : items) {
        if (seen.insert(text::statement_key(item)).second) out.push_back(std::move(item));
    }
    return out;
}

std::vector<std::string> parse_reply(std::string_view reply, bool accept_plain_line) {
    auto items = parse_enumerated_list(reply);
    if (items.empty() && accept_plain_line) {
        const auto t = text::trim(reply);
        if (!t.empty() && t.find('\n') == std::string_view::npos) items.emplace_back(t);
    }
    return distinct(std::move(items));
}

std::vector<IntentQuery> number_statements(int m, const std::vector<std::string>& statements, std::size_t limit) {
    std::vector<IntentQuery> out;
    std::set<std::string> seen;
    int l = 0;
    for (const auto& s : statements) {
        for (auto& piece : enforce_statement_limit(s, limit)) {
            if (!seen.insert(text::statement_key(piece)).second) continue;
            out.push_back({QueryRef{m, ++l}, std::move(piece)});
        }
    }
    return out;
}

} // namespace

std::string_view to_string(PoolMode mode) noexcept {
    switch (mode) {
    case PoolMode::naive: return "naive";
    case PoolMode::single_hypothetical: return "single_hypothetical";
    case PoolMode::multi_intent: return "multi_intent";
    case PoolMode::single_subject_split: return "single_subject_split";
    }
    return "unknown";
}

PoolMode parse_pool_mode(std::string_view name) {
    for (auto mode : {PoolMode::naive, PoolMode::single_hypothetical, PoolMode::multi_intent,
                      PoolMode::single_subject_split}) {
        if (name == to_string(mode)) return mode;
    }
    throw std::invalid_argument("unknown strategy \"" + std::string(name) + "\"");
}

json to_json(const QueryPool& pool) {
    json queries = json::array();
    for (const auto& q : pool.queries) {
        queries.push_back({{"m", q.ref.instance}, {"l", q.ref.intent}, {"statement", q.statement}});
    }
    return json{{"question_id", pool.question_id},
                {"mode", to_string(pool.mode)},
                {"degraded", pool.degraded},
                {"warnings", pool.warnings},
                {"queries", std::move(queries)}};
}

std::vector<std::string> parse_enumerated_list(std::string_view reply) {
    std::vector<std::string> items;
    std::string current;
    bool open = false;
    auto flush = [&] {
        if (open) {
            auto item = text::collapse_whitespace(current);
            if (!item.empty()) items.push_back(std::move(item));
        }
        current.clear();
        open = false;
    };
    for (const auto& raw : text::split(reply, '\n')) {
        const auto line = text::trim(raw);
        if (line.empty()) {
            flush();
            continue;
        }
        if (const auto marker = list_marker(line)) {
            flush();
            current.assign(line.substr(*marker));
            open = true;
        } else if (open) {
            current.push_back(' ');
            current.append(line);
        }
    }
    flush();
    return items;
}

std::vector<std::string> enforce_statement_limit(std::string_view statement, std::size_t limit) {
    if (limit == 0) throw std::invalid_argument("statement limit must be positive");
    const auto normalized = text::collapse_whitespace(statement);
    if (normalized.empty()) return {};
    if (normalized.size() <= limit) return {normalized};

    std::vector<std::string> out;
    std::string current;
    for (auto& sentence : text::split_sentences(normalized)) {
        if (sentence.size() > limit) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
            out.push_back(text::truncate_at_word(sentence, limit));
            continue;
        }
        if (current.empty()) {
            current = std::move(sentence);
        } else if (current.size() + 1 + sentence.size() <= limit) {
            current.append(" ").append(sentence);
        } else {
            out.push_back(std::move(current));
            current = std::move(sentence);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::vector<ChatMessage> chat_messages(std::string user_prompt) {
    return {{"system", template_text("system")}, {"user", std::move(user_prompt)}};
}

std::vector<std::string> request_list(const LlmClient& llm, const ListRequest& request) {
    ChatRequest call{request.call_kind, request.question_id, request.subject, chat_messages(request.prompt),
                     request.temperature, request.max_tokens};
    const std::string first = llm.complete(call);
    auto items = parse_reply(first, request.accept_plain_line);
    if (items.size() >= request.min_items) return items;

    std::string problem = items.empty() ? "no numbered list items were found"
                                        : "it listed " + std::to_string(items.size()) +
                                              " distinct item(s) where at least " +
                                              std::to_string(request.min_items) + " are required";
    call.call_kind += "_repair";
    call.messages.push_back({"assistant", first});
    call.messages.push_back({"user", render("repair", {{"problem", problem}})});
    const std::string second = llm.complete(call);
    items = parse_reply(second, request.accept_plain_line);
    if (items.size() >= request.min_items) return items;
    throw GenerationFormatError(request.call_kind + " output unusable after one repair attempt: " + problem,
                                second);
}

std::vector<HypotheticalAnswer> generate_hypotheses(const LlmClient& llm, std::string_view question,
                                                    int max_instances, const PoolOptions& options,
                                                    std::string_view question_id) {
    if (text::trim(question).empty()) throw std::invalid_argument("question is empty");
    if (max_instances < 1) throw std::invalid_argument("max_instances must be positive");
    ListRequest req{"generate",
                    std::string(question_id),
                    std::string(question),
                    render("hypothesis_generation",
                           {{"question", std::string(question)}, {"max_instances", std::to_string(max_instances)}}),
                    options.generation_temperature,
                    options.max_tokens};
    auto items = request_list(llm, req);
    if (items.size() > static_cast<std::size_t>(max_instances)) items.resize(max_instances);
    std::vector<HypotheticalAnswer> out;
    int m = 0;
    for (auto& body : items) out.push_back({++m, std::move(body)});
    return out;
}

std::vector<IntentQuery> decompose_hypothesis(const LlmClient& llm, std::string_view question,
                                              const HypotheticalAnswer& hypothesis, const PoolOptions& options,
                                              std::string_view question_id) {
    if (text::trim(hypothesis.body).empty()) throw std::invalid_argument("hypothesis body is empty");
    if (hypothesis.m < 1) throw std::invalid_argument("hypothesis index must be positive");
    const auto sentences = text::split_sentences(hypothesis.body);
    if (sentences.size() == 1) return number_statements(hypothesis.m, sentences, options.max_statement_chars);

    ListRequest req{"decompose",
                    std::string(question_id),
                    text::collapse_whitespace(hypothesis.body),
                    render("decomposition", {{"question", std::string(question)}, {"hypothesis", hypothesis.body}}),
                    options.decomposition_temperature,
                    options.max_tokens};
    return number_statements(hypothesis.m, request_list(llm, req), options.max_statement_chars);
}

std::vector<IntentQuery> split_single_subject(const LlmClient& llm, std::string_view question,
                                              const PoolOptions& options, std::string_view question_id) {
    if (text::trim(question).empty()) throw std::invalid_argument("question is empty");
    ListRequest req{"split",
                    std::string(question_id),
                    std::string(question),
                    render("single_subject_split", {{"question", std::string(question)}}),
                    options.decomposition_temperature,
                    options.max_tokens,
                    2};
    return number_statements(1, request_list(llm, req), options.max_statement_chars);
}

std::string hyde_passage(const LlmClient& llm, std::string_view question, const PoolOptions& options,
                         std::string_view question_id) {
    if (text::trim(question).empty()) throw std::invalid_argument("question is empty");
    ChatRequest call{"hyde",
                     std::string(question_id),
                     std::string(question),
                     chat_messages(render("hyde_passage", {{"question", std::string(question)}})),
                     options.generation_temperature,
                     options.max_tokens};
    const std::string reply = llm.complete(call);
    auto passage = text::collapse_whitespace(reply);
    if (passage.empty()) throw GenerationFormatError("hyde output is empty", reply);
    return passage;
}

QueryPool build_query_pool(const QuestionRecord& record, const LlmClient* llm, PoolMode mode,
                           const PoolOptions& options) {
    if (text::trim(record.question).empty()) throw ValidationError("question \"" + record.id + "\" is empty");
    if (mode != PoolMode::naive && llm == nullptr) {
        throw std::invalid_argument(std::string(to_string(mode)) + " needs an LLM client");
    }
    QueryPool pool{record.id, mode, {}, false, {}};
    std::vector<IntentQuery> generated;

    try {
        switch (mode) {
        case PoolMode::naive: break;
        case PoolMode::single_hypothetical:
            generated.push_back({QueryRef{1, 1}, hyde_passage(*llm, record.question, options, record.id)});
            break;
        case PoolMode::single_subject_split:
            generated = split_single_subject(*llm, record.question, options, record.id);
            break;
        case PoolMode::multi_intent: {
            const auto hypotheses =
                generate_hypotheses(*llm, record.question, options.max_instances, options, record.id);
            std::vector<std::future<std::vector<IntentQuery>>> pending;
            auto decompose = [&](const HypotheticalAnswer& h) {
                return decompose_hypothesis(*llm, record.question, h, options, record.id);
            };
            for (const auto& h : hypotheses) {
                pending.push_back(std::async(options.parallel ? std::launch::async : std::launch::deferred,
                                             decompose, std::cref(h)));
            }
            std::size_t failed = 0;
            std::string last_error;
            for (std::size_t i = 0; i < pending.size(); ++i) {
                try {
                    auto part = pending[i].get();
                    generated.insert(generated.end(), std::make_move_iterator(part.begin()),
                                     std::make_move_iterator(part.end()));
                } catch (const Error& e) {
                    ++failed;
                    last_error = e.what();
                    pool.warnings.push_back("instance " + std::to_string(hypotheses[i].m) + ": " + e.what());
                }
            }
            if (failed == pending.size()) throw GenerationFormatError("every instance failed: " + last_error, "");
            break;
        }
        }
    } catch (const Error& e) {
        generated.clear();
        pool.degraded = true;
        pool.warnings.push_back(e.what());
    }

    // The raw question wins over a generated statement with the same text.
    const auto raw_key = text::statement_key(record.question);
    std::set<std::string> seen{raw_key};
    for (auto& q : generated) {
        if (seen.insert(text::statement_key(q.statement)).second) pool.queries.push_back(std::move(q));
    }
    pool.queries.push_back({QueryRef::raw_question(), text::collapse_whitespace(record.question)});
    return pool;
}

} // namespace intentrag
