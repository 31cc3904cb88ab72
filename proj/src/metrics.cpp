// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "intentrag/error.hpp"
#include "intentrag/hypothesis.hpp"
#include "intentrag/prompts.hpp"
#include "intentrag/text.hpp"

namespace intentrag {

namespace {

MetricValue ratio(std::string name, std::size_t numerator, std::size_t denominator) {
    MetricValue m{std::move(name), 0.0, numerator, denominator, false};
    if (denominator == 0) {
        m.empty_output = true;
    } else {
        m.value = static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    return m;
}

bool contains_tokens(const std::string& haystack, const std::string& needle) {
    if (needle.empty() || haystack.empty()) return false;
    return (" " + haystack + " ").find(" " + needle + " ") != std::string::npos;
}

} // namespace

std::vector<double> mixture_distribution(std::span<const EmbeddingVector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("vector_entropy needs at least one vector");
    const std::size_t dim = vectors.front().dim();
    std::vector<double> mix(dim, 0.0);
    for (std::size_t s = 0; s < vectors.size(); ++s) {
        const auto v = vectors[s].values();
        if (v.size() != dim) {
            throw std::invalid_argument("vector " + std::to_string(s) + " has dimension " + std::to_string(v.size()) +
                                        ", expected " + std::to_string(dim));
        }
        double l1 = 0.0;
        for (double x : v) l1 += std::abs(x);
        if (l1 == 0.0) throw std::invalid_argument("vector " + std::to_string(s) + " is all zero");
        for (std::size_t i = 0; i < dim; ++i) mix[i] += std::abs(v[i]) / l1;
    }
    const double n = static_cast<double>(vectors.size());
    for (double& p : mix) p /= n;
    return mix;
}

double vector_entropy(std::span<const EmbeddingVector> vectors) {
    double h = 0.0;
    for (double p : mixture_distribution(vectors)) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

std::string_view to_string(MatcherKind kind) noexcept {
    switch (kind) {
    case MatcherKind::normalized_exact: return "normalized_exact";
    case MatcherKind::containment: return "containment";
    case MatcherKind::llm_judge: return "llm_judge";
    }
    return "unknown";
}

MatcherKind parse_matcher_kind(std::string_view name) {
    if (name == "normalized_exact" || name == "exact") return MatcherKind::normalized_exact;
    if (name == "containment") return MatcherKind::containment;
    if (name == "llm_judge" || name == "judge") return MatcherKind::llm_judge;
    throw std::invalid_argument("unknown matcher \"" + std::string(name) + "\"");
}

Matcher::Matcher(MatcherKind kind, std::shared_ptr<const LlmClient> judge) : kind_(kind), judge_(std::move(judge)) {
    if (kind_ == MatcherKind::llm_judge && !judge_) throw std::invalid_argument("llm_judge matcher needs an LLM");
}

Matcher Matcher::from_config(const MatcherConfig& config) {
    if (config.kind != MatcherKind::llm_judge) return Matcher(config.kind);
    if (!config.judge_llm) throw std::invalid_argument("llm_judge matcher needs an LLM configuration");
    return Matcher(config.kind, make_llm_client(*config.judge_llm));
}

bool Matcher::accepts(std::string_view candidate, std::string_view gold) const {
    switch (kind_) {
    case MatcherKind::normalized_exact: {
        const auto g = text::normalize_answer(gold);
        return !g.empty() && g == text::normalize_answer(candidate);
    }
    case MatcherKind::containment:
        return contains_tokens(text::normalize_answer(candidate), text::normalize_answer(gold));
    case MatcherKind::llm_judge: {
        const std::vector<std::pair<std::string_view, std::string>> vars{{"gold", std::string(gold)},
                                                                         {"candidate", std::string(candidate)}};
        ChatRequest call{"judge", "", std::string(gold) + "\n" + std::string(candidate),
                         chat_messages(render_prompt(text::trim(prompt_template("judge").text), vars)), 0.0, 8};
        const std::string reply = judge_->complete(call);
        const auto tokens = text::lexical_tokens(reply);
        if (!tokens.empty() && tokens.front() == "yes") return true;
        if (!tokens.empty() && tokens.front() == "no") return false;
        throw GenerationFormatError("judge reply is neither yes nor no", reply);
    }
    }
    return false;
}

std::vector<GoldItem> gold_items(std::span<const FactualUnit> units) {
    std::vector<GoldItem> out;
    out.reserve(units.size());
    for (const auto& u : units) out.push_back({u.id, u.statement});
    return out;
}

std::vector<GoldItem> gold_items(std::span<const std::string> answers) {
    std::vector<GoldItem> out;
    out.reserve(answers.size());
    for (const auto& a : answers) out.push_back({a, a});
    return out;
}

MatchOutcome match_units(std::span<const std::string> candidates, std::span<const GoldItem> gold,
                         const Matcher& matcher) {
    {
        std::set<std::string_view> ids;
        for (const auto& g : gold) {
            if (!ids.insert(g.id).second) throw std::invalid_argument("duplicate gold id \"" + g.id + "\"");
        }
    }
    MatchOutcome out;
    std::vector<bool> taken(gold.size(), false);
    for (const auto& c : candidates) {
        CandidateVerdict verdict{c, std::nullopt};
        for (std::size_t g = 0; g < gold.size(); ++g) {
            if (taken[g] || !matcher.accepts(c, gold[g].text)) continue;
            taken[g] = true;
            verdict.gold_id = gold[g].id;
            out.matched_gold_ids.insert(gold[g].id);
            break;
        }
        out.verdicts.push_back(std::move(verdict));
    }
    return out;
}

nlohmann::ordered_json to_json(const MetricValue& metric) {
    nlohmann::ordered_json j{{"value", metric.value}, {"numerator", metric.numerator},
                             {"denominator", metric.denominator}};
    if (metric.empty_output) j["empty_output"] = true;
    return j;
}

MetricValue information_recall_rate(std::span<const std::string> passages, std::span<const FactualUnit> gold_units,
                                    const Matcher& matcher) {
    if (gold_units.empty()) throw UndefinedMetricError("IRR is undefined without gold factual units");
    std::size_t covered = 0;
    for (const auto& unit : gold_units) {
        const bool hit = std::any_of(passages.begin(), passages.end(),
                                     [&](const std::string& p) { return matcher.accepts(p, unit.statement); });
        if (hit) ++covered;
    }
    return ratio("IRR", covered, gold_units.size());
}

AnswerScores answer_scores(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                           const Matcher& matcher) {
    if (gold_answers.empty()) throw UndefinedMetricError("AA/AC are undefined without gold answers");
    std::vector<std::string> unique_gold;
    {
        std::set<std::string> seen;
        for (const auto& a : gold_answers) {
            if (seen.insert(a).second) unique_gold.push_back(a);
        }
    }
    const auto items = gold_items(std::span<const std::string>(unique_gold));
    const auto outcome = match_units(generated, items, matcher);
    const std::size_t matched = outcome.matched_gold_ids.size();
    return {ratio("AA", matched, generated.size()), ratio("AC", matched, unique_gold.size()), matched};
}

MetricValue answer_accuracy(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                            const Matcher& matcher) {
    return answer_scores(generated, gold_answers, matcher).accuracy;
}

MetricValue answer_coverage(std::span<const std::string> generated, std::span<const std::string> gold_answers,
                            const Matcher& matcher) {
    return answer_scores(generated, gold_answers, matcher).coverage;
}

double exact_match(std::string_view prediction, std::span<const std::string> gold_answers) {
    if (gold_answers.empty()) throw UndefinedMetricError("EM is undefined without gold answers");
    const auto p = text::normalize_answer(prediction);
    for (const auto& g : gold_answers) {
        if (text::normalize_answer(g) == p) return 1.0;
    }
    return 0.0;
}

double token_f1(std::span<const std::string> prediction_tokens, std::span<const std::string> gold_tokens) {
    if (prediction_tokens.empty() || gold_tokens.empty()) {
        return prediction_tokens.empty() && gold_tokens.empty() ? 1.0 : 0.0;
    }
    std::map<std::string_view, std::size_t> counts;
    for (const auto& t : gold_tokens) ++counts[t];
    std::size_t common = 0;
    for (const auto& t : prediction_tokens) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    if (common == 0) return 0.0;
    const double precision = static_cast<double>(common) / static_cast<double>(prediction_tokens.size());
    const double recall = static_cast<double>(common) / static_cast<double>(gold_tokens.size());
    return 2.0 * precision * recall / (precision + recall);
}

double token_f1(std::string_view prediction, std::span<const std::string> gold_answers) {
    if (gold_answers.empty()) throw UndefinedMetricError("F1 is undefined without gold answers");
    const auto p = text::answer_tokens(prediction);
    double best = 0.0;
    for (const auto& g : gold_answers) best = std::max(best, token_f1(p, text::answer_tokens(g)));
    return best;
}

double recall_at_k(const FusedRanking& fused, std::span<const std::string> gold_passage_ids, std::size_t k,
                   const std::function<std::string(std::string_view)>& doc_of) {
    if (gold_passage_ids.empty()) throw UndefinedMetricError("R@k is undefined without gold passage ids");
    if (k == 0) throw std::invalid_argument("k must be positive");
    std::set<std::string> found;
    const auto n = std::min(k, fused.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& id = fused.entries[i].chunk_id;
        found.insert(id);
        found.insert(doc_of ? doc_of(id) : doc_id_of(id));
    }
    const std::set<std::string> gold(gold_passage_ids.begin(), gold_passage_ids.end());
    std::size_t hits = 0;
    for (const auto& g : gold) hits += found.count(g);
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

} // namespace intentrag
