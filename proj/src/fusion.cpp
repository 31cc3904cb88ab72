// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentrag/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <unordered_map>

#include "intentrag/error.hpp"

namespace intentrag {

namespace {

// Relative tolerance far above summation error (a few ulps) and far below
// the gap between distinct reciprocal-rank sums of realistic depth.
constexpr double kTieTolerance = 1e-12;

bool same_score(double a, double b) {
    return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

} // namespace

FusedRanking rrf_fuse(std::span<const RankedList> lists, int smoothing) {
    if (lists.empty()) throw std::invalid_argument("rrf_fuse needs at least one ranked list");
    if (smoothing < 1) throw std::invalid_argument("fusion smoothing must be positive");

    FusedRanking out{smoothing, {}};
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        try {
            validate(lists[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("list " + std::to_string(i) + ": " + e.what());
        }
        for (const auto& entry : lists[i].entries) {
            auto [it, inserted] = slot.try_emplace(entry.chunk_id, out.entries.size());
            if (inserted) out.entries.push_back({entry.chunk_id, 0.0, {}});
            out.entries[it->second].contributions.push_back({lists[i].query, entry.rank});
        }
    }

    const double k = smoothing;
    for (auto& e : out.entries) {
        std::sort(e.contributions.begin(), e.contributions.end(), [](const Contribution& a, const Contribution& b) {
            return a.rank != b.rank ? a.rank < b.rank : a.query < b.query;
        });
        double sum = 0.0;
        for (const auto& c : e.contributions) sum += 1.0 / (k + static_cast<double>(c.rank));
        e.score = sum;
    }
    const auto tie_order = [](const FusedEntry& a, const FusedEntry& b) {
        if (a.contributions.size() != b.contributions.size()) return a.contributions.size() > b.contributions.size();
        return a.chunk_id < b.chunk_id;
    };
    std::sort(out.entries.begin(), out.entries.end(), [&](const FusedEntry& a, const FusedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return tie_order(a, b);
    });
    // Sums of different reciprocals can be equal yet round differently
    // (1/3 + 1/6 vs 1/2). Runs of scores equal up to rounding are ties.
    for (auto first = out.entries.begin(); first != out.entries.end();) {
        auto last = std::next(first);
        while (last != out.entries.end() && same_score(std::prev(last)->score, last->score)) ++last;
        if (std::distance(first, last) > 1) std::sort(first, last, tie_order);
        first = last;
    }
    return out;
}

FusedRanking truncate(const FusedRanking& fused, std::size_t depth) {
    if (depth == 0) throw std::invalid_argument("truncation depth must be positive");
    FusedRanking out{fused.smoothing, {}};
    const auto n = std::min(depth, fused.entries.size());
    out.entries.assign(fused.entries.begin(), fused.entries.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

nlohmann::ordered_json to_json(const FusedRanking& fused) {
    using json = nlohmann::ordered_json;
    json entries = json::array();
    for (const auto& e : fused.entries) {
        json contributions = json::array();
        for (const auto& c : e.contributions) {
            contributions.push_back({{"m", c.query.instance}, {"l", c.query.intent}, {"rank", c.rank}});
        }
        entries.push_back({{"chunk_id", e.chunk_id}, {"score", e.score}, {"contributions", std::move(contributions)}});
    }
    return json{{"smoothing", fused.smoothing}, {"entries", std::move(entries)}};
}

} // namespace intentrag
