// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force checks of the planted corpus construction, independent of
// VectorIndex: every chunk is scored against every query with plain cosine.

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "intentrag/embedding.hpp"
#include "intentrag/fusion.hpp"
#include "intentrag/text.hpp"
#include "planted.hpp"

using namespace intentrag;
using namespace intentrag::testkit;

namespace {

struct Scored {
    std::string id;
    double score;
};

std::vector<Scored> exhaustive(const PlantedSuite& suite, const std::string& query) {
    const auto q = mock_embed(query, suite.embedder.dim, suite.embedder.seed);
    std::vector<Scored> out;
    for (const auto& c : suite.chunks) {
        out.push_back({c.id, cosine_similarity(q, mock_embed(c.body, suite.embedder.dim, suite.embedder.seed))});
    }
    std::sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
        return a.score != b.score ? a.score > b.score : a.id < b.id;
    });
    return out;
}

std::set<std::string> planted_ids() {
    std::set<std::string> ids;
    for (const auto& d : planted_drugs()) ids.insert(d.chunk_id());
    return ids;
}

// Brute-force fusion: per chunk, sum 1/(k + rank) over every list it is in.
std::vector<std::pair<std::string, double>> brute_fuse(const std::vector<std::vector<Scored>>& lists,
                                                       std::size_t depth, int k) {
    std::map<std::string, double> score;
    for (const auto& l : lists) {
        for (std::size_t r = 0; r < std::min(depth, l.size()); ++r) score[l[r].id] += 1.0 / (k + r + 1.0);
    }
    std::vector<std::pair<std::string, double>> out(score.begin(), score.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

} // namespace

TEST(PlantedSuite, HasTwoHundredSingleChunkDocuments) {
    const auto suite = make_planted_suite();
    EXPECT_EQ(suite.chunks.size(), 200u);
    std::set<std::string> docs;
    for (const auto& c : suite.chunks) docs.insert(c.doc_id);
    EXPECT_EQ(docs.size(), 200u);
}

TEST(PlantedSuite, DistractorsNeverNameAPlantedDrug) {
    const auto suite = make_planted_suite();
    for (const auto& c : suite.chunks) {
        if (planted_ids().count(c.id)) continue;
        const auto body = text::fold_case(c.body);
        for (const auto& d : planted_drugs()) EXPECT_EQ(body.find(text::fold_case(d.name)), std::string::npos);
    }
}

TEST(PlantedSuite, EveryStatementRanksItsDrugFirstAndAllPlantedInTopFive) {
    const auto suite = make_planted_suite();
    const auto planted = planted_ids();
    for (const auto& d : planted_drugs()) {
        for (const auto& s : d.statements()) {
            const auto ranked = exhaustive(suite, s);
            EXPECT_EQ(ranked[0].id, d.chunk_id()) << s;
            std::set<std::string> top5;
            for (std::size_t i = 0; i < 5; ++i) top5.insert(ranked[i].id);
            EXPECT_EQ(top5, planted) << s;
            EXPECT_GT(ranked[4].score, ranked[5].score) << s;
            // A positive-score tail longer than the deepest per-query depth
            // keeps zero-score ties out of every list.
            EXPECT_GT(ranked[54].score, 0.0) << s;
        }
    }
}

TEST(PlantedSuite, RawQuestionRetrievesNoPlantedChunkInTopTen) {
    const auto suite = make_planted_suite();
    const auto ranked = exhaustive(suite, kMultiIntentQuestion);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(planted_ids().count(ranked[i].id), 0u) << ranked[i].id;
}

TEST(PlantedSuite, FusedTopFiveIsThePlantedSetAtEveryDepthAndSmoothing) {
    const auto suite = make_planted_suite();
    std::vector<std::vector<Scored>> lists;
    for (const auto& d : planted_drugs()) {
        for (const auto& s : d.statements()) lists.push_back(exhaustive(suite, s));
    }
    lists.push_back(exhaustive(suite, kMultiIntentQuestion));
    for (std::size_t depth : {10u, 20u, 50u}) {
        for (int k : {10, 30, 60, 90}) {
            const auto fused = brute_fuse(lists, depth, k);
            std::set<std::string> top5;
            for (std::size_t i = 0; i < 5; ++i) top5.insert(fused[i].first);
            EXPECT_EQ(top5, planted_ids()) << "depth " << depth << " k " << k;
            EXPECT_GT(fused[4].second, fused[5].second);
        }
    }
}

TEST(PlantedSuite, SingleDrugQuestionsKeepTheirPlantedChunkInFusedTopTen) {
    const auto suite = make_planted_suite();
    for (const auto& d : planted_drugs()) {
        const auto s = d.statements();
        const std::vector<std::vector<Scored>> lists = {
            exhaustive(suite, s[0]), exhaustive(suite, s[2]),
            exhaustive(suite, "What is " + d.name + " used for and what are its side effects?")};
        for (std::size_t depth : {10u, 20u, 50u}) {
            const auto fused = brute_fuse(lists, depth, 60);
            EXPECT_EQ(fused[0].first, d.chunk_id()) << d.name << " depth " << depth;
        }
    }
}
