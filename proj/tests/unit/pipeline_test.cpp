// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "intentrag/error.hpp"
#include "intentrag/pipeline.hpp"
#include "planted.hpp"

using namespace intentrag;

namespace {

class PipelineTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        suite_ = new testkit::PlantedSuite(testkit::make_planted_suite());
        index_ = new VectorIndex(testkit::planted_index(*suite_));
    }
    static void TearDownTestSuite() {
        delete index_;
        delete suite_;
    }

    Providers providers() const { return {testkit::planted_embedder(*suite_), testkit::planted_llm(*suite_), ""}; }
    const QuestionRecord& multi() const { return suite_->questions[0]; }

    static testkit::PlantedSuite* suite_;
    static VectorIndex* index_;
};

testkit::PlantedSuite* PipelineTest::suite_ = nullptr;
VectorIndex* PipelineTest::index_ = nullptr;

StrategyConfig strategy(PoolMode kind) {
    StrategyConfig s;
    s.kind = kind;
    return s;
}

} // namespace

TEST_F(PipelineTest, NaiveFusionPreservesTheListOrder) {
    auto s = strategy(PoolMode::naive);
    s.generate_answers = false;
    const auto r = run_question(multi(), *index_, s, {testkit::planted_embedder(*suite_), nullptr, ""});
    ASSERT_EQ(r.ranked_lists.size(), 1u);
    ASSERT_EQ(r.fused.entries.size(), r.ranked_lists[0].entries.size());
    for (std::size_t i = 0; i < r.fused.entries.size(); ++i) {
        EXPECT_EQ(r.fused.entries[i].chunk_id, r.ranked_lists[0].entries[i].chunk_id);
    }
    EXPECT_FALSE(r.generated_answers.has_value());
}

TEST_F(PipelineTest, TwoIntentQueriesPutBothPlantedChunksOnTop) {
    const auto& drugs = testkit::planted_drugs();
    auto llm = std::make_shared<ScriptedLlm>();
    // One-sentence hypotheses need no decomposition call.
    llm->add_keyed_response("generate", multi().question,
                            "1. " + drugs[0].statements()[1] + "\n2. " + drugs[3].statements()[2]);
    auto s = strategy(PoolMode::multi_intent);
    s.generate_answers = false;
    const auto r = run_question(multi(), *index_, s, {testkit::planted_embedder(*suite_), llm, ""});
    ASSERT_EQ(r.query_pool.queries.size(), 3u);
    ASSERT_GE(r.fused.entries.size(), 2u);
    const std::set<std::string> top2{r.fused.entries[0].chunk_id, r.fused.entries[1].chunk_id};
    EXPECT_EQ(top2, (std::set<std::string>{drugs[0].chunk_id(), drugs[3].chunk_id()}));
}

TEST_F(PipelineTest, ResultInvariants) {
    const auto s = strategy(PoolMode::multi_intent);
    const auto r = run_question(multi(), *index_, s, providers());
    EXPECT_EQ(r.ranked_lists.size(), r.query_pool.queries.size());
    std::set<QueryRef> refs;
    for (std::size_t i = 0; i < r.ranked_lists.size(); ++i) {
        EXPECT_EQ(r.ranked_lists[i].query, r.query_pool.queries[i].ref);
        EXPECT_EQ(r.ranked_lists[i].entries.size(), s.per_query_depth);
        refs.insert(r.ranked_lists[i].query);
    }
    EXPECT_LE(r.fused.entries.size(), s.output_depth);
    for (const auto& e : r.fused.entries) {
        for (const auto& c : e.contributions) EXPECT_TRUE(refs.contains(c.query));
    }
    ASSERT_TRUE(r.generated_answers.has_value());
    std::vector<std::string> names;
    for (const auto& d : testkit::planted_drugs()) names.push_back(d.name);
    std::vector<std::string> got = *r.generated_answers;
    std::sort(got.begin(), got.end());
    std::sort(names.begin(), names.end());
    EXPECT_EQ(got, names);
    EXPECT_TRUE(r.timings.contains("retrieve"));
}

TEST_F(PipelineTest, SameInputsSerializeIdentically) {
    const auto s = strategy(PoolMode::multi_intent);
    const auto a = to_json(run_question(multi(), *index_, s, providers())).dump();
    const auto b = to_json(run_question(multi(), *index_, s, providers())).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("timings"), std::string::npos);
}

TEST_F(PipelineTest, DimensionMismatchIsRejected) {
    EmbeddingProviderConfig other = suite_->embedder;
    other.dim = 64;
    const Providers p{std::make_shared<MockEmbeddingProvider>(other), testkit::planted_llm(*suite_), ""};
    EXPECT_THROW(run_question(multi(), *index_, strategy(PoolMode::multi_intent), p), ValidationError);
}

TEST_F(PipelineTest, DegradedPoolStillRetrieves) {
    auto s = strategy(PoolMode::multi_intent);
    s.generate_answers = false;
    const Providers p{testkit::planted_embedder(*suite_), std::make_shared<ScriptedLlm>(), ""};
    const auto r = run_question(multi(), *index_, s, p);
    EXPECT_TRUE(r.query_pool.degraded);
    EXPECT_EQ(r.ranked_lists.size(), 1u);
    EXPECT_EQ(r.fused.entries.size(), 10u);
}

TEST_F(PipelineTest, MultiIntentCandidatesContainTheNaiveTopD) {
    for (std::size_t depth : {5u, 10u, 20u}) {
        for (const auto& q : suite_->questions) {
            auto naive = strategy(PoolMode::naive);
            naive.per_query_depth = depth;
            naive.output_depth = depth;
            naive.generate_answers = false;
            auto multi_s = strategy(PoolMode::multi_intent);
            multi_s.per_query_depth = depth;
            multi_s.output_depth = 100000;  // keep every fused candidate
            multi_s.generate_answers = false;
            const auto n = run_question(q, *index_, naive, providers());
            const auto m = run_question(q, *index_, multi_s, providers());
            std::set<std::string> candidates;
            for (const auto& e : m.fused.entries) candidates.insert(e.chunk_id);
            for (const auto& e : n.fused.entries) EXPECT_TRUE(candidates.contains(e.chunk_id)) << q.id << " " << e.chunk_id;
        }
    }
}

TEST_F(PipelineTest, PreparedQuestionsReplayAcrossSettings) {
    const auto s = strategy(PoolMode::multi_intent);
    const auto p = providers();
    const auto prepared = prepare_question(multi(), s, p);
    EXPECT_EQ(to_json(retrieve_prepared(multi(), prepared, *index_, s, p)).dump(),
              to_json(run_question(multi(), *index_, s, p)).dump());
}

TEST(GenerateAnswer, ParsesAndDeduplicates) {
    ScriptedLlm llm;
    llm.add_keyed_response("answer", "Q?", "1. X\n2. Y\n3. x");
    const std::vector<std::string> passages{"X and Y."};
    EXPECT_EQ(generate_answer(llm, "Q?", passages), (std::vector<std::string>{"X", "Y"}));
}

TEST(GenerateAnswer, EmptyPassagesViolateThePrecondition) {
    const ScriptedLlm llm;
    const std::vector<std::string> none;
    EXPECT_THROW(generate_answer(llm, "Q?", none), std::invalid_argument);
}

TEST(GenerateAnswer, UnparseableAfterRepairIsAFormatError) {
    ScriptedLlm llm;
    llm.add_keyed_response("answer", "Q?", "");
    llm.add_keyed_response("answer_repair", "Q?", "");
    const std::vector<std::string> passages{"p"};
    EXPECT_THROW(generate_answer(llm, "Q?", passages), GenerationFormatError);
}

TEST(StrategyConfig, ValidatesBounds) {
    StrategyConfig s;
    s.output_depth = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    s.fusion_smoothing = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    EXPECT_EQ(s.label(), "multi_intent");
    s.name = "ours";
    EXPECT_EQ(describe(s)["name"], "ours");
}
