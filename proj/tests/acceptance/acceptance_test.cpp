// Copyright 2026 The intentrag Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit status
// is the number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "intentrag/evaluation.hpp"
#include "intentrag/metrics.hpp"
#include "intentrag/text.hpp"
#include "planted.hpp"

using namespace intentrag;

namespace {

/// Collects failed checks of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++count_;
    }
    void note(std::string detail) { detail_ = std::move(detail); }
    bool ok() const { return count_ == 0; }
    std::string summary() const {
        std::ostringstream out;
        if (!detail_.empty()) out << " [" << detail_ << "]";
        for (const auto& f : failures_) out << "\n      " << f;
        if (count_ > failures_.size()) out << "\n      ... " << count_ - failures_.size() << " more";
        return out.str();
    }

private:
    std::vector<std::string> failures_;
    std::size_t count_ = 0;
    std::string detail_;
};

std::string num(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

// ---------------------------------------------------------------- fusion

RankedList random_list(std::mt19937_64& rng, QueryRef ref, std::size_t len, std::size_t pool) {
    std::vector<std::size_t> ids(pool);
    for (std::size_t i = 0; i < pool; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    RankedList l{ref, {}};
    for (std::size_t r = 0; r < std::min(len, pool); ++r) {
        l.entries.push_back({"c" + std::to_string(ids[r]), r + 1, 1.0 / static_cast<double>(r + 1)});
    }
    return l;
}

// Exact non-negative rational; sums of at most a few 1/(k + rank) terms fit
// comfortably in 128 bits.
struct Rational {
    unsigned __int128 num = 0;
    unsigned __int128 den = 1;

    Rational& operator+=(unsigned __int128 inverse_of) {
        num = num * inverse_of + den;
        den *= inverse_of;
        return *this;
    }
    friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
};

struct OracleEntry {
    std::string id;
    double score = 0;
    Rational exact;
    std::size_t lists = 0;
};

// Brute force over every chunk id and every list: sum 1/(k + rank) where
// present. Ordering uses the exact sums, so mathematical ties are ties.
std::vector<OracleEntry> rrf_oracle(const std::vector<RankedList>& lists, int k) {
    std::set<std::string> ids;
    for (const auto& l : lists) {
        for (const auto& e : l.entries) ids.insert(e.chunk_id);
    }
    std::vector<OracleEntry> out;
    for (const auto& id : ids) {
        OracleEntry o{id, 0.0, {}, 0};
        for (const auto& l : lists) {
            for (const auto& e : l.entries) {
                if (e.chunk_id == id) {
                    o.score += 1.0 / (static_cast<double>(k) + static_cast<double>(e.rank));
                    o.exact += static_cast<unsigned __int128>(k) + e.rank;
                    ++o.lists;
                }
            }
        }
        out.push_back(o);
    }
    std::sort(out.begin(), out.end(), [](const OracleEntry& a, const OracleEntry& b) {
        if (!(a.exact == b.exact)) return b.exact < a.exact;
        if (a.lists != b.lists) return a.lists > b.lists;
        return a.id < b.id;
    });
    return out;
}

void criterion_rrf_oracle(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);
    std::size_t fusions = 0;
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t n_lists = 1 + rng() % 5;
        const std::size_t pool = 5 + rng() % 36;
        std::vector<RankedList> lists;
        for (std::size_t q = 0; q < n_lists; ++q) {
            lists.push_back(random_list(rng, {1, static_cast<int>(q + 1)}, 1 + rng() % 20, pool));
        }
        for (int k : {1, 60, 1000}) {
            ++fusions;
            const auto fused = rrf_fuse(lists, k);
            const auto oracle = rrf_oracle(lists, k);
            c.expect(fused.entries.size() == oracle.size(), "instance " + std::to_string(instance) + ": size");
            for (std::size_t i = 0; i < std::min(fused.entries.size(), oracle.size()); ++i) {
                c.expect(fused.entries[i].chunk_id == oracle[i].id,
                         "instance " + std::to_string(instance) + " k=" + std::to_string(k) + ": order at " +
                             std::to_string(i));
                c.expect(std::abs(fused.entries[i].score - oracle[i].score) <= 1e-12,
                         "instance " + std::to_string(instance) + ": score " + num(fused.entries[i].score) +
                             " vs " + num(oracle[i].score));
            }
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    c.expect(ms < 1000.0, "runtime " + num(ms) + " ms");
    std::ostringstream d;
    d << fusions << " fusions in " << static_cast<long>(ms) << " ms";
    c.note(d.str());
}

void criterion_rrf_hand_values(Check& c) {
    const std::vector<RankedList> one{{{1, 1}, {{"d", 1, 0.9}}}};
    const auto a = rrf_fuse(one, 60);
    c.expect(a.entries.size() == 1 && std::abs(a.entries[0].score - 1.0 / 61.0) <= 1e-12,
             "rank 1 alone: " + num(a.entries.at(0).score));
    const std::vector<RankedList> two{{{1, 1}, {{"d", 1, 0.9}, {"x", 2, 0.8}, {"y", 3, 0.7}}},
                                      {{1, 2}, {{"x", 1, 0.9}, {"y", 2, 0.8}, {"d", 3, 0.7}}}};
    const auto b = rrf_fuse(two, 60);
    const auto it = std::find_if(b.entries.begin(), b.entries.end(), [](const FusedEntry& e) { return e.chunk_id == "d"; });
    c.expect(it != b.entries.end() && std::abs(it->score - (1.0 / 61.0 + 1.0 / 63.0)) <= 1e-12,
             "ranks {1,3}: " + (it == b.entries.end() ? std::string("missing") : num(it->score)));
    c.note("1/61=" + num(a.entries.at(0).score) + ", 1/61+1/63=" + num(it->score));
}

// ---------------------------------------------------------------- entropy

// Independent H_mix: mean of |v|/L1 distributions, then -sum p ln p.
double entropy_oracle(const std::vector<std::vector<double>>& vs) {
    const std::size_t d = vs.front().size();
    std::vector<double> p(d, 0.0);
    for (const auto& v : vs) {
        double l1 = 0;
        for (double x : v) l1 += std::abs(x);
        for (std::size_t i = 0; i < d; ++i) p[i] += std::abs(v[i]) / l1 / static_cast<double>(vs.size());
    }
    double h = 0;
    for (double x : p) {
        if (x > 0) h -= x * std::log(x);
    }
    return h;
}

std::vector<EmbeddingVector> as_vectors(const std::vector<std::vector<double>>& vs) {
    std::vector<EmbeddingVector> out;
    for (const auto& v : vs) out.emplace_back(v);
    return out;
}

void criterion_entropy(Check& c) {
    const std::size_t d = 4096;
    std::vector<double> onehot(d, 0.0);
    onehot[17] = 3.5;
    const auto h_onehot = vector_entropy(as_vectors({onehot}));
    c.expect(h_onehot == 0.0, "one-hot entropy " + num(h_onehot));

    const double ln4096 = 12.0 * std::log(2.0);
    std::vector<double> uniform(d, 0.25);
    for (std::size_t i = 0; i < d; i += 2) uniform[i] = -0.25;
    const auto h_uniform = vector_entropy(as_vectors({uniform}));
    c.expect(std::abs(h_uniform - ln4096) <= 1e-9, "uniform entropy " + num(h_uniform));
    c.expect(std::abs(ln4096 - 8.317766) < 1e-6, "ln 4096 " + num(ln4096));

    std::vector<double> e1(4, 0.0), e2(4, 0.0);
    e1[0] = 1.0;
    e2[1] = 1.0;
    const auto h_two = vector_entropy(as_vectors({e1, e2}));
    c.expect(std::abs(h_two - std::log(2.0)) <= 1e-9, "orthogonal one-hots " + num(h_two));

    std::mt19937_64 rng(4242);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    double worst = 0.0;
    for (int set = 0; set < 1000; ++set) {
        const std::size_t dim = std::vector<std::size_t>{4, 16, 64, 256}[set % 4];
        std::vector<std::vector<double>> vs(1 + rng() % 8, std::vector<double>(dim));
        for (auto& v : vs) {
            for (auto& x : v) x = normal(rng);
        }
        const double h = vector_entropy(as_vectors(vs));
        const double oracle = entropy_oracle(vs);
        auto scaled = vs;
        for (auto& v : scaled) {
            const double f = scale(rng);
            for (auto& x : v) x *= f;
        }
        std::shuffle(scaled.begin(), scaled.end(), rng);
        const double h_scaled = vector_entropy(as_vectors(scaled));
        worst = std::max({worst, std::abs(h - oracle), std::abs(h_scaled - h)});
        c.expect(std::abs(h - oracle) <= 1e-9, "set " + std::to_string(set) + ": oracle mismatch");
        c.expect(std::abs(h_scaled - h) <= 1e-9, "set " + std::to_string(set) + ": not scale/permutation invariant");
        c.expect(h >= 0.0 && h <= std::log(static_cast<double>(dim)) + 1e-12, "set " + std::to_string(set) + ": range");
    }
    c.note("uniform=" + num(h_uniform) + ", max deviation " + num(worst));
}

// ---------------------------------------------------------------- metric identities

// Greedy injective matching in candidate order, written independently.
std::size_t matched_oracle(const std::vector<std::string>& gen, std::vector<std::string> gold, const Matcher& m) {
    // Gold answers are deduplicated by normalized text.
    std::vector<std::string> unique;
    std::set<std::string> keys;
    for (const auto& g : gold) {
        if (keys.insert(text::normalize_answer(g)).second) unique.push_back(g);
    }
    std::vector<bool> used(unique.size(), false);
    std::size_t n = 0;
    for (const auto& cand : gen) {
        for (std::size_t i = 0; i < unique.size(); ++i) {
            if (!used[i] && m.accepts(cand, unique[i])) {
                used[i] = true;
                ++n;
                break;
            }
        }
    }
    return n;
}

void criterion_metric_identities(Check& c) {
    std::mt19937_64 rng(777);
    const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"};
    auto phrase = [&](std::size_t max_words) {
        std::string s;
        for (std::size_t w = 1 + rng() % max_words; w > 0; --w) s += (s.empty() ? "" : " ") + vocab[rng() % vocab.size()];
        return s;
    };
    const Matcher matchers[] = {Matcher(MatcherKind::normalized_exact), Matcher(MatcherKind::containment)};
    for (int triple = 0; triple < 200; ++triple) {
        const Matcher& m = matchers[triple % 2];
        std::vector<std::string> gen, gold, passages;
        for (auto n = rng() % 7; n > 0; --n) gen.push_back(phrase(3));
        for (auto n = 1 + rng() % 6; n > 0; --n) gold.push_back(phrase(2));
        std::vector<FactualUnit> units;
        for (std::size_t i = 0; i < gold.size(); ++i) units.push_back({"u" + std::to_string(i), gold[i], {}});
        for (auto n = rng() % 6; n > 0; --n) passages.push_back(phrase(6));

        const auto s = answer_scores(gen, gold, m);
        const std::size_t a_star = matched_oracle(gen, gold, m);
        const std::string tag = "triple " + std::to_string(triple);
        c.expect(s.matched == a_star, tag + ": |A*| " + std::to_string(s.matched) + " vs oracle " + std::to_string(a_star));
        c.expect(s.accuracy.numerator == a_star && s.coverage.numerator == a_star, tag + ": numerators differ");
        if (!gen.empty()) {
            c.expect(s.accuracy.denominator == gen.size(), tag + ": |A_gen|");
            c.expect(std::abs(s.accuracy.value * static_cast<double>(gen.size()) - static_cast<double>(a_star)) <= 1e-12,
                     tag + ": AA*|A_gen| != |A*|");
        } else {
            c.expect(s.accuracy.value == 0.0 && s.accuracy.empty_output, tag + ": empty output convention");
        }
        c.expect(std::abs(s.coverage.value * static_cast<double>(s.coverage.denominator) - static_cast<double>(a_star)) <=
                     1e-12,
                 tag + ": AC*|A_gold| != |A*|");
        for (double v : {s.accuracy.value, s.coverage.value}) c.expect(v >= 0.0 && v <= 1.0, tag + ": AA/AC range");

        double previous = -1.0;
        std::vector<std::string> growing;
        for (std::size_t i = 0; i <= passages.size(); ++i) {
            const auto irr = information_recall_rate(growing, units, m);
            c.expect(irr.value >= 0.0 && irr.value <= 1.0, tag + ": IRR range");
            c.expect(irr.value >= previous, tag + ": IRR decreased when a passage was added");
            previous = irr.value;
            if (i < passages.size()) growing.push_back(passages[i]);
        }
    }
    c.note("200 triples");
}

// ---------------------------------------------------------------- planted suite

struct Planted {
    testkit::PlantedSuite suite = testkit::make_planted_suite();
    VectorIndex index = testkit::planted_index(suite);
    Providers providers{testkit::planted_embedder(suite), testkit::planted_llm(suite), ""};
};

const Planted& planted() {
    static const Planted p;
    return p;
}

StrategyConfig strategy(PoolMode kind) {
    StrategyConfig s;
    s.kind = kind;
    return s;
}

void criterion_planted_dominance(Check& c) {
    const auto& p = planted();
    const Matcher containment(MatcherKind::containment);
    const auto multi_q = std::span<const QuestionRecord>(p.suite.questions).subspan(0, 1);
    const auto multi = run_evaluation(multi_q, p.index, strategy(PoolMode::multi_intent), p.providers, containment);
    const auto naive = run_evaluation(multi_q, p.index, strategy(PoolMode::naive), p.providers, containment);
    c.expect(multi.failures == 0 && naive.failures == 0, "evaluation failures");
    const double irr_multi = multi.per_question.at(0).metrics.at("IRR").value;
    const double irr_naive = naive.per_question.at(0).metrics.at("IRR").value;
    c.expect(p.index.size() == 200, "corpus has " + std::to_string(p.index.size()) + " chunks");
    c.expect(irr_multi == 1.0, "multi_intent IRR " + num(irr_multi));
    c.expect(irr_multi > irr_naive, "multi_intent IRR does not exceed naive " + num(irr_naive));

    // Brute-force check of the construction: the raw question alone ranks no
    // planted chunk in its exhaustive top 10.
    const auto q = p.providers.embedder->embed(p.suite.questions[0].question);
    std::vector<std::pair<double, std::string>> all;
    for (std::size_t i = 0; i < p.index.size(); ++i) {
        const auto v = p.index.vector(i);
        double dot = 0, nv = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            dot += static_cast<double>(v[j]) * q[j];
            nv += static_cast<double>(v[j]) * v[j];
        }
        all.emplace_back(dot / std::sqrt(nv), p.index.chunk_id(i));
    }
    std::sort(all.begin(), all.end(), std::greater<>());
    for (std::size_t r = 0; r < 10; ++r) {
        c.expect(all[r].second.rfind("planted-", 0) != 0, "raw question ranks " + all[r].second + " in top 10");
    }
    c.note("IRR multi_intent=" + num(irr_multi) + ", naive=" + num(irr_naive));
}

// ---------------------------------------------------------------- exact search

void criterion_exact_search(Check& c) {
    std::mt19937_64 rng(6060);
    std::normal_distribution<double> normal;
    const std::size_t dims[] = {8, 64, 256};
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = dims[trial % 3];
        const std::size_t n = 1 + rng() % 1000;
        VectorIndex index(dim);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(dim);
            for (auto& x : v) x = normal(rng);
            index.add("v" + std::to_string(i), EmbeddingVector(std::move(v)));
        }
        std::vector<double> qv(dim);
        for (auto& x : qv) x = normal(rng);
        const EmbeddingVector query(qv);
        const auto list = index.search(query, 10);

        // Exhaustive cosine over the stored vectors.
        std::map<std::string, double> by_id;
        std::vector<std::pair<double, std::string>> all;
        double qn = 0;
        for (double x : qv) qn += x * x;
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = index.vector(i);
            double dot = 0, nv = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                dot += static_cast<double>(v[j]) * qv[j];
                nv += static_cast<double>(v[j]) * v[j];
            }
            const double s = dot / std::sqrt(nv * qn);
            all.emplace_back(s, index.chunk_id(i));
            by_id[index.chunk_id(i)] = s;
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        const std::string tag = "index " + std::to_string(trial);
        c.expect(list.entries.size() == std::min<std::size_t>(10, n), tag + ": size");
        for (std::size_t r = 0; r < list.entries.size(); ++r) {
            const auto& e = list.entries[r];
            c.expect(e.rank == r + 1, tag + ": rank");
            c.expect(std::abs(e.score - all[r].first) <= 1e-9, tag + ": score at rank " + std::to_string(r + 1));
            // Different ids are acceptable only between tied scores.
            c.expect(e.chunk_id == all[r].second || std::abs(by_id[e.chunk_id] - all[r].first) <= 1e-9,
                     tag + ": id at rank " + std::to_string(r + 1));
        }
    }
    c.note("50 indices");
}

// ---------------------------------------------------------------- CLI determinism

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string(INTENTRAG_CLI_PATH) + " " + args + " >>'" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_determinism(Check& c) {
    const auto& p = planted();
    testkit::TempDir dir;
    const auto q = [&](const std::string& name) { return "'" + (dir / name).string() + "'"; };
    save_corpus(dir / "corpus.jsonl", p.suite.documents);
    save_qa_dataset(dir / "qa.jsonl", p.suite.questions);
    testkit::write_planted_script(dir / "script.jsonl", p.suite);
    const auto log = dir / "log.txt";
    c.expect(run_cli("ingest " + q("corpus.jsonl") + " --out " + q("chunks.jsonl"), log) == 0, "ingest failed");
    c.expect(run_cli("index " + q("chunks.jsonl") + " --out " + q("index.bin") + " --embedder mock --embed-dim 1024 "
                     "--embed-seed 7", log) == 0,
             "index failed");
    const std::string eval = "eval " + q("qa.jsonl") + " --index " + q("index.bin") + " --llm mock --llm-script " +
                             q("script.jsonl") + " --matcher containment --seed 11";
    std::vector<std::string> reports;
    for (const char* workers : {"1", "1", "8", "8"}) {
        const auto name = "report_w" + std::string(workers) + "_" + std::to_string(reports.size()) + ".json";
        c.expect(run_cli(eval + " --workers " + workers + " --out " + q(name), log) == 0,
                 std::string("eval with ") + workers + " workers failed: " + slurp(log));
        reports.push_back(slurp(dir / name));
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
        c.expect(!reports[i].empty() && reports[i] == reports[0], "report " + std::to_string(i) + " differs");
    }
    c.note("4 runs (workers 1,1,8,8), " + std::to_string(reports[0].size()) + " bytes each");
}

// ---------------------------------------------------------------- persistence

void criterion_persistence(Check& c) {
    std::mt19937_64 rng(10000);
    std::normal_distribution<double> normal;
    const std::size_t dim = 32;
    VectorIndex index(dim);
    for (std::size_t i = 0; i < 10000; ++i) {
        std::vector<double> v(dim);
        for (auto& x : v) x = normal(rng);
        const auto doc = "doc" + std::to_string(i);
        index.add(doc + "#0", EmbeddingVector(std::move(v)), {doc, 0, "body " + std::to_string(i)});
    }
    testkit::TempDir dir;
    save_index(index, dir / "big.bin");
    const auto back = load_index(dir / "big.bin");
    c.expect(back.size() == index.size() && back.dim() == index.dim(), "size or dim changed");
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < std::min(back.size(), index.size()); ++i) {
        if (back.chunk_id(i) != index.chunk_id(i) ||
            std::memcmp(back.vector(i).data(), index.vector(i).data(), dim * sizeof(float)) != 0 ||
            back.meta(i) != index.meta(i)) {
            ++mismatched;
        }
    }
    c.expect(mismatched == 0, std::to_string(mismatched) + " entries differ after reload");
    for (int t = 0; t < 25; ++t) {
        std::vector<double> qv(dim);
        for (auto& x : qv) x = normal(rng);
        const EmbeddingVector query(qv);
        c.expect(back.search(query, 10) == index.search(query, 10), "search " + std::to_string(t) + " changed");
    }
    c.note("10000 entries, " + std::to_string(std::filesystem::file_size(dir / "big.bin")) + " bytes");
}

// ---------------------------------------------------------------- sweep stability

std::map<QueryRef, std::string> top1_per_intent(const PipelineResult& r) {
    std::map<QueryRef, std::string> out;
    for (const auto& q : r.query_pool.queries) {
        if (q.ref.is_raw_question()) continue;
        for (const auto& e : r.fused.entries) {
            if (std::any_of(e.contributions.begin(), e.contributions.end(),
                            [&](const Contribution& x) { return x.query == q.ref && x.rank == 1; })) {
                out[q.ref] = e.chunk_id;
                break;
            }
        }
    }
    return out;
}

void criterion_sweep_stability(Check& c) {
    const auto& p = planted();
    const Matcher containment(MatcherKind::containment);
    const auto base = strategy(PoolMode::multi_intent);
    const std::vector<std::size_t> depths{10, 20, 50};
    const auto by_depth = sweep(p.suite.questions, p.index, base, p.providers, SweepParameter::per_query_depth, depths,
                                containment);
    for (std::size_t q = 0; q < p.suite.questions.size(); ++q) {
        const auto& first = by_depth.rows.at(0).report.per_question.at(q);
        c.expect(!first.failed(), p.suite.questions[q].id + " failed");
        if (first.failed()) continue;
        const double r0 = first.metrics.at("R@K").value;
        for (const auto& row : by_depth.rows) {
            const double r = row.report.per_question.at(q).metrics.at("R@K").value;
            c.expect(r == r0, p.suite.questions[q].id + ": R@10 " + num(r) + " at per-query depth " +
                                  std::to_string(row.value) + " vs " + num(r0));
        }
    }

    std::set<std::string> planted_ids;
    for (const auto& d : testkit::planted_drugs()) planted_ids.insert(d.chunk_id());
    const std::vector<std::size_t> smoothing{10, 30, 60, 90};
    const auto by_k =
        sweep(p.suite.questions, p.index, base, p.providers, SweepParameter::fusion_smoothing, smoothing, containment);
    for (std::size_t q = 0; q < p.suite.questions.size(); ++q) {
        const auto& ref_result = by_k.rows.at(0).report.per_question.at(q).result;
        if (!ref_result) continue;
        const auto reference = top1_per_intent(*ref_result);
        c.expect(!reference.empty(), p.suite.questions[q].id + ": no intent top-1");
        for (const auto& row : by_k.rows) {
            const auto& result = *row.report.per_question.at(q).result;
            c.expect(top1_per_intent(result) == reference,
                     p.suite.questions[q].id + ": top-1 per intent changed at smoothing " + std::to_string(row.value));
            if (q == 0) {
                std::set<std::string> top5;
                for (std::size_t i = 0; i < 5 && i < result.fused.entries.size(); ++i) {
                    top5.insert(result.fused.entries[i].chunk_id);
                }
                c.expect(top5 == planted_ids, "fused top-5 is not the planted set at smoothing " +
                                                   std::to_string(row.value));
            }
        }
    }
    c.note("per-query depths {10,20,50}, smoothing {10,30,60,90}, " + std::to_string(p.suite.questions.size()) +
           " questions");
}

// ---------------------------------------------------------------- EM / F1

void criterion_em_f1(Check& c) {
    const std::vector<std::string> gold{"Eiffel Tower"};
    const double em = exact_match("the Eiffel Tower", gold);
    c.expect(em == 1.0, "EM " + num(em));
    const std::vector<std::string> pred_tokens{"a", "b"};
    const std::vector<std::string> gold_tokens{"b", "c"};
    const double f1 = token_f1(pred_tokens, gold_tokens);
    c.expect(f1 == 0.5, "F1 " + num(f1));
    c.note("EM=" + num(em) + ", F1=" + num(f1));
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void(Check&)> run;
    };
    const Criterion criteria[] = {
        {"RRF oracle equivalence", criterion_rrf_oracle},
        {"RRF hand values", criterion_rrf_hand_values},
        {"Vector entropy suite", criterion_entropy},
        {"Metric identities", criterion_metric_identities},
        {"Planted-corpus dominance", criterion_planted_dominance},
        {"Exact search oracle", criterion_exact_search},
        {"Determinism", criterion_determinism},
        {"Persistence round-trip", criterion_persistence},
        {"Sweep stability", criterion_sweep_stability},
        {"EM/F1 conventions", criterion_em_f1},
    };
    int failed = 0;
    int number = 0;
    for (const auto& criterion : criteria) {
        ++number;
        Check check;
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        if (!check.ok()) ++failed;
        std::cout << (check.ok() ? "PASS" : "FAIL") << "  " << number << ". " << criterion.name << check.summary()
                  << std::endl;
    }
    std::cout << (std::size(criteria) - failed) << "/" << std::size(criteria) << " criteria passed" << std::endl;
    return failed;
}
