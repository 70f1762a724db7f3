#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

#include "commitdistill/retrieval.hpp"
#include "support/oracles.hpp"

using namespace commitdistill;

namespace {

KnowledgeUnit unit(UnitType type, std::string content, double weight = 0.75) {
    KnowledgeUnit u;
    u.type = type;
    u.content = std::move(content);
    u.id = unit_id(u.type, u.content);
    u.title = make_title(u.content);
    u.weight = weight;
    u.meta = {"abc12345", "Ada", "2021-01-01T00:00:00+00:00", "commit-message"};
    return u;
}

std::multiset<std::string> bag(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::vector<std::string> ids(const std::vector<RankedHit>& hits) {
    std::vector<std::string> out;
    for (const auto& h : hits) out.push_back(h.unit.id);
    return out;
}

}  // namespace

TEST(Tokenize, SnakeCaseKeepsOriginal) {
    EXPECT_EQ(bag(tokenize("fix_redirect_loop")), bag({"fix_redirect_loop", "fix", "redirect", "loop"}));
}

TEST(Tokenize, CamelCaseKeepsOriginal) {
    EXPECT_EQ(bag(tokenize("redirectLoopHandler")), bag({"redirectloophandler", "redirect", "loop", "handler"}));
}

TEST(Tokenize, EmptyAndPunctuation) {
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_TRUE(tokenize("  ,.;!? ").empty());
    EXPECT_EQ(tokenize("Hello, World!"), (std::vector<std::string>{"hello", "world"}));
}

TEST(Tokenize, AllCapsAndDigits) {
    EXPECT_EQ(bag(tokenize("MAX_RETRIES")), bag({"max_retries", "max", "retries"}));
    EXPECT_EQ(bag(tokenize("HTTPAdapter")), bag({"httpadapter", "http", "adapter"}));
    EXPECT_EQ(bag(tokenize("utf8 2.0")), bag({"utf8", "utf", "2", "0"}));
    EXPECT_EQ(bag(tokenize("sha256Sum")), bag({"sha256sum", "sha", "sum"}));
}

TEST(BuildIndex, EmptyCorpus) {
    auto idx = build_index({});
    EXPECT_EQ(idx.size(), 0u);
    EXPECT_TRUE(query(idx, "anything", 10, 0.0).empty());
}

TEST(BuildIndex, SingleUnitIsRetrievable) {
    auto idx = build_index({unit(UnitType::fact, "sessions must close")});
    EXPECT_EQ(idx.df("sessions"), 1u);
    EXPECT_DOUBLE_EQ(idx.idf("sessions"), std::log(2.0));
    EXPECT_EQ(query(idx, "sessions", 3, 0.0).size(), 1u);
}

TEST(BuildIndex, ThreeUnitIdfTable) {
    auto idx = build_index({unit(UnitType::fact, "pool timeout must be set"), unit(UnitType::fact, "pool size must grow"),
                            unit(UnitType::skill, "cookie jar")});
    // ln(3/2) and ln(3/1), hand-computed
    const double shared = 0.4054651081081644, unique = 1.0986122886681098;
    EXPECT_NEAR(idx.idf("pool"), shared, 1e-15);
    EXPECT_NEAR(idx.idf("must"), shared, 1e-15);
    for (const char* t : {"timeout", "be", "set", "size", "grow", "cookie", "jar"}) EXPECT_NEAR(idx.idf(t), unique, 1e-15) << t;
    EXPECT_EQ(idx.idf("absent"), 0.0);
    EXPECT_EQ(idx.doc_length(0), 5u);
    EXPECT_EQ(idx.doc_length(2), 2u);
}

TEST(BuildIndex, TermInEveryDocumentHasZeroIdf) {
    auto idx = build_index({unit(UnitType::fact, "pool a"), unit(UnitType::fact, "pool b")});
    EXPECT_EQ(idx.idf("pool"), 0.0);
}

TEST(Query, TwoDocFixtureMatchesOracle) {
    auto d1 = unit(UnitType::fact, "intersphinx label required");
    auto d2 = unit(UnitType::fact, "session cookie signing");
    auto idx = build_index({d1, d2});
    auto hits = query(idx, "intersphinx label", 10, 0.0);
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].unit.id, d1.id);
    // 2 ln 2 / sqrt(3) * 1.0 * 0.875
    EXPECT_NEAR(hits[0].score, 0.7003302447475505, 1e-12);
    auto oracle = testsupport::oracle_tfidf({{tokenize(d1.content), 1.0, 0.75}, {tokenize(d2.content), 1.0, 0.75}},
                                            tokenize("intersphinx label"));
    EXPECT_NEAR(hits[0].score, oracle[0], 1e-12);
    EXPECT_EQ(oracle[1], 0.0);
}

TEST(Query, OodSilence) {
    auto idx = build_index({unit(UnitType::fact, "intersphinx label required"), unit(UnitType::pattern, "pool exhausted")});
    EXPECT_TRUE(query(idx, "kubernetes helm chart", 3, 2.5).empty());
    EXPECT_TRUE(query(idx, "kubernetes helm chart", 3, 0.0).empty());
}

TEST(Query, ThetaZeroAlwaysAnswersOverlap) {
    auto idx = build_index({unit(UnitType::fact, "intersphinx label required"), unit(UnitType::pattern, "pool exhausted")});
    EXPECT_GE(query(idx, "pool", 3, 0.0).size(), 1u);
}

TEST(Query, EmptyQueryAlwaysSilent) {
    auto idx = build_index({unit(UnitType::fact, "intersphinx label required")});
    for (double theta : {0.0, 1.0, 2.5}) {
        EXPECT_TRUE(query(idx, "", 3, theta).empty());
        EXPECT_TRUE(query(idx, "?!", 3, theta).empty());
    }
}

TEST(Query, TopKAndTieBreakById) {
    std::vector<KnowledgeUnit> units;
    for (const char* c : {"alpha pool", "beta pool", "gamma pool", "delta other"}) units.push_back(unit(UnitType::fact, c));
    auto idx = build_index(units);
    auto hits = query(idx, "pool", 2, 0.0);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].score, hits[1].score);
    EXPECT_LT(hits[0].unit.id, hits[1].unit.id);
    std::vector<std::string> expected;
    for (int i = 0; i < 3; ++i) expected.push_back(units[i].id);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(ids(query(idx, "pool", 10, 0.0)), expected);
}

TEST(Query, TypeBoostOrdersEqualTexts) {
    auto f = unit(UnitType::fact, "pool exhausted crash", 0.8);
    auto s = unit(UnitType::skill, "pool exhausted crash", 0.8);
    auto p = unit(UnitType::pattern, "pool exhausted crash", 0.8);
    auto idx = build_index({f, s, p, unit(UnitType::fact, "unrelated words here")});
    auto hits = query(idx, "pool crash", 3, 0.0);
    EXPECT_EQ(ids(hits), (std::vector<std::string>{p.id, s.id, f.id}));
    EXPECT_NEAR(hits[0].score / hits[2].score, 1.2, 1e-12);
    EXPECT_NEAR(hits[1].score / hits[2].score, 1.1, 1e-12);
}

TEST(Query, PriorMultiplier) {
    auto hi = unit(UnitType::fact, "pool exhausted", 1.0);
    auto lo = unit(UnitType::fact, "pool exhausted.", 0.0);
    auto idx = build_index({hi, lo, unit(UnitType::fact, "other text")});
    auto hits = query(idx, "pool", 2, 0.0);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_NEAR(hits[1].score / hits[0].score, 0.5, 1e-12);
}

TEST(QueryProperties, NeutralParametersReduceToPlainTfIdf) {
    std::mt19937 rng(11);
    const std::vector<std::string> vocab = {"pool", "session", "cookie", "redirect", "timeout", "proxy", "auth", "chunk"};
    BoostTable neutral{1.0, 1.0, 1.0};
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<KnowledgeUnit> units;
        std::vector<testsupport::OracleDoc> docs;
        for (int d = 0; d < 8; ++d) {
            std::string content = "doc" + std::to_string(d);
            int n = 1 + static_cast<int>(rng() % 6);
            for (int i = 0; i < n; ++i) content += " " + vocab[rng() % vocab.size()];
            units.push_back(unit(static_cast<UnitType>(rng() % 3), content, 1.0));
            docs.push_back({tokenize(content), 1.0, 1.0});
        }
        std::string q = vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()];
        auto scores = score_all(build_index(units), q, neutral);
        auto oracle = testsupport::oracle_tfidf(docs, tokenize(q));
        for (std::size_t i = 0; i < scores.size(); ++i) EXPECT_NEAR(scores[i], oracle[i], 1e-12);
    }
}

TEST(QueryProperties, BoostMonotonicity) {
    std::vector<KnowledgeUnit> units = {unit(UnitType::pattern, "pool exhausted crash"), unit(UnitType::fact, "pool size fact"),
                                        unit(UnitType::fact, "crash pool pool"), unit(UnitType::skill, "raise pool size"),
                                        unit(UnitType::fact, "unrelated")};
    auto idx = build_index(units);
    auto base = score_all(idx, "pool crash size", {});
    auto fact_order = [&](const std::vector<double>& s) { return s[1] < s[2]; };
    for (double b : {1.2, 1.5, 3.0, 10.0}) {
        auto boosted = score_all(idx, "pool crash size", {1.0, 1.1, b});
        for (std::size_t i = 0; i < units.size(); ++i) {
            if (units[i].type == UnitType::pattern) EXPECT_GE(boosted[i], base[i]);
            else EXPECT_EQ(boosted[i], base[i]);
        }
        EXPECT_EQ(fact_order(boosted), fact_order(base));
    }
}

TEST(QueryProperties, AbstentionMonotonicity) {
    std::vector<KnowledgeUnit> units;
    std::mt19937 rng(5);
    const std::vector<std::string> vocab = {"pool", "session", "cookie", "redirect", "timeout", "proxy"};
    for (int d = 0; d < 15; ++d) {
        std::string c;
        for (int i = 0; i < 3; ++i) c += vocab[rng() % vocab.size()] + " ";
        c += "u" + std::to_string(d);
        units.push_back(unit(static_cast<UnitType>(d % 3), c, 0.4 + 0.05 * d));
    }
    auto idx = build_index(units);
    for (const char* q : {"pool session", "cookie", "redirect timeout proxy", "u3 pool"}) {
        std::set<std::string> prev;
        bool first = true;
        for (double theta : {0.0, 0.25, 0.5, 1.0, 1.5, 2.5, 5.0}) {
            auto hits = ids(query(idx, q, 100, theta));
            std::set<std::string> cur(hits.begin(), hits.end());
            if (!first) EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end())) << q;
            prev = cur;
            first = false;
        }
    }
}

TEST(QueryProperties, EmittedScoresRespectThetaAndOrder) {
    std::vector<KnowledgeUnit> units;
    for (int d = 0; d < 20; ++d)
        units.push_back(unit(static_cast<UnitType>(d % 3), "pool item" + std::to_string(d % 4) + " x" + std::to_string(d)));
    auto idx = build_index(units);
    auto hits = query(idx, "pool item1 x5", 10, 0.3);
    for (std::size_t i = 0; i < hits.size(); ++i) {
        EXPECT_GE(hits[i].score, 0.3);
        if (i) {
            EXPECT_TRUE(hits[i - 1].score > hits[i].score ||
                        (hits[i - 1].score == hits[i].score && hits[i - 1].unit.id < hits[i].unit.id));
        }
    }
    EXPECT_EQ(ids(query(idx, "pool item1 x5", 10, 0.3)), ids(hits));
}

TEST(RenderHybrid, EmptyBodyHeaderOnly) {
    RankedHit h{unit(UnitType::pattern, "Crash occurs when the pool is exhausted."), 3.0};
    EXPECT_EQ(render_hybrid(h, ""), "pattern:Crash occurs when the pool is exhausted.");
    EXPECT_EQ(render_hybrid(h, "\n\n  \n"), hybrid_header(h.unit));
}

TEST(RenderHybrid, CapsBodyToThreeLinesAnd140Chars) {
    RankedHit h{unit(UnitType::skill, "raise the pool size."), 3.0};
    std::string body;
    for (int i = 0; i < 10; ++i) body += "line " + std::to_string(i) + " " + std::string(44, 'x') + "\n\n";
    auto out = render_hybrid(h, body);
    auto header = hybrid_header(h.unit);
    ASSERT_EQ(out.rfind(header + "\n", 0), 0u);
    auto excerpt = out.substr(header.size() + 1);
    EXPECT_LE(excerpt.size(), 140u);
    EXPECT_EQ(excerpt, body_excerpt(body));
    EXPECT_EQ(excerpt.find("line 3"), std::string::npos);
    EXPECT_EQ(excerpt.rfind("line 0 ", 0), 0u);
    // payload = raw body excerpt + header + separator
    EXPECT_EQ(out.size(), body_excerpt(body).size() + header.size() + 1);
}

TEST(RenderHybrid, ShortBodyKeptWhole) {
    EXPECT_EQ(body_excerpt("first\n\nsecond\nthird\nfourth"), "first\nsecond\nthird");
}
