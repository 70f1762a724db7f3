#pragma once

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "commitdistill/baselines.hpp"
#include "commitdistill/eval/bench.hpp"
#include "commitdistill/eval/metrics.hpp"
#include "commitdistill/extraction.hpp"
#include "commitdistill/retrieval.hpp"

namespace commitdistill::eval {

inline const std::vector<std::size_t>& default_budgets() {
    static const std::vector<std::size_t> b = {64, 128, 256, 512, 1024, 2048};
    return b;
}

inline const std::vector<double>& default_theta_grid() {
    static const std::vector<double> g = {0.0, 1.0, 2.0, 2.5, 3.0};
    return g;
}

inline constexpr std::size_t kJackknifeBudget = 256;

// ---------------------------------------------------------------------------
// Budget-constrained benchmark

/// A retriever for the budget benchmark: query -> top-10 candidate texts.
struct TextRanker {
    std::string name;
    std::function<std::vector<std::string>(const BenchQuery&)> rank;
};

struct BudgetRow {
    std::string retriever;
    std::map<std::size_t, double> hit_rate;               // per finite budget
    std::map<std::size_t, std::vector<bool>> per_query;  // per finite budget
    double unlimited_hit_rate = 0.0;                      // budget = infinity
    std::vector<bool> unconstrained_hits;                 // Hit@10, no packing
    double unconstrained_hit_at_10 = 0.0;
    std::optional<double> jackknife_min_256;
    double median_top1_length = 0.0;
};

struct BudgetTable {
    std::vector<std::size_t> budgets;
    std::size_t n_queries = 0;
    std::vector<BudgetRow> rows;
};

inline BudgetTable budget_sweep(const std::vector<BenchQuery>& queries, const std::vector<TextRanker>& rankers,
                                const std::vector<std::size_t>& budgets = default_budgets()) {
    BudgetTable table;
    table.budgets = budgets;
    table.n_queries = queries.size();
    for (const auto& ranker : rankers) {
        BudgetRow row;
        row.retriever = ranker.name;
        std::vector<bool> unlimited;
        std::vector<double> top1_lengths;
        for (const auto& q : queries) {
            if (q.answer_span.empty()) throw InvalidInput("budget_sweep: query '" + q.query + "' has no answer span");
            auto ranked = ranker.rank(q);
            if (ranked.size() > kEvalTopK) ranked.resize(kEvalTopK);
            if (!ranked.empty()) top1_lengths.push_back(static_cast<double>(ranked.front().size()));
            row.unconstrained_hits.push_back(!ranked.empty() && budget_hit(ranked, q.answer_span));
            for (auto b : budgets) {
                std::vector<std::string> packed;
                for (auto i : budget_pack(ranked, b)) packed.push_back(ranked[i]);
                row.per_query[b].push_back(!packed.empty() && budget_hit(packed, q.answer_span));
            }
            std::vector<std::string> all_packed;
            for (auto i : budget_pack(ranked, kUnlimitedBudget)) all_packed.push_back(ranked[i]);
            unlimited.push_back(!all_packed.empty() && budget_hit(all_packed, q.answer_span));
        }
        for (auto b : budgets) row.hit_rate[b] = hit_rate(row.per_query[b]);
        row.unlimited_hit_rate = hit_rate(unlimited);
        row.unconstrained_hit_at_10 = hit_rate(row.unconstrained_hits);
        if (queries.size() >= 2) {
            std::vector<bool> at256;
            if (row.per_query.count(kJackknifeBudget)) {
                at256 = row.per_query[kJackknifeBudget];
            } else {
                for (const auto& q : queries) {
                    auto ranked = ranker.rank(q);
                    if (ranked.size() > kEvalTopK) ranked.resize(kEvalTopK);
                    std::vector<std::string> packed;
                    for (auto i : budget_pack(ranked, kJackknifeBudget)) packed.push_back(ranked[i]);
                    at256.push_back(!packed.empty() && budget_hit(packed, q.answer_span));
                }
            }
            row.jackknife_min_256 = jackknife_min(at256);
        }
        row.median_top1_length = median(top1_lengths);
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline nlohmann::json to_json(const BudgetTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json rates = nlohmann::json::object();
        for (const auto& [b, v] : r.hit_rate) rates[std::to_string(b)] = v;
        rows.push_back({{"retriever", r.retriever},
                        {"hit_rate", rates},
                        {"hit_rate_unlimited", r.unlimited_hit_rate},
                        {"unconstrained_hit_at_10", r.unconstrained_hit_at_10},
                        {"jackknife_min_256", r.jackknife_min_256 ? nlohmann::json(*r.jackknife_min_256) : nlohmann::json()},
                        {"median_top1_length", r.median_top1_length}});
    }
    return {{"budgets", t.budgets}, {"n_queries", t.n_queries}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Silence-threshold sweep

struct SweepTable {
    std::vector<double> thetas;
    /// class -> per-theta fraction of queries that returned at least one hit
    std::map<QueryClass, std::vector<double>> rates;
    std::map<QueryClass, std::size_t> counts;
};

inline SweepTable threshold_sweep(const std::vector<BenchQuery>& queries, const RetrievalIndex& index,
                                  const std::vector<double>& thetas = default_theta_grid(),
                                  const BoostTable& boosts = {}) {
    SweepTable t;
    t.thetas = thetas;
    std::map<QueryClass, std::vector<std::size_t>> hits;
    for (const auto& q : queries) {
        ++t.counts[q.query_class];
        auto& h = hits[q.query_class];
        h.resize(thetas.size(), 0);
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            if (!query(index, q.query, kEvalTopK, thetas[i], boosts).empty()) ++h[i];
        }
    }
    for (const auto& [cls, h] : hits) {
        auto& r = t.rates[cls];
        for (auto v : h) r.push_back(static_cast<double>(v) / static_cast<double>(t.counts[cls]));
    }
    return t;
}

inline nlohmann::json to_json(const SweepTable& t) {
    nlohmann::json rates = nlohmann::json::object();
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [cls, r] : t.rates) rates[std::string(to_string(cls))] = r;
    for (const auto& [cls, n] : t.counts) counts[std::string(to_string(cls))] = n;
    return {{"thetas", t.thetas}, {"hit_rate", rates}, {"n", counts}};
}

// ---------------------------------------------------------------------------
// Time-travel regression finding

enum class TimeTravelRetriever { grep, bm25, cd_v1, cd_v2 };

inline std::string_view to_string(TimeTravelRetriever r) {
    switch (r) {
        case TimeTravelRetriever::grep: return "grep";
        case TimeTravelRetriever::bm25: return "bm25";
        case TimeTravelRetriever::cd_v1: return "cd-v1";
        case TimeTravelRetriever::cd_v2: return "cd-v2";
    }
    return "grep";
}

inline TimeTravelRetriever time_travel_retriever_from_string(std::string_view s) {
    if (s == "grep") return TimeTravelRetriever::grep;
    if (s == "bm25") return TimeTravelRetriever::bm25;
    if (s == "cd-v1") return TimeTravelRetriever::cd_v1;
    if (s == "cd-v2") return TimeTravelRetriever::cd_v2;
    throw InvalidInput("unknown retriever '" + std::string(s) + "'");
}

inline constexpr std::size_t kDefaultWindow = 5000;

struct TimeTravelCase {
    Commit fix;
    std::vector<Commit> window;  // newest-first, author_date strictly before the fix
    std::set<std::string> ground_truth;
};

/// Commits (in list order) authored strictly before `t`, at most `window_size`.
inline std::vector<Commit> window_before(const std::vector<Commit>& history, Timestamp t, std::size_t window_size) {
    std::vector<Commit> w;
    for (const auto& c : history) {
        if (w.size() == window_size) break;
        if (c.timestamp() < t) w.push_back(c);
    }
    return w;
}

/// Resolves changed-file sets on demand, once per sha.
class ChangedFilesCache {
public:
    explicit ChangedFilesCache(std::function<std::set<std::string>(const std::string&)> fetch)
        : fetch_(std::move(fetch)) {}
    static ChangedFilesCache for_repo(std::filesystem::path repo) {
        return ChangedFilesCache([repo = std::move(repo)](const std::string& sha) { return changed_files(repo, sha); });
    }
    const std::set<std::string>& get(const Commit& c) {
        if (c.changed_files) return *c.changed_files;
        auto it = cache_.find(c.sha);
        if (it == cache_.end()) it = cache_.emplace(c.sha, fetch_(c.sha)).first;
        return it->second;
    }

private:
    std::function<std::set<std::string>(const std::string&)> fetch_;
    std::map<std::string, std::set<std::string>> cache_;
};

/// The most recent bug-fix commits that have at least one prior bug-fix
/// touching a common file within their window.
inline std::vector<TimeTravelCase> select_cases(const std::vector<Commit>& history, std::size_t n_fixes,
                                                std::size_t window_size, ChangedFilesCache& files) {
    std::vector<TimeTravelCase> cases;
    for (const auto& fix : history) {
        if (cases.size() == n_fixes) break;
        if (!is_bugfix_subject(fix.subject)) continue;
        const auto& fix_files = files.get(fix);
        if (fix_files.empty()) continue;
        TimeTravelCase tc;
        tc.fix = fix;
        tc.window = window_before(history, fix.timestamp(), window_size);
        for (const auto& c : tc.window) {
            if (!is_bugfix_subject(c.subject)) continue;
            const auto& cf = files.get(c);
            bool shares = std::any_of(cf.begin(), cf.end(), [&](const std::string& f) { return fix_files.count(f) > 0; });
            if (shares) tc.ground_truth.insert(c.sha);
        }
        if (!tc.ground_truth.empty()) cases.push_back(std::move(tc));
    }
    if (cases.size() < n_fixes) {
        throw InsufficientFixes("time travel: found " + std::to_string(cases.size()) + " qualifying fixes, need " +
                                    std::to_string(n_fixes),
                                cases.size());
    }
    return cases;
}

/// Per-commit extraction results, memoised across cases.
class UnitCache {
public:
    const std::vector<KnowledgeUnit>& get(const Commit& c, bool fallback) {
        auto& slot = fallback ? v2_ : v1_;
        auto it = slot.find(c.sha);
        if (it == slot.end()) it = slot.emplace(c.sha, extract_commit(c, default_rules(), fallback)).first;
        return it->second;
    }

private:
    std::map<std::string, std::vector<KnowledgeUnit>> v1_, v2_;
};

/// Everything a retriever is allowed to see for one case.
struct RetrieverState {
    TimeTravelRetriever kind;
    std::vector<Commit> commits;     // grep / bm25 corpus
    std::vector<KnowledgeUnit> units;  // CommitDistill corpus
    std::map<std::string, std::string> short_to_full;
};

inline RetrieverState make_state(const TimeTravelCase& tc, TimeTravelRetriever kind, UnitCache& units) {
    RetrieverState s;
    s.kind = kind;
    if (kind == TimeTravelRetriever::grep || kind == TimeTravelRetriever::bm25) {
        s.commits = tc.window;
        return s;
    }
    const bool fallback = kind == TimeTravelRetriever::cd_v2;
    std::map<std::string, KnowledgeUnit> by_id;
    for (const auto& c : tc.window) {
        s.short_to_full.try_emplace(c.short_sha(), c.sha);
        for (const auto& u : units.get(c, fallback)) by_id.try_emplace(u.id, u);
    }
    for (auto& [id, u] : by_id) s.units.push_back(std::move(u));
    return s;
}

/// The retriever's top-10 commit shas for the fix's cleaned subject.
inline std::vector<std::string> rank_commits(const RetrieverState& s, const Commit& fix, double theta) {
    const auto q = clean_subject(fix.subject);
    std::vector<std::string> out;
    switch (s.kind) {
        case TimeTravelRetriever::grep:
            for (const auto& h : grep_search(s.commits, q, kEvalTopK)) out.push_back(h.commit.sha);
            break;
        case TimeTravelRetriever::bm25: {
            auto idx = build_bm25(s.commits);
            for (const auto& h : bm25_query(idx, q, kEvalTopK)) out.push_back(h.commit.sha);
            break;
        }
        case TimeTravelRetriever::cd_v1:
        case TimeTravelRetriever::cd_v2: {
            auto idx = build_index(s.units);
            for (const auto& h : query(idx, q, kEvalTopK, theta)) {
                auto it = s.short_to_full.find(h.unit.meta.commit);
                out.push_back(it == s.short_to_full.end() ? h.unit.meta.commit : it->second);
            }
            break;
        }
    }
    std::erase(out, fix.sha);
    return out;
}

inline std::optional<std::size_t> best_rank(const std::vector<std::string>& ranked, const std::set<std::string>& truth) {
    for (std::size_t i = 0; i < ranked.size(); ++i)
        if (truth.count(ranked[i])) return i + 1;
    return std::nullopt;
}

struct FixOutcome {
    std::string fix_sha;
    std::string query;
    std::vector<std::string> ranked;
    std::set<std::string> ground_truth;
    std::optional<std::size_t> best_rank;
};

struct TimeTravelResult {
    std::string retriever;
    RankingMetrics metrics;
    std::vector<FixOutcome> per_fix;
};

inline TimeTravelResult evaluate_cases(const std::vector<TimeTravelCase>& cases, TimeTravelRetriever kind,
                                       double theta, UnitCache& units) {
    TimeTravelResult r;
    r.retriever = std::string(to_string(kind));
    std::vector<std::optional<std::size_t>> ranks;
    for (const auto& tc : cases) {
        auto state = make_state(tc, kind, units);
        FixOutcome o;
        o.fix_sha = tc.fix.sha;
        o.query = clean_subject(tc.fix.subject);
        o.ranked = rank_commits(state, tc.fix, theta);
        o.ground_truth = tc.ground_truth;
        o.best_rank = best_rank(o.ranked, o.ground_truth);
        ranks.push_back(o.best_rank);
        r.per_fix.push_back(std::move(o));
    }
    r.metrics = ranking_metrics(ranks);
    return r;
}

inline std::vector<TimeTravelResult> time_travel_eval(const std::filesystem::path& repo, std::size_t n_fixes,
                                                      std::size_t window_size,
                                                      const std::vector<TimeTravelRetriever>& retrievers,
                                                      double theta = kDefaultTheta,
                                                      std::size_t max_history = 1000000) {
    auto history = list_commits(repo, max_history);
    auto files = ChangedFilesCache::for_repo(repo);
    auto cases = select_cases(history, n_fixes, window_size, files);
    UnitCache units;
    std::vector<TimeTravelResult> out;
    for (auto kind : retrievers) out.push_back(evaluate_cases(cases, kind, theta, units));
    return out;
}

inline nlohmann::json to_json(const TimeTravelResult& r) {
    nlohmann::json fixes = nlohmann::json::array();
    for (const auto& f : r.per_fix) {
        fixes.push_back({{"fix", f.fix_sha},
                         {"query", f.query},
                         {"ranked", f.ranked},
                         {"ground_truth", f.ground_truth},
                         {"best_rank", f.best_rank ? nlohmann::json(*f.best_rank) : nlohmann::json()}});
    }
    return {{"retriever", r.retriever},
            {"n", r.metrics.n},
            {"hit_at_1", r.metrics.hit_at_1},
            {"hit_at_3", r.metrics.hit_at_3},
            {"hit_at_10", r.metrics.hit_at_10},
            {"mrr", r.metrics.mrr},
            {"fixes", fixes}};
}

/// Canonical JSON text used for every result file.
inline std::string canonical(const nlohmann::json& j) {
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

}  // namespace commitdistill::eval
