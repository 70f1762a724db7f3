#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commitdistill/commitdistill.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace commitdistill;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kEnvironment = 2 };

struct UsageError : Error {
    using Error::Error;
};

struct CliConfig {
    std::string repo = ".";
    std::size_t max_commits = 5000;
    std::size_t k = kAgentTopK;
    double theta = kDefaultTheta;
    bool fallback_enabled = fallback_enabled_from_env();
    bool no_fallback = false;
    bool strip_attribution = false;
    std::string format = "human";
    std::uint64_t seed = 42;
    std::string out_dir = "evaluation";

    void validate() const {
        if (theta < 0) throw UsageError("--theta must be >= 0");
        if (max_commits < 1) throw UsageError("--max-commits must be >= 1");
        if (k < 1) throw UsageError("-k must be >= 1");
    }
    bool fallback() const { return fallback_enabled && !no_fallback; }
};

std::string fixed(double v, int prec = 3) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(prec) << v;
    return ss.str();
}

void write_result(const fs::path& dir, const std::string& name, const json& j) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << eval::canonical(j);
    if (!out) throw IoError("write failed for " + path.string());
    std::cout << "wrote " << path.string() << "\n";
}

// ---------------------------------------------------------------------------
// extract / query / store

int cmd_extract(const CliConfig& cfg) {
    auto commits = list_commits(cfg.repo, cfg.max_commits);
    auto units = extract_commits(commits, default_rules(), cfg.fallback());

    KnowledgeStore existing;
    if (fs::exists(store_path(cfg.repo))) existing = load(cfg.repo);
    const auto before = existing.size();
    auto merged = merge(existing, units);
    const auto added = merged.size() - before;
    if (cfg.strip_attribution) merged = strip_attribution(std::move(merged));
    save(merged, cfg.repo);

    std::map<std::string, std::size_t> by_type = {{"fact", 0}, {"skill", 0}, {"pattern", 0}};
    for (const auto& u : units) ++by_type[std::string(to_string(u.type))];
    const double per_k = commits.empty() ? 0.0 : 1000.0 * static_cast<double>(units.size()) / static_cast<double>(commits.size());

    if (cfg.format == "json") {
        json j{{"commits", commits.size()},
               {"extracted", units.size()},
               {"by_type", by_type},
               {"new_units", added},
               {"store_units", merged.size()},
               {"units_per_1000_commits", per_k},
               {"fallback", cfg.fallback()},
               {"store", store_path(cfg.repo).string()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "commits scanned:        " << commits.size() << "\n"
                  << "units extracted:        " << units.size() << " (fact " << by_type["fact"] << ", skill "
                  << by_type["skill"] << ", pattern " << by_type["pattern"] << ")\n"
                  << "units per 1000 commits: " << fixed(per_k, 1) << "\n"
                  << "new units:              " << added << "\n"
                  << "store:                  " << store_path(cfg.repo).string() << " (" << merged.size()
                  << " units)\n";
    }
    return kOk;
}

KnowledgeStore load_store_or_hint(const std::string& repo) {
    if (!fs::exists(store_path(repo))) {
        throw IoError("no knowledge store at " + store_path(repo).string() + "; run `commitdistill extract --repo " +
                      repo + "` first");
    }
    return load(repo);
}

std::string commit_body(const std::string& repo, const std::string& short_sha) {
    auto r = git::run(repo, {"show", "-s", "--format=%b", short_sha});
    return r.exit_code == 0 ? r.out : std::string{};
}

int cmd_query(const CliConfig& cfg, const std::string& text, bool hybrid) {
    auto store = load_store_or_hint(cfg.repo);
    auto index = build_index(store.units());
    auto hits = query(index, text, cfg.k, cfg.theta);
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& h : hits) {
            json item{{"score", h.score}, {"unit", to_json(h.unit)}};
            if (hybrid) item["rendered"] = render_hybrid(h, commit_body(cfg.repo, h.unit.meta.commit));
            arr.push_back(std::move(item));
        }
        std::cout << arr.dump(2) << "\n";
        return kOk;
    }
    for (const auto& h : hits) {
        if (hybrid) {
            std::cout << fixed(h.score) << "\t" << h.unit.meta.commit << "\n"
                      << render_hybrid(h, commit_body(cfg.repo, h.unit.meta.commit)) << "\n";
        } else {
            std::cout << fixed(h.score) << "\t" << to_string(h.unit.type) << "\t" << h.unit.content << "\t"
                      << h.unit.meta.commit << "\n";
        }
    }
    return kOk;
}

int cmd_strip(const CliConfig& cfg) {
    auto store = strip_attribution(load_store_or_hint(cfg.repo));
    save(store, cfg.repo);
    std::cout << "redacted authors on " << store.size() << " units in " << store_path(cfg.repo).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// evaluation corpora

struct Corpus {
    std::string name;
    std::string path;
    std::vector<Commit> commits;
    std::vector<KnowledgeUnit> units;
    RetrievalIndex index;
    Bm25Index bm25;
};

std::unique_ptr<Corpus> make_corpus(std::string name, std::string path, std::size_t max_commits, bool fallback) {
    auto c = std::make_unique<Corpus>();
    c->name = std::move(name);
    c->path = std::move(path);
    c->commits = list_commits(c->path, max_commits);
    c->units = extract_commits(c->commits, default_rules(), fallback);
    c->index = build_index(c->units);
    c->bm25 = build_bm25(c->commits);
    return c;
}

/// Repos keyed by subject_repo name. A manifest pins each repo to a HEAD sha.
class Corpora {
public:
    Corpora(const CliConfig& cfg, const std::string& manifest, bool allow_drift, bool fallback)
        : cfg_(cfg), fallback_(fallback) {
        if (manifest.empty()) {
            default_ = {"", cfg.repo};
            return;
        }
        json doc;
        try {
            doc = json::parse(eval::read_file(manifest));
            for (const auto& r : doc.at("repos")) {
                auto name = r.at("name").get<std::string>();
                auto path = r.at("path").get<std::string>();
                if (fs::path(path).is_relative()) path = (fs::path(manifest).parent_path() / path).string();
                auto pinned = r.value("sha", std::string{});
                if (!pinned.empty()) {
                    auto head = git::head_sha(path);
                    if (head != pinned) {
                        std::string msg = "repo '" + name + "' HEAD " + head + " does not match pinned " + pinned;
                        if (!allow_drift) throw GitError(msg, 0);
                        std::cerr << "warning: " << msg << "\n";
                    }
                }
                paths_[name] = path;
                if (default_.second.empty()) default_ = {name, path};
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed manifest: ") + e.what());
        }
    }

    Corpus& for_query(const eval::BenchQuery& q) {
        std::string name = default_.first, path = default_.second;
        if (!paths_.empty() && !q.subject_repo.empty()) {
            auto it = paths_.find(q.subject_repo);
            if (it == paths_.end()) throw UsageError("query repo '" + q.subject_repo + "' is not in the manifest");
            name = it->first;
            path = it->second;
        }
        auto& slot = loaded_[name];
        if (!slot) slot = make_corpus(name, path, cfg_.max_commits, fallback_);
        return *slot;
    }

private:
    const CliConfig& cfg_;
    bool fallback_;
    std::pair<std::string, std::string> default_;
    std::map<std::string, std::string> paths_;
    std::map<std::string, std::unique_ptr<Corpus>> loaded_;
};

std::vector<eval::TextRanker> standard_rankers(Corpora& corpora, double theta) {
    return {
        {"commitdistill",
         [&corpora, theta](const eval::BenchQuery& q) {
             std::vector<std::string> out;
             for (const auto& h : query(corpora.for_query(q).index, q.query, kEvalTopK, theta)) out.push_back(h.unit.content);
             return out;
         }},
        {"grep",
         [&corpora](const eval::BenchQuery& q) {
             std::vector<std::string> out;
             for (const auto& h : grep_search(corpora.for_query(q).commits, q.query, kEvalTopK))
                 out.push_back(h.commit.message());
             return out;
         }},
        {"bm25",
         [&corpora](const eval::BenchQuery& q) {
             std::vector<std::string> out;
             for (const auto& h : bm25_query(corpora.for_query(q).bm25, q.query, kEvalTopK))
                 out.push_back(h.commit.message());
             return out;
         }},
    };
}

std::vector<eval::BenchQuery> require_queries(const std::string& path) {
    if (path.empty()) throw UsageError("missing input: --queries <file.json>");
    return eval::load_queries(path);
}

// ---------------------------------------------------------------------------
// eval subcommands

struct EvalOptions {
    std::string queries;
    std::string labels;
    std::string manifest;
    bool allow_drift = false;
    std::size_t derive = 30;
    std::vector<std::size_t> budgets = eval::default_budgets();
    std::vector<double> thetas = eval::default_theta_grid();
    std::size_t n_fixes = 20;
    std::size_t window = eval::kDefaultWindow;
    std::vector<std::string> retrievers = {"grep", "bm25", "cd-v1", "cd-v2"};
    std::size_t resamples = 10000;
    std::size_t history = 1000000;
};

int eval_baseline(const CliConfig& cfg, const EvalOptions& opt) {
    Corpora corpora(cfg, opt.manifest, opt.allow_drift, cfg.fallback());
    std::vector<eval::BenchQuery> queries;
    if (!opt.queries.empty()) {
        queries = eval::load_queries(opt.queries);
    } else {
        auto commits = list_commits(cfg.repo, cfg.max_commits);
        for (auto& q : eval::derive_queries(commits, opt.derive)) {
            queries.push_back({std::move(q), "", eval::QueryClass::ood, ""});
        }
    }
    auto rankers = standard_rankers(corpora, cfg.theta);
    json per_query = json::array();
    std::map<std::string, std::vector<double>> top1_len;
    std::map<std::string, std::size_t> returned, span_hits;
    std::size_t with_span = 0;
    for (const auto& q : queries) {
        json row = eval::to_json(q);
        if (!q.answer_span.empty()) ++with_span;
        for (const auto& r : rankers) {
            auto ranked = r.rank(q);
            json cell{{"returned", !ranked.empty()}};
            if (!ranked.empty()) {
                ++returned[r.name];
                cell["top1"] = ranked.front();
                cell["top1_length"] = ranked.front().size();
                top1_len[r.name].push_back(static_cast<double>(ranked.front().size()));
            }
            if (!q.answer_span.empty()) {
                bool hit = !ranked.empty() && eval::budget_hit(ranked, q.answer_span);
                cell["span_hit_at_10"] = hit;
                if (hit) ++span_hits[r.name];
            }
            row[r.name] = std::move(cell);
        }
        per_query.push_back(std::move(row));
    }
    json summary = json::object();
    std::cout << std::left << std::setw(15) << "retriever" << std::setw(12) << "returned" << std::setw(14)
              << "span@10" << "median top-1 len\n";
    for (const auto& r : rankers) {
        summary[r.name] = {{"returned", returned[r.name]},
                           {"returned_rate", queries.empty() ? 0.0 : double(returned[r.name]) / double(queries.size())},
                           {"span_hits_at_10", span_hits[r.name]},
                           {"median_top1_length", eval::median(top1_len[r.name])}};
        std::cout << std::setw(15) << r.name << std::setw(12)
                  << (std::to_string(returned[r.name]) + "/" + std::to_string(queries.size())) << std::setw(14)
                  << (std::to_string(span_hits[r.name]) + "/" + std::to_string(with_span))
                  << fixed(eval::median(top1_len[r.name]), 1) << "\n";
    }
    write_result(cfg.out_dir, "baseline_results.json",
                 {{"theta", cfg.theta}, {"fallback", cfg.fallback()}, {"queries", per_query}, {"summary", summary}});
    return kOk;
}

int eval_budget(const CliConfig& cfg, const EvalOptions& opt) {
    Corpora corpora(cfg, opt.manifest, opt.allow_drift, cfg.fallback());
    std::vector<eval::BenchQuery> queries;
    for (auto& q : require_queries(opt.queries))
        if (q.query_class == eval::QueryClass::fact_style) queries.push_back(std::move(q));
    if (queries.empty()) throw UsageError("no FACT_STYLE queries in " + opt.queries);
    auto table = eval::budget_sweep(queries, standard_rankers(corpora, cfg.theta), opt.budgets);

    std::cout << std::left << std::setw(16) << "budget";
    for (const auto& r : table.rows) std::cout << std::setw(15) << r.retriever;
    std::cout << "\n";
    for (auto b : table.budgets) {
        std::cout << std::setw(16) << b;
        for (const auto& r : table.rows) std::cout << std::setw(15) << fixed(r.hit_rate.at(b));
        std::cout << "\n";
    }
    std::cout << std::setw(16) << "jackknife@256";
    for (const auto& r : table.rows) std::cout << std::setw(15) << (r.jackknife_min_256 ? fixed(*r.jackknife_min_256) : "-");
    std::cout << "\n" << std::setw(16) << "Hit@10";
    for (const auto& r : table.rows) std::cout << std::setw(15) << fixed(r.unconstrained_hit_at_10);
    std::cout << "\n" << std::setw(16) << "median top-1";
    for (const auto& r : table.rows) std::cout << std::setw(15) << fixed(r.median_top1_length, 1);
    std::cout << "\n";
    auto j = eval::to_json(table);
    j["theta"] = cfg.theta;
    j["fallback"] = cfg.fallback();
    write_result(cfg.out_dir, "budget_results.json", j);
    return kOk;
}

int eval_sweep(const CliConfig& cfg, const EvalOptions& opt) {
    auto queries = require_queries(opt.queries);
    json out = json::object();
    for (bool fallback : {false, true}) {
        Corpora corpora(cfg, opt.manifest, opt.allow_drift, fallback);
        // Sweep per repo so each query runs against its own corpus.
        std::map<std::string, std::vector<eval::BenchQuery>> grouped;
        for (const auto& q : queries) grouped[q.subject_repo].push_back(q);
        std::map<eval::QueryClass, std::vector<double>> hits;
        std::map<eval::QueryClass, std::size_t> counts;
        for (const auto& [repo, qs] : grouped) {
            auto t = eval::threshold_sweep(qs, corpora.for_query(qs.front()).index, opt.thetas);
            for (const auto& [cls, rates] : t.rates) {
                auto& h = hits[cls];
                h.resize(rates.size(), 0.0);
                for (std::size_t i = 0; i < rates.size(); ++i) h[i] += rates[i] * double(t.counts[cls]);
                counts[cls] += t.counts[cls];
            }
        }
        eval::SweepTable merged;
        merged.thetas = opt.thetas;
        merged.counts = counts;
        for (auto& [cls, h] : hits) {
            for (auto& v : h) v /= double(counts[cls]);
            merged.rates[cls] = h;
        }
        const std::string label = fallback ? "cd-v2" : "cd-v1";
        out[label] = eval::to_json(merged);

        std::cout << label << (fallback ? " (regex + subject fallback)\n" : " (regex only)\n");
        std::cout << std::left << std::setw(8) << "theta";
        for (const auto& [cls, r] : merged.rates) std::cout << std::setw(16) << eval::to_string(cls);
        std::cout << "\n";
        for (std::size_t i = 0; i < merged.thetas.size(); ++i) {
            std::cout << std::setw(8) << fixed(merged.thetas[i], 2);
            for (const auto& [cls, r] : merged.rates) std::cout << std::setw(16) << fixed(r[i]);
            std::cout << "\n";
        }
    }
    write_result(cfg.out_dir, "threshold_sweep.json", out);
    return kOk;
}

int eval_timetravel(const CliConfig& cfg, const EvalOptions& opt) {
    std::vector<eval::TimeTravelRetriever> kinds;
    for (const auto& r : opt.retrievers) kinds.push_back(eval::time_travel_retriever_from_string(r));
    auto results = eval::time_travel_eval(cfg.repo, opt.n_fixes, opt.window, kinds, cfg.theta, opt.history);
    json arr = json::array();
    std::cout << std::left << std::setw(10) << "method" << std::setw(9) << "Hit@1" << std::setw(9) << "Hit@3"
              << std::setw(9) << "Hit@10" << "MRR\n";
    for (const auto& r : results) {
        std::cout << std::setw(10) << r.retriever << std::setw(9) << fixed(r.metrics.hit_at_1) << std::setw(9)
                  << fixed(r.metrics.hit_at_3) << std::setw(9) << fixed(r.metrics.hit_at_10) << fixed(r.metrics.mrr)
                  << "\n";
        arr.push_back(eval::to_json(r));
    }
    write_result(cfg.out_dir, "time_travel_results.json",
                 {{"n_fixes", opt.n_fixes}, {"window", opt.window}, {"theta", cfg.theta}, {"results", arr}});
    return kOk;
}

int eval_kappa(const CliConfig& cfg, const EvalOptions& opt) {
    if (opt.labels.empty()) throw UsageError("missing input: --labels <labels.csv>");
    auto labels = eval::load_labels(opt.labels);
    if (labels.empty()) throw UsageError("labels file has no rows");
    std::vector<std::string> a, b;
    std::vector<double> useful;
    std::size_t agree = 0;
    std::map<std::string, std::size_t> adjudicated;
    for (const auto& l : labels) {
        a.push_back(l.annotator_a);
        b.push_back(l.annotator_b);
        if (l.annotator_a == l.annotator_b) ++agree;
        ++adjudicated[l.adjudicated];
        useful.push_back(l.adjudicated == "useful" ? 1.0 : 0.0);
    }
    const double kappa = eval::cohen_kappa(a, b);
    const double precision = eval::mean(useful);
    auto ci = eval::bootstrap_ci(useful, eval::mean, opt.resamples, 0.95, cfg.seed);
    std::cout << "units:            " << labels.size() << "\n"
              << "raw agreement:    " << agree << "/" << labels.size() << "\n"
              << "cohen kappa:      " << fixed(kappa) << "\n"
              << "useful precision: " << fixed(precision) << "  95% CI [" << fixed(ci.lo) << ", " << fixed(ci.hi)
              << "]\n";
    write_result(cfg.out_dir, "kappa_results.json",
                 {{"n", labels.size()},
                  {"agreements", agree},
                  {"kappa", kappa},
                  {"adjudicated", adjudicated},
                  {"useful_precision", precision},
                  {"ci95", {ci.lo, ci.hi}},
                  {"resamples", opt.resamples},
                  {"seed", cfg.seed}});
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mine git history into typed knowledge units and retrieve them."};
    app.require_subcommand(1);
    CliConfig cfg;

    auto add_repo = [&](CLI::App* sub) {
        sub->add_option("--repo", cfg.repo, "Repository root")->capture_default_str();
    };
    auto add_extraction = [&](CLI::App* sub) {
        sub->add_option("--max-commits", cfg.max_commits, "Most recent commits to mine")->capture_default_str();
        sub->add_flag("--no-fallback", cfg.no_fallback,
                      "Disable the subject-fallback unit (same as COMMITDISTILL_SUBJECT_FALLBACK=0)");
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "json"}))->capture_default_str();
    };

    auto* extract = app.add_subcommand("extract", "Mine commits into .knowledge/units.json");
    add_repo(extract);
    add_extraction(extract);
    add_format(extract);
    extract->add_flag("--strip-attribution", cfg.strip_attribution, "Redact author names before saving");

    std::string query_text;
    bool hybrid = false;
    auto* q = app.add_subcommand("query", "Retrieve units for a question (silent below theta)");
    add_repo(q);
    add_format(q);
    q->add_option("-k", cfg.k, "Maximum hits")->capture_default_str();
    q->add_option("--theta", cfg.theta, "Silence threshold")->capture_default_str();
    q->add_flag("--hybrid", hybrid, "Render each hit with a typed header plus a commit-body excerpt");
    q->add_option("text", query_text, "Query text")->required();

    auto* store = app.add_subcommand("store", "Knowledge store maintenance");
    store->require_subcommand(1);
    auto* strip = store->add_subcommand("strip-attribution", "Replace author names with 'redacted'");
    add_repo(strip);

    EvalOptions opt;
    auto* ev = app.add_subcommand("eval", "Evaluation drivers");
    ev->require_subcommand(1);
    auto add_eval_common = [&](CLI::App* sub) {
        add_repo(sub);
        add_extraction(sub);
        sub->add_option("--out", cfg.out_dir, "Result directory")->capture_default_str();
        sub->add_option("--theta", cfg.theta, "Silence threshold")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    };
    auto add_manifest = [&](CLI::App* sub) {
        sub->add_option("--manifest", opt.manifest, "JSON manifest pinning subject repos to HEAD shas");
        sub->add_flag("--allow-drift", opt.allow_drift, "Warn instead of failing when HEAD differs from the pin");
    };
    auto* ev_baseline = ev->add_subcommand("baseline", "Top-1 comparison against grep and BM25");
    add_eval_common(ev_baseline);
    add_manifest(ev_baseline);
    ev_baseline->add_option("--queries", opt.queries, "Benchmark JSON (default: derive from subjects)");
    ev_baseline->add_option("--derive", opt.derive, "Number of subject-derived queries")->capture_default_str();

    auto* ev_budget = ev->add_subcommand("budget", "Budget-constrained hit-rate table");
    add_eval_common(ev_budget);
    add_manifest(ev_budget);
    ev_budget->add_option("--queries", opt.queries, "Benchmark JSON with FACT_STYLE queries");
    ev_budget->add_option("--budgets", opt.budgets, "Character budgets")->capture_default_str();

    auto* ev_sweep = ev->add_subcommand("sweep", "Silence-threshold sweep, regex-only vs with fallback");
    add_eval_common(ev_sweep);
    add_manifest(ev_sweep);
    ev_sweep->add_option("--queries", opt.queries, "Benchmark JSON with classed queries");
    ev_sweep->add_option("--thetas", opt.thetas, "Theta grid")->capture_default_str();

    auto* ev_tt = ev->add_subcommand("timetravel", "Time-travel regression finding");
    add_eval_common(ev_tt);
    ev_tt->add_option("--n-fixes", opt.n_fixes, "Number of bug-fix commits")->capture_default_str();
    ev_tt->add_option("--window", opt.window, "Pre-fix window size")->capture_default_str();
    ev_tt->add_option("--history", opt.history, "Commits of history to scan")->capture_default_str();
    ev_tt->add_option("--retrievers", opt.retrievers, "grep, bm25, cd-v1, cd-v2")->capture_default_str();

    auto* ev_kappa = ev->add_subcommand("kappa", "Agreement and useful-precision CI from a labels CSV");
    add_eval_common(ev_kappa);
    ev_kappa->add_option("--labels", opt.labels, "labels CSV");
    ev_kappa->add_option("--resamples", opt.resamples, "Bootstrap resamples")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        cfg.validate();
        if (extract->parsed()) return cmd_extract(cfg);
        if (q->parsed()) return cmd_query(cfg, query_text, hybrid);
        if (strip->parsed()) return cmd_strip(cfg);
        if (ev_baseline->parsed()) return eval_baseline(cfg, opt);
        if (ev_budget->parsed()) return eval_budget(cfg, opt);
        if (ev_sweep->parsed()) return eval_sweep(cfg, opt);
        if (ev_tt->parsed()) return eval_timetravel(cfg, opt);
        if (ev_kappa->parsed()) return eval_kappa(cfg, opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEnvironment;
    }
    return kUsage;
}
