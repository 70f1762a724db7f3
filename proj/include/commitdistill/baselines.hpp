#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commitdistill/git_ingest.hpp"
#include "commitdistill/text.hpp"
#include "commitdistill/tokenize.hpp"

namespace commitdistill {

struct GrepHit {
    Commit commit;
    std::size_t rank;  // 1-based
};

/// `git log -i --grep` with a fixed-string pattern: case-insensitive literal
/// match against the full message, kept in the input (recency) order.
inline std::vector<GrepHit> grep_search(const std::vector<Commit>& commits, std::string_view query, std::size_t k) {
    std::vector<GrepHit> hits;
    auto needle = text::trim(query);
    if (needle.empty() || k == 0) return hits;
    for (const auto& c : commits) {
        if (hits.size() == k) break;
        if (text::icontains(c.subject, needle) || text::icontains(c.body, needle)) {
            hits.push_back({c, hits.size() + 1});
        }
    }
    return hits;
}

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct Bm25Hit {
    Commit commit;
    double score = 0.0;
};

/// Okapi BM25 over raw commit subject + body.
class Bm25Index {
public:
    Bm25Index() = default;

    explicit Bm25Index(std::vector<Commit> commits, Bm25Params params = {})
        : commits_(std::move(commits)), params_(params) {
        double total = 0.0;
        for (std::size_t d = 0; d < commits_.size(); ++d) {
            auto tokens = tokenize(commits_[d].subject + "\n" + commits_[d].body);
            doc_length_.push_back(tokens.size());
            total += static_cast<double>(tokens.size());
            for (const auto& [term, tf] : term_frequencies(tokens)) postings_[term].push_back({d, tf});
        }
        avgdl_ = commits_.empty() ? 0.0 : total / static_cast<double>(commits_.size());
    }

    std::size_t size() const { return commits_.size(); }
    double avgdl() const { return avgdl_; }
    const Bm25Params& params() const { return params_; }
    const std::vector<Commit>& commits() const { return commits_; }

    double idf(const std::string& term) const {
        auto it = postings_.find(term);
        const double n = static_cast<double>(commits_.size());
        const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
        return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    }

    std::vector<double> score_all(std::string_view query) const {
        std::vector<double> scores(commits_.size(), 0.0);
        if (avgdl_ <= 0.0) return scores;
        for (const auto& [term, qtf] : term_frequencies(tokenize(query))) {
            auto it = postings_.find(term);
            if (it == postings_.end()) continue;
            const double idf_t = idf(term);
            for (const auto& [doc, tf] : it->second) {
                const double f = static_cast<double>(tf);
                const double norm = 1.0 - params_.b + params_.b * static_cast<double>(doc_length_[doc]) / avgdl_;
                scores[doc] += idf_t * f * (params_.k1 + 1.0) / (f + params_.k1 * norm);
            }
        }
        return scores;
    }

private:
    struct Posting {
        std::size_t doc;
        std::size_t tf;
    };
    std::vector<Commit> commits_;
    Bm25Params params_;
    std::vector<std::size_t> doc_length_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    double avgdl_ = 0.0;
};

inline Bm25Index build_bm25(std::vector<Commit> commits, Bm25Params params = {}) {
    return Bm25Index(std::move(commits), params);
}

/// Top-k by descending score, ties by ascending sha; no abstention.
inline std::vector<Bm25Hit> bm25_query(const Bm25Index& index, std::string_view query, std::size_t k) {
    auto scores = index.score_all(query);
    std::vector<std::size_t> order;
    for (std::size_t d = 0; d < scores.size(); ++d)
        if (scores[d] > 0.0) order.push_back(d);
    const auto& commits = index.commits();
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return commits[a].sha < commits[b].sha;
    };
    std::sort(order.begin(), order.end(), better);
    if (order.size() > k) order.resize(k);
    std::vector<Bm25Hit> hits;
    for (auto d : order) hits.push_back({commits[d], scores[d]});
    return hits;
}

}  // namespace commitdistill

namespace commitdistill {

/// Cross-check path: the real `git log -i -F --grep`, returning shas newest-first.
inline std::vector<std::string> grep_search_git(const std::filesystem::path& repo, std::string_view query,
                                                std::size_t k) {
    git::require_repo(repo);
    if (!git::has_head(repo) || k == 0) return {};
    auto out = git::run_checked(repo, {"log", "-i", "-F", "--grep=" + std::string(query), "-n" + std::to_string(k),
                                       "--format=%H"});
    std::vector<std::string> shas;
    std::size_t p = 0;
    while (p < out.size()) {
        auto nl = out.find('\n', p);
        auto line = text::trim(std::string_view(out).substr(p, nl == std::string::npos ? std::string::npos : nl - p));
        if (!line.empty()) shas.push_back(line);
        if (nl == std::string::npos) break;
        p = nl + 1;
    }
    return shas;
}

}  // namespace commitdistill
