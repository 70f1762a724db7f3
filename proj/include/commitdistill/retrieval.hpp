#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commitdistill/extraction.hpp"
#include "commitdistill/tokenize.hpp"

namespace commitdistill {

inline constexpr double kDefaultTheta = 2.5;
inline constexpr std::size_t kAgentTopK = 3;
inline constexpr std::size_t kEvalTopK = 10;

struct BoostTable {
    double fact = 1.0;
    double skill = 1.1;
    double pattern = 1.2;

    double operator[](UnitType t) const {
        switch (t) {
            case UnitType::fact: return fact;
            case UnitType::skill: return skill;
            case UnitType::pattern: return pattern;
        }
        return 1.0;
    }
    bool valid() const { return fact > 0 && skill > 0 && pattern > 0; }
};

struct RankedHit {
    KnowledgeUnit unit;
    double score = 0.0;
};

/// Immutable TF-IDF index over unit contents.
class RetrievalIndex {
public:
    struct Posting {
        std::size_t doc;
        std::size_t tf;
    };

    RetrievalIndex() = default;

    explicit RetrievalIndex(std::vector<KnowledgeUnit> units) : units_(std::move(units)) {
        doc_length_.reserve(units_.size());
        for (std::size_t d = 0; d < units_.size(); ++d) {
            auto tokens = tokenize(units_[d].content);
            doc_length_.push_back(tokens.size());
            for (const auto& [term, tf] : term_frequencies(tokens)) postings_[term].push_back({d, tf});
        }
        // Terms present in every document carry no signal (log 1 = 0). A lone
        // document would then be unreachable, so N = 1 is add-one smoothed.
        const double n = static_cast<double>(units_.size());
        for (const auto& [term, plist] : postings_) {
            const double df = static_cast<double>(plist.size());
            idf_[term] = units_.size() == 1 ? std::log((n + 1.0) / df) : std::log(n / df);
        }
    }

    std::size_t size() const { return units_.size(); }
    const std::vector<KnowledgeUnit>& units() const { return units_; }
    std::size_t doc_length(std::size_t d) const { return doc_length_.at(d); }

    double idf(const std::string& term) const {
        auto it = idf_.find(term);
        return it == idf_.end() ? 0.0 : it->second;
    }
    std::size_t df(const std::string& term) const {
        auto it = postings_.find(term);
        return it == postings_.end() ? 0 : it->second.size();
    }
    std::size_t tf(std::size_t doc, const std::string& term) const {
        auto it = postings_.find(term);
        if (it == postings_.end()) return 0;
        for (const auto& p : it->second)
            if (p.doc == doc) return p.tf;
        return 0;
    }
    const std::vector<Posting>* postings(const std::string& term) const {
        auto it = postings_.find(term);
        return it == postings_.end() ? nullptr : &it->second;
    }

private:
    std::vector<KnowledgeUnit> units_;
    std::vector<std::size_t> doc_length_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, double> idf_;
};

inline RetrievalIndex build_index(std::vector<KnowledgeUnit> units) { return RetrievalIndex(std::move(units)); }

/// Every unit's boosted, prior-weighted, length-normalised score (0 for no overlap).
inline std::vector<double> score_all(const RetrievalIndex& index, std::string_view q, const BoostTable& boosts) {
    std::vector<double> scores(index.size(), 0.0);
    auto query_tf = term_frequencies(tokenize(q));
    for (const auto& [term, qtf] : query_tf) {
        const auto* plist = index.postings(term);
        if (!plist) continue;
        const double q_weight = 1.0 + std::log(static_cast<double>(qtf));
        const double idf = index.idf(term);
        for (const auto& p : *plist) {
            scores[p.doc] += (1.0 + std::log(static_cast<double>(p.tf))) * q_weight * idf;
        }
    }
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (scores[d] == 0.0) continue;
        const auto& u = index.units()[d];
        scores[d] /= std::sqrt(std::max<double>(1.0, static_cast<double>(index.doc_length(d))));
        scores[d] *= boosts[u.type] * (0.5 + 0.5 * u.weight);
    }
    return scores;
}

/// Top-k units scoring at least theta; an empty list means abstention.
/// Units with no scoring overlap are never returned, even at theta = 0.
inline std::vector<RankedHit> query(const RetrievalIndex& index, std::string_view q, std::size_t k,
                                    double theta = kDefaultTheta, const BoostTable& boosts = {}) {
    std::vector<RankedHit> hits;
    if (k == 0 || index.size() == 0) return hits;
    auto scores = score_all(index, q, boosts);
    std::vector<std::size_t> order;
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (scores[d] > 0.0 && scores[d] >= theta) order.push_back(d);
    }
    const auto& units = index.units();
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return units[a].id < units[b].id;
    };
    if (order.size() > k) {
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
        order.resize(k);
    } else {
        std::sort(order.begin(), order.end(), better);
    }
    hits.reserve(order.size());
    for (auto d : order) hits.push_back({units[d], scores[d]});
    return hits;
}

inline constexpr std::size_t kBodyExcerptChars = 140;
inline constexpr std::size_t kBodyExcerptLines = 3;

/// Up to 140 chars drawn from the first three non-empty body lines.
inline std::string body_excerpt(std::string_view body) {
    std::string out;
    std::size_t lines = 0, pos = 0;
    while (pos <= body.size() && lines < kBodyExcerptLines) {
        auto nl = body.find('\n', pos);
        auto line = text::trim(body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        if (!line.empty()) {
            if (!out.empty()) out.push_back('\n');
            out += line;
            ++lines;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (out.size() > kBodyExcerptChars) out.resize(text::utf8_floor(out, kBodyExcerptChars));
    return out;
}

inline std::string hybrid_header(const KnowledgeUnit& u) { return std::string(to_string(u.type)) + ":" + u.title; }

/// Typed-claim header line plus the same body excerpt a raw-commit retriever gets.
inline std::string render_hybrid(const RankedHit& hit, std::string_view commit_body) {
    std::string out = hybrid_header(hit.unit);
    auto excerpt = body_excerpt(commit_body);
    if (!excerpt.empty()) out += "\n" + excerpt;
    return out;
}

}  // namespace commitdistill
