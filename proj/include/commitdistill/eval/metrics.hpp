#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "commitdistill/error.hpp"
#include "commitdistill/text.hpp"

namespace commitdistill::eval {

inline constexpr std::size_t kUnlimitedBudget = std::numeric_limits<std::size_t>::max();

/// Greedy skip-and-continue packing: walk in rank order and take every
/// candidate that still fits. Returns the packed indices.
inline std::vector<std::size_t> budget_pack(const std::vector<std::string>& ranked_texts, std::size_t budget) {
    if (budget == 0) throw InvalidInput("budget_pack: budget must be positive");
    std::vector<std::size_t> packed;
    std::size_t remaining = budget;
    for (std::size_t i = 0; i < ranked_texts.size(); ++i) {
        if (ranked_texts[i].size() <= remaining) {
            packed.push_back(i);
            remaining -= ranked_texts[i].size();
        }
    }
    return packed;
}

inline bool budget_hit(const std::vector<std::string>& packed_texts, std::string_view answer_span) {
    if (answer_span.empty()) throw InvalidInput("budget_hit: empty answer span");
    return std::any_of(packed_texts.begin(), packed_texts.end(),
                       [&](const std::string& t) { return text::icontains(t, answer_span); });
}

inline double hit_rate(const std::vector<bool>& hits) {
    if (hits.empty()) return 0.0;
    return static_cast<double>(std::count(hits.begin(), hits.end(), true)) / static_cast<double>(hits.size());
}

/// Smallest leave-one-out hit-rate.
inline double jackknife_min(const std::vector<bool>& hits) {
    if (hits.size() < 2) throw InvalidInput("jackknife_min: need at least two queries");
    const auto total = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), true));
    const double n1 = static_cast<double>(hits.size() - 1);
    double best = std::numeric_limits<double>::infinity();
    for (bool h : hits) best = std::min(best, static_cast<double>(total - (h ? 1 : 0)) / n1);
    return best;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Ranked-retrieval metrics

struct RankingMetrics {
    double hit_at_1 = 0.0;
    double hit_at_3 = 0.0;
    double hit_at_10 = 0.0;
    double mrr = 0.0;
    std::size_t n = 0;
};

/// best_ranks holds each query's best 1-based relevant rank (nullopt = none).
/// Reciprocal rank counts only within the top 10.
inline RankingMetrics ranking_metrics(const std::vector<std::optional<std::size_t>>& best_ranks) {
    RankingMetrics m;
    m.n = best_ranks.size();
    if (m.n == 0) return m;
    for (const auto& r : best_ranks) {
        if (!r) continue;
        if (*r <= 1) m.hit_at_1 += 1;
        if (*r <= 3) m.hit_at_3 += 1;
        if (*r <= 10) {
            m.hit_at_10 += 1;
            m.mrr += 1.0 / static_cast<double>(*r);
        }
    }
    const double n = static_cast<double>(m.n);
    m.hit_at_1 /= n;
    m.hit_at_3 /= n;
    m.hit_at_10 /= n;
    m.mrr /= n;
    return m;
}

// ---------------------------------------------------------------------------
// Agreement and uncertainty

inline double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size()) throw InvalidInput("cohen_kappa: label sequences differ in length");
    if (a.empty()) throw InvalidInput("cohen_kappa: empty label sequences");
    const double n = static_cast<double>(a.size());
    std::map<std::string, double> ma, mb;
    double agree = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma[a[i]] += 1.0;
        mb[b[i]] += 1.0;
        if (a[i] == b[i]) agree += 1.0;
    }
    const double p_o = agree / n;
    double p_e = 0.0;
    for (const auto& [label, count] : ma) {
        auto it = mb.find(label);
        if (it != mb.end()) p_e += (count / n) * (it->second / n);
    }
    if (p_e >= 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

using Statistic = std::function<double(std::span<const double>)>;

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Linear-interpolated quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InvalidInput("quantile of empty data");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap interval with a seeded mt19937_64.
inline Interval bootstrap_ci(const std::vector<double>& samples, const Statistic& statistic,
                             std::size_t resamples = 10000, double level = 0.95, std::uint64_t seed = 42) {
    if (samples.empty()) throw InvalidInput("bootstrap_ci: empty samples");
    if (resamples == 0 || level <= 0.0 || level >= 1.0) throw InvalidInput("bootstrap_ci: bad resamples/level");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::vector<double> draw(samples.size());
    std::vector<double> stats;
    stats.reserve(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        for (auto& x : draw) x = samples[pick(rng)];
        stats.push_back(statistic(draw));
    }
    std::sort(stats.begin(), stats.end());
    const double alpha = (1.0 - level) / 2.0;
    return {quantile_sorted(stats, alpha), quantile_sorted(stats, 1.0 - alpha)};
}

/// Paired variant: resamples index pairs and reports the CI of mean(a - b).
inline Interval bootstrap_paired_ci(const std::vector<double>& a, const std::vector<double>& b,
                                    std::size_t resamples = 10000, double level = 0.95, std::uint64_t seed = 42) {
    if (a.size() != b.size()) throw InvalidInput("bootstrap_paired_ci: arms differ in length");
    std::vector<double> delta(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) delta[i] = a[i] - b[i];
    return bootstrap_ci(delta, mean, resamples, level, seed);
}

}  // namespace commitdistill::eval
