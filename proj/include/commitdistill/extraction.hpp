#pragma once

#include <openssl/evp.h>

#include <boost/regex.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "commitdistill/error.hpp"
#include "commitdistill/git_ingest.hpp"
#include "commitdistill/text.hpp"

namespace commitdistill {

enum class UnitType { fact, skill, pattern };

inline std::string_view to_string(UnitType t) {
    switch (t) {
        case UnitType::fact: return "fact";
        case UnitType::skill: return "skill";
        case UnitType::pattern: return "pattern";
    }
    return "fact";
}

inline UnitType unit_type_from_string(std::string_view s) {
    if (s == "fact") return UnitType::fact;
    if (s == "skill") return UnitType::skill;
    if (s == "pattern") return UnitType::pattern;
    throw ParseError("unknown unit type '" + std::string(s) + "'");
}

struct UnitMeta {
    std::string commit;  // short sha
    std::string author;
    std::string date;
    std::string source;

    bool operator==(const UnitMeta&) const = default;
};

struct KnowledgeUnit {
    std::string id;
    UnitType type = UnitType::fact;
    std::string title;
    std::string content;
    double weight = 0.0;
    std::string context;
    UnitMeta meta;

    bool operator==(const KnowledgeUnit&) const = default;
};

inline constexpr std::size_t kMinContentLength = 12;
inline constexpr std::size_t kMaxContentLength = 300;
inline constexpr std::size_t kTitleLength = 60;
inline constexpr std::size_t kResolutionTailCap = 140;
inline constexpr std::size_t kFallbackCap = 280;
inline constexpr double kFallbackPrior = 0.40;

inline constexpr std::string_view kSourceCommitMessage = "commit-message";
inline constexpr std::string_view kSourceSubjectFallback = "subject-fallback";

struct HeuristicRule {
    std::string name;
    UnitType type;
    boost::regex pattern;
    double prior;

    HeuristicRule(std::string rule_name, UnitType unit_type, const std::string& expr, double prior_weight)
        : name(std::move(rule_name)),
          type(unit_type),
          pattern(expr, boost::regex::perl | boost::regex::icase),
          prior(prior_weight) {
        if (pattern.mark_count() != 1) {
            throw InvalidInput("rule " + name + " must have exactly one capture group");
        }
    }
};

/// The nine extraction heuristics in their fixed evaluation order. Each is
/// applied to one sentence at a time; group 1 is the unit content.
inline const std::vector<HeuristicRule>& default_rules() {
    static const std::vector<HeuristicRule> rules = {
        {"fact-constraint", UnitType::fact, R"(^(.*\b(?:must|requires?|should|cannot|always|never)\b.*)$)", 0.75},
        {"fact-annotation", UnitType::fact, R"(\b(?:note|important|warning):\s+(.+)$)", 0.85},
        {"fact-equivalence", UnitType::fact,
         R"(^(.*\b(?:is|are) (?:equivalent to|the same as|an alias for)\s+.+)$)", 0.65},
        {"skill-resolution", UnitType::skill, R"(\b(?:fix(?:ed)? by|solution|workaround):\s+(.+)$)", 0.95},
        {"skill-recommendation", UnitType::skill, R"(\b(?:recommend(?:ed)?|best practice):\s+(.+)$)", 0.85},
        {"skill-instructional", UnitType::skill, R"(\b(to (?:avoid|prevent|enable|disable)\b.+)$)", 0.70},
        {"pattern-causal", UnitType::pattern, R"(^(.*\b(?:occurs|happens) when\s+.+)$)", 0.80},
        {"pattern-exception", UnitType::pattern, R"(^(.*\b[A-Z]\w+(?:Error|Exception|Failure)\b.*)$)", 0.90},
        {"pattern-regression", UnitType::pattern,
         R"(^(.*\b(?:regression|broke|breaks|broken) (?:in|since|after|when)\s+.+)$)", 0.75},
    };
    return rules;
}

// ---------------------------------------------------------------------------
// Identity

inline std::string sha1_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha1(), nullptr) != 1) {
        throw Error("SHA-1 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

/// First 12 hex chars of SHA-1("type::content"), content lower-cased and
/// whitespace-collapsed first.
inline std::string unit_id(UnitType type, std::string_view content) {
    std::string key(to_string(type));
    key += "::";
    key += text::to_lower(text::collapse_whitespace(content));
    return sha1_hex(key).substr(0, 12);
}

// ---------------------------------------------------------------------------
// Filters

inline const std::unordered_set<std::string>& english_stop_words() {
    static const std::unordered_set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are",
        "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but", "by",
        "can", "could", "did", "do", "does", "doing", "done", "down", "during", "each", "etc", "few", "for",
        "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself", "him",
        "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "let", "me",
        "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
        "other", "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so", "some",
        "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these",
        "they", "this", "those", "through", "to", "too", "under", "until", "up", "us", "very", "was", "we",
        "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would",
        "you", "your", "yours", "yourself", "yourselves", "s", "t", "re", "ve", "ll", "d", "m"};
    return words;
}

namespace detail {

/// Lower-cased alphanumeric words (apostrophes and other punctuation split words).
inline std::vector<std::string> plain_words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace detail

/// True when the candidate carries no content: a known boilerplate phrase or
/// nothing but English stop words.
inline bool is_stop(std::string_view content) {
    static const std::set<std::string> boilerplate = {"see above", "see below",  "as described", "this should be it",
                                                      "more info", "todo", "tbd", "wip"};
    auto words = detail::plain_words(content);
    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined.push_back(' ');
        joined += w;
    }
    if (boilerplate.count(joined)) return true;
    const auto& stop = english_stop_words();
    return std::all_of(words.begin(), words.end(), [&](const std::string& w) { return stop.count(w) > 0; });
}

/// Pattern candidates must name a failure or carry at least three content
/// words without being mostly issue/PR references.
inline bool is_substantive_pattern(std::string_view content) {
    static const boost::regex named_failure(R"(\b[A-Z]\w+(?:Error|Exception|Failure)\b)");
    static const boost::regex whitelist(
        R"(\b(deadlock|race condition|infinite loop|NullPointerException|TimeoutError)\b)", boost::regex::icase);
    static const boost::regex ref(R"(^(#?\d+|gh-\d+)$)", boost::regex::icase);
    if (boost::regex_search(content.begin(), content.end(), named_failure) ||
        boost::regex_search(content.begin(), content.end(), whitelist)) {
        return true;
    }
    const auto& stop = english_stop_words();
    std::size_t tokens = 0, refs = 0, content_words = 0;
    std::size_t pos = 0;
    const std::string_view edge = "()[]{}<>,.;:!?\"'";
    while (pos < content.size()) {
        while (pos < content.size() && text::is_space(content[pos])) ++pos;
        std::size_t end = pos;
        while (end < content.size() && !text::is_space(content[end])) ++end;
        std::string_view tok = content.substr(pos, end - pos);
        pos = end;
        while (!tok.empty() && edge.find(tok.front()) != std::string_view::npos) tok.remove_prefix(1);
        while (!tok.empty() && edge.find(tok.back()) != std::string_view::npos) tok.remove_suffix(1);
        if (tok.empty()) continue;
        ++tokens;
        if (boost::regex_match(tok.begin(), tok.end(), ref)) {
            ++refs;
            continue;
        }
        for (const auto& w : detail::plain_words(tok)) {
            bool has_alpha = std::any_of(w.begin(), w.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
            if (has_alpha && !stop.count(w)) ++content_words;
        }
    }
    if (tokens == 0 || refs * 2 > tokens) return false;
    return content_words >= 3;
}

/// Appends the following sentence when it opens with a resolution cue, keeping
/// the combined span within the 140-char cap.
inline std::string capture_resolution_tail(std::string_view matched_sentence, std::string_view next_sentence) {
    static const boost::regex cue(R"(^\s*(fix:|fixed by|workaround|caused by|solution))", boost::regex::icase);
    std::string matched(matched_sentence);
    if (next_sentence.empty() || !boost::regex_search(next_sentence.begin(), next_sentence.end(), cue)) {
        return matched;
    }
    std::string combined = matched + " " + text::trim(next_sentence);
    if (combined.size() <= kResolutionTailCap) return combined;
    std::string cut = text::truncate_at_word(combined, kResolutionTailCap);
    return cut.size() > matched.size() ? cut : matched;
}

inline std::string make_title(std::string_view content) { return text::truncate_at_word(content, kTitleLength); }

// ---------------------------------------------------------------------------
// Extraction

inline std::vector<KnowledgeUnit> extract_units(std::string_view message, const UnitMeta& meta,
                                                const std::vector<HeuristicRule>& rules) {
    if (rules.empty()) throw InvalidInput("extract_units: empty rule set");
    std::vector<KnowledgeUnit> units;
    auto sentences = text::split_sentences(text::strip_markup(message));
    if (sentences.empty()) return units;
    std::unordered_set<std::string> seen;
    for (const auto& rule : rules) {
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            const auto& sentence = sentences[i];
            boost::sregex_iterator it(sentence.begin(), sentence.end(), rule.pattern), end;
            for (; it != end; ++it) {
                std::string content = text::trim((*it)[1].str());
                if (rule.type == UnitType::pattern && i + 1 < sentences.size()) {
                    content = capture_resolution_tail(content, sentences[i + 1]);
                }
                if (content.size() < kMinContentLength || content.size() > kMaxContentLength || is_stop(content)) {
                    continue;
                }
                if (rule.type == UnitType::pattern && !is_substantive_pattern(content)) continue;
                auto id = unit_id(rule.type, content);
                if (!seen.insert(id).second) continue;
                KnowledgeUnit u;
                u.id = std::move(id);
                u.type = rule.type;
                u.title = make_title(content);
                u.content = std::move(content);
                u.weight = rule.prior;
                u.context = sentence;
                u.meta = meta;
                units.push_back(std::move(u));
            }
        }
    }
    return units;
}

inline UnitMeta meta_for(const Commit& c, std::string_view source) {
    return UnitMeta{c.short_sha(), c.author, c.author_date, std::string(source)};
}

/// Low-prior Pattern built from the cleaned subject plus the first body
/// sentence. Callers only invoke it when the regex pass was silent.
inline std::optional<KnowledgeUnit> subject_fallback_unit(const Commit& commit) {
    if (is_noise_subject(commit.subject)) return std::nullopt;
    std::string content = text::normalize(clean_subject(commit.subject));
    if (content.empty()) return std::nullopt;
    auto body_sentences = text::split_sentences(text::strip_markup(commit.body));
    if (!body_sentences.empty()) {
        char last = content.back();
        content += (last == '.' || last == '!' || last == '?') ? " " : ". ";
        content += body_sentences.front();
    }
    content = text::truncate_at_word(content, kFallbackCap);
    if (content.empty() || is_stop(content) || !is_substantive_pattern(content)) return std::nullopt;
    KnowledgeUnit u;
    u.id = unit_id(UnitType::pattern, content);
    u.type = UnitType::pattern;
    u.title = make_title(content);
    u.content = std::move(content);
    u.weight = kFallbackPrior;
    u.context = commit.subject;
    u.meta = meta_for(commit, kSourceSubjectFallback);
    return u;
}

/// Regex units for one commit, or the fallback unit when the regex pass is silent.
inline std::vector<KnowledgeUnit> extract_commit(const Commit& commit, const std::vector<HeuristicRule>& rules,
                                                 bool fallback_enabled) {
    auto units = extract_units(commit.message(), meta_for(commit, kSourceCommitMessage), rules);
    if (units.empty() && fallback_enabled) {
        if (auto fb = subject_fallback_unit(commit)) units.push_back(std::move(*fb));
    }
    return units;
}

/// Union over commits (in the given order, first occurrence of an id wins),
/// returned sorted by id.
inline std::vector<KnowledgeUnit> extract_commits(const std::vector<Commit>& commits,
                                                  const std::vector<HeuristicRule>& rules, bool fallback_enabled) {
    std::map<std::string, KnowledgeUnit> by_id;
    for (const auto& c : commits) {
        for (auto& u : extract_commit(c, rules, fallback_enabled)) by_id.try_emplace(u.id, std::move(u));
    }
    std::vector<KnowledgeUnit> out;
    out.reserve(by_id.size());
    for (auto& [id, u] : by_id) out.push_back(std::move(u));
    return out;
}

inline std::vector<KnowledgeUnit> extract_repository(const std::filesystem::path& repo, std::size_t max_count,
                                                     const std::vector<HeuristicRule>& rules, bool fallback_enabled) {
    return extract_commits(list_commits(repo, max_count), rules, fallback_enabled);
}

/// COMMITDISTILL_SUBJECT_FALLBACK=0 turns the subject fallback off; anything else keeps it on.
inline bool fallback_enabled_from_env() {
    const char* v = std::getenv("COMMITDISTILL_SUBJECT_FALLBACK");
    return !(v && std::string_view(v) == "0");
}

}  // namespace commitdistill
