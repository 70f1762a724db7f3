#pragma once

#include <json.hpp>

#include <boost/regex.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commitdistill/error.hpp"
#include "commitdistill/git_ingest.hpp"

namespace commitdistill::eval {

enum class QueryClass { answerable, not_in_corpus, ood, fact_style };

inline std::string_view to_string(QueryClass c) {
    switch (c) {
        case QueryClass::answerable: return "ANSWERABLE";
        case QueryClass::not_in_corpus: return "NOT_IN_CORPUS";
        case QueryClass::ood: return "OOD";
        case QueryClass::fact_style: return "FACT_STYLE";
    }
    return "OOD";
}

inline QueryClass query_class_from_string(std::string_view s) {
    if (s == "ANSWERABLE") return QueryClass::answerable;
    if (s == "NOT_IN_CORPUS") return QueryClass::not_in_corpus;
    if (s == "OOD") return QueryClass::ood;
    if (s == "FACT_STYLE") return QueryClass::fact_style;
    throw ParseError("unknown query_class '" + std::string(s) + "'");
}

struct BenchQuery {
    std::string query;
    std::string answer_span;
    QueryClass query_class = QueryClass::fact_style;
    std::string subject_repo;
};

inline bool needs_answer_span(QueryClass c) { return c == QueryClass::fact_style || c == QueryClass::answerable; }

inline std::vector<BenchQuery> parse_queries(std::string_view data) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(data);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("query file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("query file must be a JSON array");
    std::vector<BenchQuery> out;
    for (const auto& j : doc) {
        BenchQuery q;
        try {
            q.query = j.at("query").get<std::string>();
            q.answer_span = j.value("answer_span", std::string{});
            q.query_class = query_class_from_string(j.at("query_class").get<std::string>());
            q.subject_repo = j.value("subject_repo", std::string{});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed benchmark query: ") + e.what());
        }
        if (needs_answer_span(q.query_class) == q.answer_span.empty()) {
            throw ParseError("query '" + q.query + "': answer_span must be " +
                             (q.answer_span.empty() ? "nonempty" : "empty") + " for class " +
                             std::string(to_string(q.query_class)));
        }
        out.push_back(std::move(q));
    }
    return out;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<BenchQuery> load_queries(const std::filesystem::path& p) { return parse_queries(read_file(p)); }

inline nlohmann::json to_json(const BenchQuery& q) {
    return {{"query", q.query},
            {"answer_span", q.answer_span},
            {"query_class", std::string(to_string(q.query_class))},
            {"subject_repo", q.subject_repo}};
}

// ---------------------------------------------------------------------------
// Annotation labels

inline const std::set<std::string>& label_rubric() {
    static const std::set<std::string> rubric = {"useful", "trivially-true", "fragment", "noise"};
    return rubric;
}

struct LabelRecord {
    std::string unit_id;
    std::string annotator_a;
    std::string annotator_b;
    std::string adjudicated;
};

/// CSV with header `unit_id,annotator_a,annotator_b,adjudicated`; fields are
/// plain (no quoting needed for ids and rubric labels, but quoted fields are accepted).
inline std::vector<LabelRecord> parse_labels(std::string_view data) {
    auto split = [](std::string_view line) {
        std::vector<std::string> fields;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    cur.push_back(c);
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(text::trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        fields.push_back(text::trim(cur));
        return fields;
    };
    std::vector<LabelRecord> out;
    std::size_t pos = 0, line_no = 0;
    bool header_seen = false;
    while (pos <= data.size()) {
        auto nl = data.find('\n', pos);
        auto line = data.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? data.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (text::trim(line).empty()) continue;
        auto f = split(line);
        if (!header_seen) {
            if (f != std::vector<std::string>{"unit_id", "annotator_a", "annotator_b", "adjudicated"}) {
                throw ParseError("labels CSV header must be unit_id,annotator_a,annotator_b,adjudicated");
            }
            header_seen = true;
            continue;
        }
        if (f.size() != 4) throw ParseError("labels CSV line " + std::to_string(line_no) + ": expected 4 fields");
        for (std::size_t i = 1; i < 4; ++i) {
            if (!label_rubric().count(f[i])) {
                throw ParseError("labels CSV line " + std::to_string(line_no) + ": unknown label '" + f[i] + "'");
            }
        }
        out.push_back({f[0], f[1], f[2], f[3]});
    }
    if (!header_seen) throw ParseError("labels CSV is empty");
    return out;
}

inline std::vector<LabelRecord> load_labels(const std::filesystem::path& p) { return parse_labels(read_file(p)); }

// ---------------------------------------------------------------------------
// Queries from history

/// The n most recent cleaned subjects, skipping merge/release/bot commits.
inline std::vector<std::string> derive_queries(const std::vector<Commit>& commits, std::size_t n) {
    std::vector<std::string> out;
    for (const auto& c : commits) {
        if (out.size() == n) break;
        if (is_noise_subject(c.subject)) continue;
        auto q = clean_subject(c.subject);
        if (!q.empty()) out.push_back(std::move(q));
    }
    return out;
}

inline bool is_bugfix_subject(std::string_view subject) {
    static const boost::regex re(R"(\b(fix(es|ed)?|bug|regression|crash|fault)\b)", boost::regex::icase);
    return boost::regex_search(subject.begin(), subject.end(), re);
}

}  // namespace commitdistill::eval
