#pragma once

#include <boost/regex.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "commitdistill/error.hpp"
#include "commitdistill/process.hpp"
#include "commitdistill/text.hpp"

namespace commitdistill {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+HH:MM"/"-HH:MM" (colon optional).
inline std::optional<Timestamp> parse_iso8601(std::string_view s) {
    auto num = [&](std::size_t pos, std::size_t len, int& v) {
        if (pos + len > s.size()) return false;
        auto r = std::from_chars(s.data() + pos, s.data() + pos + len, v);
        return r.ec == std::errc{} && r.ptr == s.data() + pos + len;
    };
    int y, mo, d, h, mi, sec;
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        s[16] != ':')
        return std::nullopt;
    if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) ||
        !num(17, 2, sec))
        return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    int offset_min = 0;
    if (pos == s.size()) return std::nullopt;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        if (pos + 1 != s.size()) return std::nullopt;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int oh, om;
        std::size_t mpos = pos + 3;
        if (mpos < s.size() && s[mpos] == ':') ++mpos;
        if (!num(pos + 1, 2, oh) || !num(mpos, 2, om) || mpos + 2 != s.size()) return std::nullopt;
        offset_min = (oh * 60 + om) * (s[pos] == '-' ? -1 : 1);
    } else {
        return std::nullopt;
    }
    auto t = std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
             std::chrono::seconds{sec} - std::chrono::minutes{offset_min};
    return std::chrono::time_point_cast<std::chrono::seconds>(t);
}

inline Timestamp parse_iso8601_or_throw(std::string_view s) {
    auto t = parse_iso8601(s);
    if (!t) throw ParseError("invalid ISO-8601 timestamp: '" + std::string(s) + "'");
    return *t;
}

inline bool is_full_sha(std::string_view s) {
    return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

struct Commit {
    std::string sha;
    std::string author;
    std::string author_date;  // ISO-8601 with offset, exactly as git printed it
    std::string subject;
    std::string body;
    std::optional<std::set<std::string>> changed_files;  // filled on demand

    std::string short_sha() const { return sha.substr(0, 8); }
    Timestamp timestamp() const { return parse_iso8601_or_throw(author_date); }
    /// Subject and body joined the way the extractor sees them.
    std::string message() const { return body.empty() ? subject : subject + "\n\n" + body; }

    bool operator==(const Commit&) const = default;
};

namespace git {

inline constexpr char kFieldSep = '\x1f';
inline constexpr char kRecordSep = '\x1e';

inline ProcessResult run(const std::filesystem::path& repo, std::vector<std::string> args) {
    std::vector<std::string> argv = {"git", "-C", repo.string()};
    argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
    return run_process(argv, {{"GIT_PAGER", "cat"}, {"LC_ALL", "C"}});
}

inline std::string run_checked(const std::filesystem::path& repo, std::vector<std::string> args) {
    std::string label = "git";
    for (const auto& a : args) label += " " + a;
    auto r = run(repo, std::move(args));
    if (r.exit_code != 0) {
        throw GitError(label + " failed (exit " + std::to_string(r.exit_code) + "): " + text::trim(r.err),
                       r.exit_code);
    }
    return std::move(r.out);
}

inline void require_repo(const std::filesystem::path& repo) {
    std::error_code ec;
    if (!std::filesystem::is_directory(repo, ec)) {
        throw RepoNotFound("repository not found: " + repo.string() + " is not a directory");
    }
    auto r = run(repo, {"rev-parse", "--git-dir"});
    if (r.exit_code != 0) {
        throw RepoNotFound("repository not found at " + repo.string() + ": " + text::trim(r.err));
    }
}

inline bool has_head(const std::filesystem::path& repo) {
    return run(repo, {"rev-parse", "--verify", "-q", "HEAD"}).exit_code == 0;
}

inline std::string head_sha(const std::filesystem::path& repo) {
    return text::trim(run_checked(repo, {"rev-parse", "HEAD"}));
}

/// Parses the unit/record separated wire format produced by list_commits.
inline std::vector<Commit> parse_log(std::string_view raw) {
    std::vector<Commit> commits;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto end = raw.find(kRecordSep, pos);
        if (end == std::string_view::npos) end = raw.size();
        auto rec = raw.substr(pos, end - pos);
        pos = end + 1;
        while (!rec.empty() && (rec.front() == '\n' || rec.front() == '\r')) rec.remove_prefix(1);
        if (rec.empty() && end == raw.size()) break;

        std::vector<std::string_view> fields;
        std::size_t fpos = 0;
        while (true) {
            auto fend = rec.find(kFieldSep, fpos);
            fields.push_back(rec.substr(fpos, fend == std::string_view::npos ? rec.size() - fpos : fend - fpos));
            if (fend == std::string_view::npos) break;
            fpos = fend + 1;
        }
        if (fields.size() != 5 || !is_full_sha(fields[0])) {
            std::string who = is_full_sha(rec.substr(0, std::min<std::size_t>(40, rec.size())))
                                  ? std::string(rec.substr(0, 40))
                                  : (commits.empty() ? std::string("<unknown>") : commits.back().sha);
            throw ParseError("commit " + who +
                             " message contains a reserved delimiter byte (0x1E/0x1F); refusing to parse");
        }
        Commit c;
        c.sha = std::string(fields[0]);
        c.author = std::string(fields[1]);
        c.author_date = std::string(fields[2]);
        c.subject = std::string(fields[3]);
        std::string_view body = fields[4];
        while (!body.empty() && text::is_space(body.back())) body.remove_suffix(1);
        c.body = std::string(body);
        if (!parse_iso8601(c.author_date)) {
            throw ParseError("commit " + c.sha + " has unparseable author date '" + c.author_date + "'");
        }
        commits.push_back(std::move(c));
    }
    return commits;
}

}  // namespace git

/// Newest-first commit history. With `before`, only commits whose author date
/// is strictly earlier are returned (filtering is done here on the parsed
/// author date, not by git's committer-date based --before).
inline std::vector<Commit> list_commits(const std::filesystem::path& repo, std::size_t max_count,
                                        std::optional<Timestamp> before = std::nullopt) {
    git::require_repo(repo);
    if (max_count == 0 || !git::has_head(repo)) return {};
    std::vector<std::string> args = {"-c", "log.showSignature=false", "log", "--no-color", "--date=iso-strict",
                                     "--pretty=format:%H%x1f%an%x1f%ad%x1f%s%x1f%b%x1e"};
    if (!before) args.insert(args.begin() + 3, "-n" + std::to_string(max_count));
    auto commits = git::parse_log(git::run_checked(repo, std::move(args)));
    if (before) {
        std::vector<Commit> kept;
        for (auto& c : commits) {
            if (kept.size() == max_count) break;
            if (c.timestamp() < *before) kept.push_back(std::move(c));
        }
        commits = std::move(kept);
    }
    return commits;
}

/// Name-only diff against the first parent (root commits diff against the empty tree).
inline std::set<std::string> changed_files(const std::filesystem::path& repo, const std::string& sha) {
    git::require_repo(repo);
    auto check = git::run(repo, {"rev-parse", "--verify", "-q", sha + "^{commit}"});
    if (check.exit_code != 0) throw UnknownSha("unknown commit: " + sha);
    auto full = text::trim(check.out);
    auto parents_line = text::trim(git::run_checked(repo, {"rev-list", "--parents", "-n", "1", full}));
    std::vector<std::string> ids;
    for (std::size_t p = 0; p < parents_line.size();) {
        auto sp = parents_line.find(' ', p);
        ids.push_back(parents_line.substr(p, sp == std::string::npos ? std::string::npos : sp - p));
        if (sp == std::string::npos) break;
        p = sp + 1;
    }
    std::string out;
    if (ids.size() <= 1) {
        out = git::run_checked(repo, {"diff-tree", "--root", "--no-commit-id", "--name-only", "-r", "-z", full});
    } else {
        out = git::run_checked(repo, {"diff-tree", "--no-renames", "--name-only", "-r", "-z", ids[1], full});
    }
    std::set<std::string> files;
    std::size_t p = 0;
    while (p < out.size()) {
        auto z = out.find('\0', p);
        if (z == std::string::npos) z = out.size();
        if (z > p) files.emplace(out.substr(p, z - p));
        p = z + 1;
    }
    return files;
}

inline const std::set<std::string>& ensure_changed_files(const std::filesystem::path& repo, Commit& c) {
    if (!c.changed_files) c.changed_files = changed_files(repo, c.sha);
    return *c.changed_files;
}

// ---------------------------------------------------------------------------
// Subject handling

inline bool is_merge_subject(std::string_view subject) {
    static const boost::regex re(R"(^\s*Merge\s+(pull request|branch|remote-tracking branch|tag|commit|changes|upstream)\b)",
                                 boost::regex::icase);
    return boost::regex_search(subject.begin(), subject.end(), re);
}

inline bool is_release_subject(std::string_view subject) {
    static const boost::regex re(
        R"(^\s*(v?\d+(\.\d+)+\S*\s*$|(release|releasing|released)(\s+(v?\d\S*|version|notes)\b.*)?\s*$|prepared?( for)?( the)? release|bump(ed|s)? (the )?version|version bump|tag(ged)? v?\d|(release|version)\s+v?\d+(\.\d+)+))",
        boost::regex::icase);
    return boost::regex_search(subject.begin(), subject.end(), re);
}

inline bool is_bot_subject(std::string_view subject) {
    static const boost::regex re(
        R"((\[bot\]|dependabot|renovate|\[pre-commit\.ci\]|pre-commit autoupdate|^\s*bump \S+ from \S+ to \S+))",
        boost::regex::icase);
    return boost::regex_search(subject.begin(), subject.end(), re);
}

inline bool is_noise_subject(std::string_view subject) {
    return is_merge_subject(subject) || is_release_subject(subject) || is_bot_subject(subject);
}

/// Drops conventional-commit prefixes, bracketed tags, issue/PR references and
/// merge boilerplate; collapses whitespace; keeps the original casing.
inline std::string clean_subject(std::string_view subject) {
    static const boost::regex merge_pr(R"(^\s*Merge pull request #\d+ from \S+)", boost::regex::icase);
    static const boost::regex merge_branch(
        R"(^\s*Merge (remote-tracking )?branch '[^']*'( of \S+)?( into \S+)?)", boost::regex::icase);
    static const boost::regex tag(R"(^\s*\[[^\]]*\]\s*)");
    static const boost::regex prefix(
        R"(^\s*(fix(es|ed)?|bug(fix)?|hotfix|feat(ure)?|chore|docs?|refactor|tests?|perf|style|build|ci|revert)(\([^)]*\))?!?\s*:\s*)",
        boost::regex::icase);
    static const boost::regex issue_ref(R"(\(\s*#\d+\s*\)?|#\d+)");
    static const boost::regex empty_parens(R"(\(\s*\))");
    static const boost::regex trailing(R"([\s,;:\-]+$)");

    std::string s(subject);
    s = boost::regex_replace(s, merge_pr, "");
    s = boost::regex_replace(s, merge_branch, "");
    for (std::string prev; prev != s;) {
        prev = s;
        s = boost::regex_replace(s, tag, "", boost::format_first_only);
        s = boost::regex_replace(s, prefix, "", boost::format_first_only);
    }
    s = boost::regex_replace(s, issue_ref, " ");
    s = boost::regex_replace(s, empty_parens, " ");
    s = text::collapse_whitespace(s);
    s = boost::regex_replace(s, trailing, "");
    return s;
}

}  // namespace commitdistill
