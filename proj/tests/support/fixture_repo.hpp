#pragma once

#include <unistd.h>

#include <filesystem>
#include <ctime>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "commitdistill/process.hpp"
#include "commitdistill/text.hpp"

namespace testsupport {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = fs::temp_directory_path() / ("cdtest-" + std::to_string(::getpid()) + "-" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

/// A throwaway git repository with deterministic identities and dates.
class FixtureRepo {
public:
    FixtureRepo() { git({"init", "-q", "-b", "main"}); }

    const fs::path& path() const { return dir_.path(); }
    std::string str() const { return dir_.path().string(); }

    std::string git(const std::vector<std::string>& args, const std::string& stdin_data = {},
                    std::map<std::string, std::string> env = {}) const {
        std::vector<std::string> argv = {"git", "-C", str()};
        argv.insert(argv.end(), args.begin(), args.end());
        env.try_emplace("GIT_CONFIG_NOSYSTEM", "1");
        env.try_emplace("GIT_CONFIG_GLOBAL", "/dev/null");
        env.try_emplace("GIT_AUTHOR_NAME", "Fixture Author");
        env.try_emplace("GIT_AUTHOR_EMAIL", "author@example.com");
        env.try_emplace("GIT_COMMITTER_NAME", "Fixture Committer");
        env.try_emplace("GIT_COMMITTER_EMAIL", "committer@example.com");
        auto r = commitdistill::run_process(argv, env, stdin_data);
        if (r.exit_code != 0) {
            std::string cmd;
            for (const auto& a : args) cmd += " " + a;
            throw std::runtime_error("fixture git" + cmd + " failed: " + r.err);
        }
        return r.out;
    }

    void write(const std::string& rel, const std::string& content) const {
        auto p = path() / rel;
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << content;
    }

    /// Commits the given file contents with a verbatim message. Dates are
    /// "YYYY-MM-DDTHH:MM:SS+00:00"; the committer date defaults to the author date.
    std::string commit(const std::string& message, const std::map<std::string, std::string>& files,
                       const std::string& author_date, const std::string& author = "Fixture Author",
                       const std::string& committer_date = {}) const {
        for (const auto& [f, c] : files) write(f, c);
        git({"add", "-A"});
        git({"commit", "-q", "--allow-empty", "--cleanup=verbatim", "-F", "-"}, message,
            {{"GIT_AUTHOR_DATE", author_date},
             {"GIT_COMMITTER_DATE", committer_date.empty() ? author_date : committer_date},
             {"GIT_AUTHOR_NAME", author}});
        return head();
    }

    std::string head() const { return commitdistill::text::trim(git({"rev-parse", "HEAD"})); }

    struct BulkCommit {
        std::string message;
        std::string file;
        std::string content;
        long long epoch;
    };

    /// Writes a long linear history in one `git fast-import` pass.
    void fast_import(const std::vector<BulkCommit>& commits) const {
        std::ostringstream s;
        int mark = 1;
        for (const auto& c : commits) {
            s << "blob\nmark :" << mark << "\ndata " << c.content.size() << "\n" << c.content << "\n";
            s << "commit refs/heads/main\n";
            s << "author Bulk Author <bulk@example.com> " << c.epoch << " +0000\n";
            s << "committer Bulk Author <bulk@example.com> " << c.epoch << " +0000\n";
            s << "data " << c.message.size() << "\n" << c.message << "\n";
            s << "M 100644 :" << mark << " " << c.file << "\n\n";
            ++mark;
        }
        git({"fast-import", "--quiet"}, s.str());
        git({"reset", "-q", "--hard", "main"});
    }

private:
    TempDir dir_;
};

/// ISO-8601 UTC timestamp for a unix epoch.
inline std::string iso_utc(long long epoch) {
    std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S+00:00", &tm);
    return buf;
}

/// Base epoch for fixtures (2021-01-01T00:00:00Z).
inline constexpr long long kEpoch0 = 1609459200;

}  // namespace testsupport
