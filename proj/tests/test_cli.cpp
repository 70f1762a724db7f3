#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "commitdistill/process.hpp"
#include "commitdistill/store.hpp"
#include "support/fixture_repo.hpp"

using commitdistill::run_process;
using testsupport::FixtureRepo;
using testsupport::iso_utc;
using testsupport::kEpoch0;
using testsupport::TempDir;

namespace {

commitdistill::ProcessResult cli(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
    args.insert(args.begin(), COMMITDISTILL_CLI);
    return run_process(args, env, {});
}

void seed_repo(FixtureRepo& repo) {
    const std::vector<std::string> messages = {
        "Add intersphinx config\n\nWhen trying to link via intersphinx, a label must be used.\n",
        "Tune pool\n\nCrash occurs when the pool is exhausted. Workaround: raise the pool size.\n",
        "Refactor cookie jar internals\n",
    };
    for (std::size_t i = 0; i < messages.size(); ++i)
        repo.commit(messages[i], {{"f" + std::to_string(i), "x"}}, iso_utc(kEpoch0 + static_cast<long long>(i) * 60),
                    "Ada Lovelace");
}

nlohmann::json json_of(const std::string& s) { return nlohmann::json::parse(s); }

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(cli({}).exit_code, 1);
    EXPECT_EQ(cli({"bogus"}).exit_code, 1);
    EXPECT_EQ(cli({"query"}).exit_code, 1);
    EXPECT_EQ(cli({"extract", "--format", "xml"}).exit_code, 1);
    EXPECT_EQ(cli({"--help"}).exit_code, 0);
}

TEST(Cli, MissingRepoExitsTwo) {
    TempDir dir;
    auto r = cli({"extract", "--repo", (dir.path() / "nope").string()});
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, QueryWithoutStoreHints) {
    FixtureRepo repo;
    seed_repo(repo);
    auto r = cli({"query", "--repo", repo.str(), "pool"});
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("extract"), std::string::npos);
}

TEST(Cli, EmptyRepoYieldsEmptyStore) {
    FixtureRepo repo;
    auto r = cli({"extract", "--repo", repo.str(), "--format", "json"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto j = json_of(r.out);
    EXPECT_EQ(j["extracted"], 0);
    EXPECT_EQ(j["units_per_1000_commits"], 0.0);
    EXPECT_TRUE(commitdistill::load(repo.path()).empty());
}

TEST(Cli, ExtractTwiceAddsNothing) {
    FixtureRepo repo;
    seed_repo(repo);
    auto first = cli({"extract", "--repo", repo.str(), "--format", "json"});
    ASSERT_EQ(first.exit_code, 0) << first.err;
    auto j1 = json_of(first.out);
    // fact (intersphinx), skill (workaround), pattern (pool + tail), fallback (cookie jar)
    EXPECT_EQ(j1["by_type"]["fact"], 1);
    EXPECT_EQ(j1["by_type"]["skill"], 1);
    EXPECT_EQ(j1["by_type"]["pattern"], 2);
    EXPECT_EQ(j1["new_units"], 4);
    auto second = cli({"extract", "--repo", repo.str(), "--format", "json"});
    ASSERT_EQ(second.exit_code, 0);
    EXPECT_EQ(json_of(second.out)["new_units"], 0);
}

TEST(Cli, FallbackToggle) {
    FixtureRepo a, b;
    seed_repo(a);
    seed_repo(b);
    auto off = cli({"extract", "--repo", a.str(), "--no-fallback", "--format", "json"});
    auto env_off = cli({"extract", "--repo", b.str(), "--format", "json"}, {{"COMMITDISTILL_SUBJECT_FALLBACK", "0"}});
    ASSERT_EQ(off.exit_code, 0);
    ASSERT_EQ(env_off.exit_code, 0);
    EXPECT_EQ(json_of(off.out)["extracted"], 3);
    EXPECT_EQ(json_of(env_off.out)["extracted"], 3);
}

TEST(Cli, QueryRanksAndStaysSilent) {
    FixtureRepo repo;
    seed_repo(repo);
    ASSERT_EQ(cli({"extract", "--repo", repo.str()}).exit_code, 0);

    auto ood = cli({"query", "--repo", repo.str(), "kubernetes helm chart"});
    EXPECT_EQ(ood.exit_code, 0);
    EXPECT_EQ(ood.out, "");

    auto hit = cli({"query", "--repo", repo.str(), "--theta", "0", "--format", "json", "intersphinx label"});
    ASSERT_EQ(hit.exit_code, 0) << hit.err;
    auto arr = json_of(hit.out);
    ASSERT_GE(arr.size(), 1u);
    EXPECT_EQ(arr[0]["unit"]["content"], "When trying to link via intersphinx, a label must be used.");

    auto human = cli({"query", "--repo", repo.str(), "--theta", "0", "intersphinx label"});
    EXPECT_NE(human.out.find("\tfact\tWhen trying to link via intersphinx"), std::string::npos);

    auto hybrid = cli({"query", "--repo", repo.str(), "--theta", "0", "--hybrid", "pool exhausted"});
    ASSERT_EQ(hybrid.exit_code, 0);
    EXPECT_NE(hybrid.out.find("pattern:"), std::string::npos);
}

TEST(Cli, StripAttribution) {
    FixtureRepo repo;
    seed_repo(repo);
    ASSERT_EQ(cli({"extract", "--repo", repo.str()}).exit_code, 0);
    ASSERT_EQ(cli({"store", "strip-attribution", "--repo", repo.str()}).exit_code, 0);
    for (const auto& [id, u] : commitdistill::load(repo.path())) EXPECT_EQ(u.meta.author, "redacted");
}

TEST(Cli, KappaOnIdenticalColumns) {
    TempDir dir;
    auto labels = dir.path() / "labels.csv";
    std::ofstream(labels) << "unit_id,annotator_a,annotator_b,adjudicated\n"
                             "a,useful,useful,useful\nb,noise,noise,noise\nc,fragment,fragment,fragment\n";
    auto r = cli({"eval", "kappa", "--labels", labels.string(), "--out", (dir.path() / "out").string(),
                  "--resamples", "500"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("cohen kappa:      1.000"), std::string::npos) << r.out;
    std::ifstream in(dir.path() / "out" / "kappa_results.json");
    auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["kappa"], 1.0);
}

TEST(Cli, KappaMissingLabelsIsUsageError) {
    EXPECT_EQ(cli({"eval", "kappa"}).exit_code, 1);
}
