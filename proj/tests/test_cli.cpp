#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cdmn/oracle.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace cdmn;
namespace fs = std::filesystem;
using cdmn::testing::corpus_path;
using cdmn::testing::fixture_path;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Outcome r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("cdmn_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

}  // namespace

TEST(Cli, CheckGoodModel) {
    Outcome r = invoke({"check", corpus_path("map_coloring")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(r.out, "0 diagnostics\n");
}

TEST(Cli, CheckReportsTypo) {
    Outcome r = invoke({"check", fixture_path("agatha_typo.cdmn")});
    EXPECT_EQ(r.code, cli::kFailed);
    EXPECT_EQ(count_of(r.err, "ValueOutsideDomain"), 1u);
    EXPECT_NE(r.err.find("agatha_typo.cdmn:27:"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("1 diagnostics"), std::string::npos);
}

TEST(Cli, MissingFile) {
    EXPECT_EQ(invoke({"check", "/nonexistent/model.cdmn"}).code, cli::kIo);
    EXPECT_EQ(invoke({"solve", "/nonexistent/model.cdmn"}).code, cli::kIo);
}

TEST(Cli, BadArguments) {
    EXPECT_EQ(invoke({}).code, cli::kIo);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kIo);
    EXPECT_EQ(invoke({"solve", corpus_path("adult_18"), "--format", "yaml"}).code, cli::kIo);
    EXPECT_EQ(invoke({"solve", corpus_path("adult_18"), "--models", "0"}).code, cli::kIo);
}

TEST(Cli, SolveAdult) {
    Outcome r = invoke({"solve", corpus_path("adult_18")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(r.out, "Person is Adult = Yes\nstatus: SAT\n");
}

TEST(Cli, TenAgathaModels) {
    Outcome r = invoke({"solve", fixture_path("agatha_ten_models.cdmn")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(count_of(r.out, "---\n"), 9u);
    EXPECT_EQ(count_of(r.out, "Killer = Agatha\n"), 10u);
    EXPECT_EQ(count_of(r.out, "Killer = "), 10u);
}

TEST(Cli, DeskOptimumMatchesOracle) {
    CompiledModel m = cdmn::testing::compile_corpus("balanced_assignment");
    std::optional<Value> best;
    for (const Assignment& a : brute_force_models(m.theory, m.structure)) {
        Value v = evaluate_objective(m.theory, m.structure, a, m.task.objective);
        if (!best || v < *best) best = v;
    }
    ASSERT_TRUE(best);
    Outcome r = invoke({"solve", corpus_path("balanced_assignment")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("status: OPTIMUM (objective=" + best->to_string() + ")\n"), std::string::npos) << r.out;
    EXPECT_EQ(count_of(r.out, "---"), 0u);
}

TEST(Cli, UnsatToy) {
    Outcome r = invoke({"solve", fixture_path("unsat_toy.cdmn")});
    EXPECT_EQ(r.code, cli::kFailed);
    EXPECT_EQ(r.out, "status: UNSAT\n");
}

TEST(Cli, TimeoutIsLimit) {
    Outcome r = invoke({"solve", corpus_path("balanced_assignment_full"), "--timeout", "0.3"});
    EXPECT_EQ(r.code, cli::kLimit);
    EXPECT_NE(r.out.find("status: LIMIT\n"), std::string::npos);
}

TEST(Cli, JsonFormat) {
    Outcome r = invoke({"solve", fixture_path("empty_theory.cdmn"), "--format", "json"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("\"status\": \"SAT\""), std::string::npos);
    EXPECT_EQ(count_of(r.out, "\"Setting\""), 3u);
}

TEST(Cli, ModelsFlagOverridesTask) {
    Outcome r = invoke({"solve", corpus_path("map_coloring"), "--models", "2"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(count_of(r.out, "---\n"), 1u);
}

TEST(Cli, GroundToStdoutAndFile) {
    Outcome r = invoke({"ground", fixture_path("hatees_below_three.cdmn")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(count_of(r.out, "\"origin\": \"Noone hates all\""), 3u);

    TempDir dir;
    const fs::path target = dir.path() / "ground.json";
    Outcome f = invoke({"ground", fixture_path("hatees_below_three.cdmn"), "--emit", target.string()});
    EXPECT_EQ(f.code, cli::kOk);
    EXPECT_EQ(corpus::read_file(target), r.out);
    EXPECT_EQ(invoke({"ground", fixture_path("hatees_below_three.cdmn"), "--emit", "/nonexistent/dir/x.json"}).code,
              cli::kIo);
}

TEST(Cli, CorpusDirectoryErrors) {
    TempDir dir;
    EXPECT_EQ(invoke({"corpus", dir.path().string()}).code, cli::kIo);
    EXPECT_EQ(invoke({"corpus", (dir.path() / "missing").string()}).code, cli::kIo);
}

TEST(Cli, CorpusRunAndRegeneration) {
    TempDir dir;
    for (const char* name : {"adult_18", "map_coloring", "pigeonhole_unsat"}) {
        fs::copy_file(corpus_path(name), dir.path() / (std::string(name) + ".cdmn"));
    }
    // No expectations yet: every entry fails.
    Outcome before = invoke({"corpus", dir.path().string()});
    EXPECT_EQ(before.code, cli::kFailed);
    EXPECT_NE(before.out.find("0/3 passed"), std::string::npos) << before.out;

    Outcome regen = invoke({"corpus", dir.path().string(), "--regen-oracle"});
    EXPECT_EQ(regen.code, cli::kOk) << regen.err;
    EXPECT_NE(regen.out.find("3/3 passed"), std::string::npos) << regen.out;
    // The regenerated map expectation equals the committed one.
    corpus::Expectation fresh = corpus::load_expectation(dir.path() / "map_coloring.expected.json");
    corpus::Expectation committed = corpus::load_expectation(corpus::expectation_path(corpus_path("map_coloring")));
    EXPECT_EQ(fresh.models, committed.models);

    // A tampered expectation is caught.
    fresh.models.erase(fresh.models.begin());
    corpus::save_expectation(dir.path() / "map_coloring.expected.json", fresh);
    Outcome after = invoke({"corpus", dir.path().string()});
    EXPECT_EQ(after.code, cli::kFailed);
    EXPECT_TRUE(std::regex_search(after.out, std::regex("map_coloring +FAIL")));
    EXPECT_NE(after.out.find("2/3 passed"), std::string::npos);
}
