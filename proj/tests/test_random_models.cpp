#include <gtest/gtest.h>

#include "support.hpp"

using namespace cdmn;
using namespace cdmn::testing;

TEST(RandomModels, GeneratorIsDeterministic) {
    EXPECT_EQ(random_model(7, false), random_model(7, false));
    EXPECT_NE(random_model(7, false), random_model(8, false));
}

TEST(RandomModels, EveryGeneratedModelCompiles) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (bool optimize : {false, true}) {
            const std::string text = random_model(seed, optimize);
            EXPECT_NO_THROW(compile_source(text, "random")) << text;
        }
    }
}

TEST(RandomModels, SolverAgreesWithOracleOnTwoHundredModels) {
    SuiteResult r = run_random_suite(200, 1000);
    EXPECT_EQ(r.total, 200);
    EXPECT_EQ(r.optimizing, 100);
    for (const std::string& f : r.failures) ADD_FAILURE() << f;
    EXPECT_EQ(r.agreed, r.total);
}
