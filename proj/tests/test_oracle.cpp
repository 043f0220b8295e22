#include <gtest/gtest.h>

#include "cdmn/oracle.hpp"
#include "support.hpp"

using namespace cdmn;
using cdmn::testing::compile_corpus;
using cdmn::testing::compile_file;
using cdmn::testing::fixture_path;

TEST(Oracle, SolverModelsPassTheCheck) {
    for (const char* name : {"map_coloring", "monkey_business", "adult_17"}) {
        CompiledModel m = compile_corpus(name);
        SolveOptions o;
        o.max_models = 20;
        o.verify = false;
        for (const ModelResult& r : solve(ground(m), o).models) {
            EXPECT_TRUE(check_model(m.theory, m.structure, r.assignments).ok) << name;
        }
    }
}

TEST(Oracle, ButlerAsKillerNamesTheKillerTable) {
    CompiledModel m = compile_corpus("who_killed_agatha");
    SolveOptions one;
    one.max_models = 1;
    SolveResult r = solve(ground(m), one);
    ASSERT_EQ(r.models.size(), 1u);
    Assignment a = r.models[0].assignments;
    a[*m.vocab->find_nullary("Killer")][{}] = Value::atom("Butler");
    CheckResult c = check_model(m.theory, m.structure, a);
    EXPECT_FALSE(c.ok);
    EXPECT_NE(std::find(c.violated.begin(), c.violated.end(), "Killer hates the victim and is not richer"),
              c.violated.end());
    for (const Assignment& model : brute_force_models(m.theory, m.structure)) {
        EXPECT_EQ(model.at(*m.vocab->find_nullary("Killer")).at({}), Value::atom("Agatha"));
    }
}

TEST(Oracle, SharedColorAcrossAllYesBorders) {
    CompiledModel m = compile_file(fixture_path("map_one_way.cdmn"));
    const SymbolId bordering = *m.vocab->find_symbol("Country and Country are Bordering");
    for (auto& [args, value] : m.structure.fixed[bordering]) value = Value::yes();
    Assignment a;
    const SymbolId color = *m.vocab->find_symbol("Color of Country");
    for (const Tuple& t : m.structure.instances(color)) a[color][t] = Value(t[0].name() == "France" ? 1 : 2);
    CheckResult c = check_model(m.theory, m.structure, a);
    EXPECT_FALSE(c.ok);
    EXPECT_EQ(c.violated, std::vector<std::string>{"Bordering countries differ"});
}

TEST(Oracle, MapColoringCount) {
    // Independent count: the one-way border graph is Belgium-{France, Luxembourg, Netherlands, Germany},
    // Germany-{France, Denmark, Luxembourg}. Color Belgium (4), Germany (3), then France and
    // Luxembourg avoid both (2 each), Netherlands avoids Belgium (3), Denmark avoids Germany (3).
    CompiledModel m = compile_file(fixture_path("map_one_way.cdmn"));
    EXPECT_EQ(candidate_space(m.structure), 4096u);
    EXPECT_EQ(brute_force_models(m.theory, m.structure).size(), 4u * 3 * 2 * 2 * 3 * 3);
}

TEST(Oracle, EmptyTheoryAcceptsEverything) {
    CompiledModel m = compile_file(fixture_path("empty_theory.cdmn"));
    EXPECT_EQ(brute_force_models(m.theory, m.structure).size(), 3u);
}

TEST(Oracle, CapThrows) {
    CompiledModel m = compile_corpus("monkey_business");
    EXPECT_EQ(candidate_space(m.structure), 65536u);
    try {
        brute_force_models(m.theory, m.structure, 1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleTooLarge);
    }
    EXPECT_EQ(brute_force_models(m.theory, m.structure).size(), 1u);
}

TEST(Oracle, EvaluationErrorRejectsCandidate) {
    CompiledModel m = compile_source(
        "type: T\nName | Type | Values\nN | int | [0..2]\n\nconstant: C\nName | Type\nA | N\n\n"
        "table: Ratio\nE* || 4 / A\n1 || > 1\n\nexecute\nget all models\n");
    std::set<std::string> values;
    for (const auto& model : cdmn::testing::oracle_models(m)) values.insert(model.at("A"));
    EXPECT_EQ(values, (std::set<std::string>{"1", "2"}));
    EXPECT_EQ(cdmn::testing::solver_models(m), cdmn::testing::oracle_models(m));
}

TEST(Oracle, ObjectiveValue) {
    CompiledModel m = compile_file(fixture_path("burger_two_items.cdmn"));
    EXPECT_EQ(evaluate_objective(m.theory, m.structure, {},
                                 make_apply(*m.vocab->find_nullary("Total Sodium"), {}, Vocabulary::kInt)),
              Value(710));
}
