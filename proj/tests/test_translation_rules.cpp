// One test per translation rule from table cells and headers to logic.
// Each cell kind is checked both by its rendering and by its truth value
// against a hand-written predicate.

#include <gtest/gtest.h>

#include <functional>

#include "cdmn/expression.hpp"
#include "cdmn/oracle.hpp"
#include "support.hpp"

using namespace cdmn;

namespace {

class CellRule : public ::testing::Test {
protected:
    void SetUp() override {
        model_ = cdmn::testing::compile_file(cdmn::testing::fixture_path("hatees_below_three.cdmn"));
        vocab_ = model_.vocab.get();
        hatees_ = *vocab_->find_symbol("Hatees of Person");
        person_ = *vocab_->find_sort("Person");
        column_ = make_apply(hatees_, {make_value(Value::atom("Agatha"), person_)}, *vocab_->find_sort("Number"));
    }

    Formula translate(const std::string& cell) {
        return formula_of_cell(parse_cell(cell, *vocab_, scope_), column_, *vocab_);
    }

    /// Truth of the translated cell for Hatees(Agatha) = 0..5 against `expected`.
    void agrees(const std::string& cell, const std::function<bool(int)>& expected) {
        Formula f = translate(cell);
        for (int k = 0; k <= 5; ++k) {
            Assignment a{{hatees_, {{{Value::atom("Agatha")}, Value(k)}}}};
            Valuation v;
            EXPECT_EQ(evaluate_formula(f, Interpretation(model_.structure, &a, nullptr), v), expected(k))
                << cell << " at " << k;
        }
    }

    std::string text(const std::string& cell) { return to_string(translate(cell), *vocab_); }

    CompiledModel model_;
    const Vocabulary* vocab_ = nullptr;
    VarScope scope_;
    SymbolId hatees_{};
    SortId person_{};
    Term column_;
};

}  // namespace

TEST_F(CellRule, DashIsTrue) {
    EXPECT_EQ(translate("-")->kind, FormulaNode::Kind::True);
    agrees("-", [](int) { return true; });
}

TEST_F(CellRule, ComparisonAppliesOperatorToColumn) {
    EXPECT_EQ(text("< 3"), "Hatees(Agatha) < 3");
    agrees("< 3", [](int k) { return k < 3; });
    agrees("<= 3", [](int k) { return k <= 3; });
    agrees("> 3", [](int k) { return k > 3; });
    agrees(">= 3", [](int k) { return k >= 3; });
    agrees("= 3", [](int k) { return k == 3; });
}

TEST_F(CellRule, NegationIsInequality) {
    EXPECT_EQ(text("not(2)"), "Hatees(Agatha) ~= 2");
    agrees("not(2)", [](int k) { return k != 2; });
    agrees("Not(1, 2)", [](int k) { return k != 1 && k != 2; });
}

TEST_F(CellRule, ListIsDisjunctionOfEqualities) {
    EXPECT_EQ(text("1, 4"), "(Hatees(Agatha) = 1 | Hatees(Agatha) = 4)");
    agrees("1, 4", [](int k) { return k == 1 || k == 4; });
}

TEST_F(CellRule, BareExpressionIsEquality) {
    EXPECT_EQ(text("2"), "Hatees(Agatha) = 2");
    agrees("2", [](int k) { return k == 2; });
    agrees("1 + 1", [](int k) { return k == 2; });
}

TEST_F(CellRule, RangesInEveryBracketCombination) {
    EXPECT_EQ(text("[0..1)"), "(Hatees(Agatha) >= 0 & Hatees(Agatha) < 1)");
    agrees("[1..3]", [](int k) { return k >= 1 && k <= 3; });
    agrees("[1..3)", [](int k) { return k >= 1 && k < 3; });
    agrees("(1..3]", [](int k) { return k > 1 && k <= 3; });
    agrees("(1..3)", [](int k) { return k > 1 && k < 3; });
}

namespace {

Vocabulary agatha_vocab() {
    return cdmn::testing::vocabulary_of(corpus::read_file(cdmn::testing::corpus_path("who_killed_agatha")));
}

}  // namespace

// Variable mapping: which logic variable a header name stands for.

TEST(VariableMapping, BareTypeIntroducesTypeNamedVariable) {
    Vocabulary v = agatha_vocab();
    VarScope scope;
    HeaderExpr h = parse_header("Person", v, scope, ColumnRole::Input);
    ASSERT_TRUE(h.introduced);
    EXPECT_EQ(h.introduced->name, "x_Person");
    EXPECT_EQ(term_of(h)->kind, TermNode::Kind::Variable);
}

TEST(VariableMapping, CalledIntroducesNamedVariable) {
    Vocabulary v = agatha_vocab();
    VarScope scope;
    HeaderExpr h = parse_header("Person called p", v, scope, ColumnRole::Input);
    EXPECT_EQ(h.introduced->name, "p");
    EXPECT_EQ(h.introduced->sort, *v.find_sort("Person"));
}

TEST(VariableMapping, LaterMentionsReuseTheVariable) {
    Vocabulary v = agatha_vocab();
    VarScope scope;
    Variable x = *parse_header("Person", v, scope, ColumnRole::Input).introduced;
    Variable p = *parse_header("Person called p", v, scope, ColumnRole::Input).introduced;
    EXPECT_FALSE(x == p);
    HeaderExpr by_type = parse_header("Hatees of Person", v, scope, ColumnRole::Output);
    EXPECT_EQ(by_type.expr->args[0]->var, x);
    HeaderExpr by_name = parse_header("Hatees of p", v, scope, ColumnRole::Output);
    EXPECT_EQ(by_name.expr->args[0]->var, p);
    EXPECT_EQ(parse_header("p", v, scope, ColumnRole::Input).expr->var, p);
}

// Term mapping: what term a header or cell expression becomes.

TEST(TermMapping, NumberLiteral) {
    Vocabulary v = agatha_vocab();
    Term t = term_of(*parse_expression("3", v, VarScope{}));
    EXPECT_EQ(t->kind, TermNode::Kind::Value);
    EXPECT_EQ(t->value, Value(3));
}

TEST(TermMapping, DomainElementConstant) {
    Vocabulary v = agatha_vocab();
    Term t = term_of(*parse_expression("Butler", v, VarScope{}));
    EXPECT_EQ(t->kind, TermNode::Kind::Value);
    EXPECT_EQ(t->value, Value::atom("Butler"));
    EXPECT_EQ(t->sort, *v.find_sort("Person"));
}

TEST(TermMapping, DeclaredConstant) {
    Vocabulary v = agatha_vocab();
    Term t = term_of(*parse_expression("Killer", v, VarScope{}));
    EXPECT_EQ(t->kind, TermNode::Kind::Apply);
    EXPECT_EQ(t->symbol, *v.find_nullary("Killer"));
    EXPECT_TRUE(t->args.empty());
}

TEST(TermMapping, VariableIsItself) {
    Vocabulary v = agatha_vocab();
    VarScope scope;
    HeaderExpr h = parse_header("Person called p", v, scope, ColumnRole::Input);
    Term t = term_of(*parse_expression("p", v, scope));
    EXPECT_EQ(t->kind, TermNode::Kind::Variable);
    EXPECT_EQ(t->var, *h.introduced);
}

TEST(TermMapping, ApplicationMapsArguments) {
    Vocabulary v = agatha_vocab();
    VarScope scope;
    parse_header("Person called p", v, scope, ColumnRole::Input);
    Term t = term_of(parse_header("p hates Agatha", v, scope, ColumnRole::Input));
    EXPECT_EQ(to_string(t, v), "hates(p, Agatha)");
    EXPECT_EQ(t->sort, Vocabulary::kBool);
}

TEST(TermMapping, ArithmeticMapsBothSides) {
    Vocabulary v = cdmn::testing::vocabulary_of(corpus::read_file(cdmn::testing::corpus_path("burger")));
    VarScope scope;
    parse_header("Ingredient called i", v, scope, ColumnRole::Input);
    Term t = term_of(parse_header("Quantity of i * Sodium of i", v, scope, ColumnRole::Output));
    EXPECT_EQ(to_string(t, v), "(Quantity(i) * Sodium(i))");
}

// Constraint tables: for all introduced variables, each row's inputs imply its outputs.

TEST(ConstraintTableRule, SingleRowWithDashInput) {
    CompiledModel m = cdmn::testing::compile_file(cdmn::testing::fixture_path("hatees_below_three.cdmn"));
    ASSERT_EQ(m.theory.formulas.size(), 1u);
    EXPECT_EQ(to_string(m.theory.formulas[0].formula, *m.vocab), "!x_Person[Person]: ((true => Hatees(x_Person) < 3))");
}

TEST(ConstraintTableRule, ImplicationPerRowConjoined) {
    CompiledModel m = compile_source(
        "type: T\nName | Type | Values\nN | int | [0..3]\n\nconstant: C\nName | Type\nA | N\nB | N\n\n"
        "table: Two rows\nE* | A || B\n1 | < 2 || 0\n2 | >= 2 || 3\n");
    EXPECT_EQ(to_string(m.theory.formulas[0].formula, *m.vocab), "((A < 2 => B = 0) & (A >= 2 => B = 3))");
}

TEST(ConstraintTableRule, TwoIntroducedVariables) {
    CompiledModel m = cdmn::testing::compile_file(cdmn::testing::fixture_path("map_one_way.cdmn"));
    EXPECT_EQ(to_string(m.theory.formulas[0].formula, *m.vocab),
              "!c1[Country], c2[Country]: ((are_Bordering(c1, c2) => Color(c1) ~= Color(c2)))");
}

TEST(ConstraintTableRule, NoRowsIsTrue) {
    CompiledModel m = compile_source(
        "type: T\nName | Type | Values\nN | int | [0..3]\n\nconstant: C\nName | Type\nA | N\n\ntable: Nothing\nE* || A\n");
    ASSERT_EQ(m.theory.formulas.size(), 1u);
    Structure s = m.structure;
    Valuation v;
    EXPECT_TRUE(evaluate_formula(m.theory.formulas[0].formula, Interpretation(s, nullptr, nullptr), v));
}

// Model expansion: the models are exactly the total extensions that satisfy the theory.

TEST(ModelExpansionRule, ModelsAreTheCheckedExtensions) {
    CompiledModel m = compile_source(
        "type: T\nName | Type | Values\nN | int | [0..3]\n\nconstant: C\nName | Type\nA | N\nB | N\n\n"
        "table: Sum rule\nE* || A + B\n1 || 3\n\nexecute\nget all models\n");
    const SymbolId a = *m.vocab->find_nullary("A");
    const SymbolId b = *m.vocab->find_nullary("B");
    std::set<std::pair<int, int>> by_check;
    for (int x = 0; x <= 3; ++x) {
        for (int y = 0; y <= 3; ++y) {
            Assignment cand{{a, {{{}, Value(x)}}}, {b, {{{}, Value(y)}}}};
            if (check_model(m.theory, m.structure, cand).ok) by_check.insert({x, y});
        }
    }
    EXPECT_EQ(by_check, (std::set<std::pair<int, int>>{{0, 3}, {1, 2}, {2, 1}, {3, 0}}));

    std::set<std::pair<int, int>> by_solver;
    for (const auto& model : cdmn::testing::solver_models(m)) {
        by_solver.insert({std::stoi(model.at("A")), std::stoi(model.at("B"))});
    }
    EXPECT_EQ(by_solver, by_check);
}

TEST(ModelExpansionRule, DataFixesStructure) {
    CompiledModel m = cdmn::testing::compile_file(cdmn::testing::fixture_path("map_one_way.cdmn"));
    const SymbolId bordering = *m.vocab->find_symbol("Country and Country are Bordering");
    ASSERT_TRUE(m.structure.is_fixed(bordering));
    std::size_t yes = 0;
    for (const auto& [args, value] : m.structure.fixed.at(bordering)) yes += value.is_yes() ? 1 : 0;
    EXPECT_EQ(yes, 7u);
    EXPECT_EQ(m.structure.unknown, std::vector<SymbolId>{*m.vocab->find_symbol("Color of Country")});
}
