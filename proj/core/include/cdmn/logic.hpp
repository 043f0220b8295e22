#pragma once

// Typed first-order terms and formulas plus the reference evaluator. Nodes are immutable and shared; building a formula
// never copies its subterms.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdmn/glossary.hpp"
#include "cdmn/model_format.hpp"
#include "cdmn/value.hpp"

namespace cdmn {

struct Variable {
    std::uint32_t id = 0;
    std::string name;
    SortId sort{};

    friend bool operator==(const Variable& a, const Variable& b) { return a.id == b.id; }
    friend bool operator<(const Variable& a, const Variable& b) { return a.id < b.id; }
};

enum class ArithOp { Add, Sub, Mul, Div };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class AggKind { Sum, Count, Min, Max };

std::string_view to_string(ArithOp op);
std::string_view to_string(CmpOp op);
std::string_view to_string(AggKind kind);
CmpOp negate(CmpOp op);
bool compare_values(CmpOp op, const Value& a, const Value& b);
/// Exact arithmetic. Throws DivisionByZero, or SortMismatch for a non-integral
/// quotient when the result sort is integer.
Value apply_arith(ArithOp op, const Value& a, const Value& b, const Sort& result_sort);

struct TermNode;
struct FormulaNode;
using Term = std::shared_ptr<const TermNode>;
using Formula = std::shared_ptr<const FormulaNode>;

/// One selection of an aggregate: tuples satisfying `condition` contribute `body`.
struct AggBranch {
    Formula condition;
    Term body;
};

struct TermNode {
    enum class Kind { Variable, Value, Apply, Arith, Aggregate };

    Kind kind = Kind::Value;
    SortId sort{};
    Variable var;
    Value value;
    SymbolId symbol{};
    std::vector<Term> args;  // Apply arguments, or {lhs, rhs} for Arith
    ArithOp op = ArithOp::Add;
    AggKind agg = AggKind::Sum;
    std::vector<Variable> bound;
    std::vector<AggBranch> branches;
};

struct FormulaNode {
    enum class Kind { True, False, Compare, Atom, Not, And, Or, Implies, Forall };

    Kind kind = Kind::True;
    CmpOp op = CmpOp::Eq;
    std::vector<Term> terms;  // Compare: {lhs, rhs}; Atom: arguments
    SymbolId symbol{};        // Atom
    std::vector<Formula> children;
    std::vector<Variable> vars;  // Forall
};

// ---------------------------------------------------------------------------
// Construction

Term make_variable(const Variable& v);
Term make_value(Value v, SortId sort);
Term make_apply(SymbolId symbol, std::vector<Term> args, SortId result_sort);
Term make_arith(ArithOp op, Term lhs, Term rhs, SortId sort);
Term make_aggregate(AggKind kind, std::vector<Variable> bound, std::vector<AggBranch> branches,
                    SortId sort);

Formula make_true();
Formula make_false();
Formula make_compare(CmpOp op, Term lhs, Term rhs);
/// relation-atom r(args), i.e. r(args) = Yes.
Formula make_atom(SymbolId relation, std::vector<Term> args);
Formula make_not(Formula f);
Formula make_and(std::vector<Formula> fs);
Formula make_or(std::vector<Formula> fs);
Formula make_implies(Formula antecedent, Formula consequent);
Formula make_forall(std::vector<Variable> vars, Formula body);

// ---------------------------------------------------------------------------
// Theories and structures

using Tuple = std::vector<Value>;
using SymbolTable = std::map<Tuple, Value>;
/// Candidate interpretation of the unknown symbols.
using Assignment = std::map<SymbolId, SymbolTable>;

struct TheoryEntry {
    Formula formula;
    std::string title;
    HitPolicy policy = HitPolicy::Every;
    int line = 0;
    /// Decision tables: index of the "no row matches" conjunct inside the quantified body.
    std::optional<std::size_t> coverage_part;
};

/// Functional definition produced by an aggregate table:
/// symbol(params) = body for every tuple of params.
struct Definition {
    SymbolId symbol{};
    std::vector<Variable> params;
    Term body;
    std::string title;
    int line = 0;
};

struct Theory {
    std::vector<TheoryEntry> formulas;
    std::vector<Definition> definitions;
};

struct Structure {
    std::shared_ptr<const Vocabulary> vocab;
    std::map<SymbolId, SymbolTable> fixed;
    std::vector<SymbolId> unknown;  // searched by the solver, in declaration order
    std::vector<SymbolId> derived;  // computed from definitions
    /// Finite value sets for unknown symbols whose result sort is unbounded.
    std::map<SymbolId, std::vector<Value>> value_domains;

    /// Possible values of an unknown symbol instance. Throws UnboundedDomain.
    std::vector<Value> result_domain(SymbolId symbol) const;
    /// Every argument tuple of a symbol, in lexicographic domain order.
    std::vector<Tuple> instances(SymbolId symbol) const;
    bool is_fixed(SymbolId s) const { return fixed.count(s) != 0; }
};

/// Elements of a sort; throws UnboundedDomain for infinite sorts.
std::vector<Value> domain_of(const Vocabulary& vocab, SortId sort);

// ---------------------------------------------------------------------------
// Evaluation

class Valuation {
public:
    void set(const Variable& v, Value value);
    void erase(const Variable& v);
    const Value* get(const Variable& v) const;

private:
    std::vector<std::optional<Value>> slots_;
};

/// Structure plus candidate plus definitions: everything needed to evaluate closed formulas.
class Interpretation {
public:
    Interpretation(const Structure& structure, const Assignment* candidate,
                   const std::vector<Definition>* definitions);

    /// Value of symbol(args). Throws UninterpretedSymbol if nothing defines it.
    Value lookup(SymbolId symbol, const Tuple& args) const;
    const Structure& structure() const { return structure_; }

private:
    const Structure& structure_;
    const Assignment* candidate_;
    std::map<SymbolId, const Definition*> definitions_;
    mutable std::set<std::pair<SymbolId, Tuple>> in_progress_;
};

Value evaluate_term(const Term& t, const Interpretation& interp, Valuation& v);
bool evaluate_formula(const Formula& f, const Interpretation& interp, Valuation& v);

// ---------------------------------------------------------------------------
// Inspection

std::set<Variable> free_variables(const Formula& f);
std::set<Variable> free_variables(const Term& t);
/// Symbols occurring in the formula (not expanding definitions).
std::set<SymbolId> symbols_of(const Formula& f);
std::set<SymbolId> symbols_of(const Term& t);

/// Deterministic, fully parenthesized rendering.
std::string to_string(const Term& t, const Vocabulary& vocab);
std::string to_string(const Formula& f, const Vocabulary& vocab);

}  // namespace cdmn
