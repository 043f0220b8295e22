#pragma once

// Instantiation of a theory over a finite structure into a variable-free
// constraint DAG. Nodes are hash-consed, so identical subterms (for example a
// definition inlined from many places) are stored once.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdmn/compiler.hpp"
#include "cdmn/logic.hpp"

namespace cdmn {

using NodeId = std::uint32_t;

enum class GKind : std::uint8_t {
    Const,   // value
    Var,     // decision variable `var`
    Arith,   // kids {lhs, rhs}
    Agg,     // kids {cond0, body0, cond1, body1, ...}; value is a folded offset (sum/count)
    Select,  // kids {index, branch_0, ...}; keys[i] selects branch_i
    True,
    False,
    Cmp,  // kids {lhs, rhs}
    Not,
    And,
    Or,
    Implies,
};

struct GroundNode {
    GKind kind = GKind::True;
    SortId sort{};
    Value value;
    std::uint32_t var = 0;
    ArithOp aop = ArithOp::Add;
    CmpOp cop = CmpOp::Eq;
    AggKind agg = AggKind::Sum;
    std::vector<NodeId> kids;
    std::vector<Value> keys;

    bool is_formula() const { return kind >= GKind::True; }
};

struct GroundVar {
    SymbolId symbol{};
    Tuple args;
    std::vector<Value> domain;
};

struct GroundConstraint {
    NodeId node = 0;
    std::size_t origin = 0;  // index into GroundProblem::origins
    std::vector<std::uint32_t> vars;
};

/// Per-table bookkeeping. Definitions get an origin too (for domain-membership constraints).
struct GroundOrigin {
    std::string title;
    HitPolicy policy = HitPolicy::Every;
    bool definition = false;
    std::size_t instantiations = 0;  // before folding
    std::size_t kept = 0;            // after folding, TRUE dropped
    int line = 0;
};

struct GroundOptions {
    std::size_t size_limit = 10'000'000;
};

class GroundProblem {
public:
    const std::vector<GroundNode>& nodes() const { return nodes_; }
    const GroundNode& node(NodeId id) const { return nodes_[id]; }
    const std::vector<GroundVar>& vars() const { return vars_; }
    const std::vector<GroundConstraint>& constraints() const { return constraints_; }
    const std::vector<GroundOrigin>& origins() const { return origins_; }
    const std::optional<NodeId>& objective() const { return objective_; }
    /// Warnings found while folding, e.g. NullOutput.
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
    /// True when some constraint folded to FALSE.
    bool trivially_unsat() const { return trivially_unsat_; }

    const Theory& theory() const { return theory_; }
    const Structure& structure() const { return structure_; }
    const Task& task() const { return task_; }

    /// Ground node of each derived instance that was demanded.
    const std::map<std::pair<SymbolId, Tuple>, NodeId>& derived_nodes() const { return derived_; }

    std::optional<std::uint32_t> var_of(SymbolId symbol, const Tuple& args) const;
    /// Variables reachable from a node, sorted.
    std::vector<std::uint32_t> vars_under(NodeId id) const;

    /// Renders a node as text for emission and debugging.
    std::string to_string(NodeId id) const;

    friend class Grounder;
    friend GroundProblem ground(const Theory&, const Structure&, const Task&, const GroundOptions&);

private:
    std::vector<GroundNode> nodes_;
    std::vector<GroundVar> vars_;
    std::map<std::pair<SymbolId, Tuple>, std::uint32_t> var_index_;
    std::vector<GroundConstraint> constraints_;
    std::vector<GroundOrigin> origins_;
    std::optional<NodeId> objective_;
    std::vector<Diagnostic> diagnostics_;
    bool trivially_unsat_ = false;
    std::map<std::pair<SymbolId, Tuple>, NodeId> derived_;
    Theory theory_;
    Structure structure_;
    Task task_;
};

GroundProblem ground(const Theory& theory, const Structure& structure, const Task& task,
                     const GroundOptions& options = {});

inline GroundProblem ground(const CompiledModel& model, const GroundOptions& options = {}) {
    return ground(model.theory, model.structure, model.task, options);
}

}  // namespace cdmn
