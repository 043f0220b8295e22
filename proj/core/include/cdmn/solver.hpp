#pragma once

// Backtracking search over a GroundProblem. Constraints with one open variable
// prune by forward checking; optimization adds branch-and-bound.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "cdmn/grounding.hpp"

namespace cdmn {

enum class SolveStatus { Sat, Unsat, Optimum, Limit };

std::string_view to_string(SolveStatus status);

struct ModelResult {
    Assignment assignments;  // unknown symbols only
    std::map<SymbolId, SymbolTable> derived;
    std::optional<Value> objective;
    SolveStatus status = SolveStatus::Sat;
};

struct SolveOptions {
    /// Overrides the task's model count for enumeration; 0 means all models.
    std::optional<std::size_t> max_models;
    /// Wall-clock budget in seconds; 0 disables the limit.
    double timeout_seconds = 0;
    /// Re-check every emitted model against the theory with the reference evaluator.
    bool verify = true;
};

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t failures = 0;
    std::uint64_t prunings = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsat;
    /// Enumeration: the models in search order. Optimization: every incumbent, best last.
    std::vector<ModelResult> models;
    std::optional<Value> objective;
    SolveStats stats;
};

/// Receives each model (or incumbent) as soon as it is found. Returning false stops the search.
using ModelCallback = std::function<bool(const ModelResult&)>;

SolveResult solve(const GroundProblem& problem, const SolveOptions& options = {},
                  const ModelCallback& on_model = {});

}  // namespace cdmn
