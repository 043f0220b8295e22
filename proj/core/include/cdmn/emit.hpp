#pragma once

// Machine-readable and textual renderings of compiled models, ground
// problems and solver results.

#include <string>
#include <vector>

#include "cdmn/compiler.hpp"
#include "cdmn/grounding.hpp"
#include "cdmn/solver.hpp"

namespace cdmn {

/// `functor(a, b)` for an instance, `functor` when nullary.
std::string instance_name(const Vocabulary& vocab, SymbolId symbol, const Tuple& args);

/// Sorted `functor(args) = value` lines for the unknown and derived symbols of a model.
std::vector<std::string> model_lines(const ModelResult& model, const Vocabulary& vocab);

/// JSON document with "theory", "structure" and "task"; adds "ground" when given.
/// Keys are sorted, so equal inputs give byte-identical output.
std::string emit_json(const CompiledModel& model, const GroundProblem* ground = nullptr, int indent = 2);

/// JSON object {"status", "models", "objective"?}. Optimization results list only the best model.
std::string emit_result_json(const SolveResult& result, const Vocabulary& vocab, int indent = 2);

}  // namespace cdmn
