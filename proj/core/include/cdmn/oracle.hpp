#pragma once

// Reference semantics: model checking and exhaustive enumeration. Uses only
// the logic-core evaluator, never the grounder or the search.

#include <optional>
#include <string>
#include <vector>

#include "cdmn/logic.hpp"

namespace cdmn {

struct CheckResult {
    bool ok = true;
    std::vector<std::string> violated;  // table titles, sorted, unique
};

/// S' |= Theory, where S' is `structure` extended by `candidate`.
CheckResult check_model(const Theory& theory, const Structure& structure, const Assignment& candidate);

/// Every total assignment of the unknown symbols that satisfies the theory, in
/// lexicographic search order. Throws OracleTooLarge when the candidate space
/// exceeds `cap`.
std::vector<Assignment> brute_force_models(const Theory& theory, const Structure& structure,
                                           std::size_t cap = 10'000'000);

/// Number of total candidate assignments, saturating at SIZE_MAX.
std::size_t candidate_space(const Structure& structure);

/// Value of a closed numeric term under structure + candidate.
Value evaluate_objective(const Theory& theory, const Structure& structure, const Assignment& candidate,
                         const Term& objective);

}  // namespace cdmn
