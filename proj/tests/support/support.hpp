#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cdmn/compiler.hpp"
#include "cdmn/grounding.hpp"
#include "cdmn/solver.hpp"
#include "corpus.hpp"

namespace cdmn::testing {

std::string corpus_path(const std::string& name);   // corpus/<name>.cdmn
std::string fixture_path(const std::string& name);  // tests/fixtures/<name>
CompiledModel compile_file(const std::string& path);
CompiledModel compile_corpus(const std::string& name);

/// Vocabulary of a source text: glossary blocks plus domains completed from its data blocks.
Vocabulary vocabulary_of(const std::string& source);

using ModelSet = std::set<corpus::CanonicalModel>;

/// Every model found by ground + solve; `status` receives the solver status.
ModelSet solver_models(const CompiledModel& model, SolveStatus* status = nullptr, double timeout = 0);
ModelSet oracle_models(const CompiledModel& model);

/// Solver against brute force: model-set equality for enumeration tasks, equal
/// optimum (or both infeasible) for optimization tasks.
struct Comparison {
    bool agree = false;
    std::string detail;
};
Comparison compare_with_oracle(const CompiledModel& model);

/// Small random model in the .cdmn format: at most 2 sorts with domains of at
/// most 4 elements, at most 3 tables of at most 3 rows. Same seed, same text.
std::string random_model(std::uint64_t seed, bool optimize);

struct SuiteResult {
    int total = 0;
    int agreed = 0;
    int optimizing = 0;
    std::vector<std::string> failures;  // "seed N: detail"
};
/// Generates `count` models (every other one with an objective) and compares each with the oracle.
SuiteResult run_random_suite(int count, std::uint64_t first_seed);

}  // namespace cdmn::testing
