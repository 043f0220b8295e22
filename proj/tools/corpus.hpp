#pragma once

// Bundled corpus: each `<name>.cdmn` model has a `<name>.expected.json`
// recording what a correct solver must report for it.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdmn/compiler.hpp"
#include "cdmn/solver.hpp"

namespace cdmn::corpus {

/// Unknown-symbol instances rendered as text: `functor(args)` -> value.
using CanonicalModel = std::map<std::string, std::string>;

CanonicalModel canonical(const Assignment& assignment, const Vocabulary& vocab);

struct Expectation {
    enum class Kind {
        Models,   // exact model set (empty set: UNSAT)
        Optimum,  // proven optimum value
        Bound,    // too large for the oracle: any verified incumbent at or below `objective`
    };
    Kind kind = Kind::Models;
    std::set<CanonicalModel> models;
    std::optional<std::string> objective;
    double timeout = 30;
    std::string note;
};

Expectation load_expectation(const std::filesystem::path& path);
void save_expectation(const std::filesystem::path& path, const Expectation& e);

/// Brute-force expectation for a model. Throws OracleTooLarge for big instances.
Expectation oracle_expectation(const CompiledModel& model);

struct EntryResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

EntryResult run_entry(const std::filesystem::path& model_path, const Expectation& expected);

/// Sorted `*.cdmn` files. Throws Error(Io) when the directory is missing or has none.
std::vector<std::filesystem::path> list_models(const std::filesystem::path& dir);

std::filesystem::path expectation_path(const std::filesystem::path& model_path);

/// Reads a whole file. Throws Error(Io).
std::string read_file(const std::filesystem::path& path);

}  // namespace cdmn::corpus
