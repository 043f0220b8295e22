#pragma once

// Translation of parsed tables into theory formulas, definitions, structure
// fragments and the reasoning task.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdmn/expression.hpp"
#include "cdmn/logic.hpp"
#include "cdmn/model_format.hpp"

namespace cdmn {

struct Task {
    enum class Mode { Enumerate, Minimize, Maximize };

    Mode mode = Mode::Enumerate;
    std::size_t count = 1;  // Enumerate; 0 means all models
    Term objective;         // Minimize / Maximize
    std::string objective_text;
    int line = 0;

    bool optimizing() const { return mode != Mode::Enumerate; }
};

struct CompiledTable {
    std::string title;
    HitPolicy policy = HitPolicy::Every;
    std::vector<Variable> vars;  // introduced by input columns
    std::size_t input_count = 0;
    std::size_t output_count = 0;
    std::size_t row_count = 0;
    std::optional<TheoryEntry> entry;      // constraint / decision tables
    std::optional<Definition> definition;  // aggregate tables
    std::set<SymbolId> writes;             // output symbols of decision / aggregate tables
    /// Decision outputs: values the table can assign, per symbol, in first-seen order.
    std::vector<std::pair<SymbolId, std::vector<Value>>> output_values;
    int line = 0;
};

CompiledTable compile_constraint_table(const RawBlock& block, const Vocabulary& vocab);
CompiledTable compile_decision_table(const RawBlock& block, const Vocabulary& vocab);
CompiledTable compile_aggregate_table(const RawBlock& block, const Vocabulary& vocab);
/// Dispatches on the hit policy.
CompiledTable compile_table(const RawBlock& block, const Vocabulary& vocab);

/// Tuples fixed by one data table.
struct DataFragment {
    std::map<SymbolId, SymbolTable> tables;
    std::map<SymbolId, std::map<Tuple, int>> lines;  // where each tuple was set
};

DataFragment compile_data_table(const RawBlock& block, const Vocabulary& vocab);

/// Merges fragments, checks conflicts and function totality, closes relations.
std::map<SymbolId, SymbolTable> merge_data(const std::vector<DataFragment>& fragments,
                                           const Vocabulary& vocab);

/// nullptr means no execute block, i.e. enumerate(1).
Task compile_execute(const RawBlock* block, const Vocabulary& vocab);

struct CompiledModel {
    std::shared_ptr<const Vocabulary> vocab;
    Theory theory;
    Structure structure;
    Task task;
    std::vector<CompiledTable> tables;  // in block order, data tables excluded
};

/// Full pipeline from raw blocks. Throws CompileError listing every problem found.
CompiledModel compile_model(const RawModel& raw);

/// Convenience: parse_model + compile_model.
CompiledModel compile_source(std::string_view source, std::string source_name = "<input>");

}  // namespace cdmn
