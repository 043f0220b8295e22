#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdmn {

enum class ErrorCode {
    // model format
    UnknownBlockKind,
    ColumnCountMismatch,
    UnknownHitPolicy,
    DuplicateExecuteBlock,
    EmptyTable,
    // glossary
    DuplicateSort,
    DuplicateSymbol,
    UnknownResultSort,
    ValueOutsideBase,
    ZeroSlotRelation,
    AmbiguousSortName,
    EmptyInferredDomain,
    ValueOutsideDomain,
    // expressions
    UnknownName,
    ArityMismatch,
    NonIntroducedVariableUse,
    AmbiguousPhrase,
    DuplicateVariable,
    VariableInOutput,
    MalformedRange,
    EmptyList,
    MalformedExpression,
    SortMismatch,
    // evaluation
    DivisionByZero,
    EmptyAggregate,
    UninterpretedSymbol,
    // table compiler
    NonValueOutput,
    CyclicDefinition,
    MultipleOutputColumns,
    NonNumericOutput,
    InvalidOutputHeader,
    ListInOutputCell,
    ConflictingAssignment,
    PartialFunctionData,
    InvalidDataHeader,
    MalformedExecute,
    NonNumericObjective,
    DoublyDefined,
    NullOutput,
    // grounding / solving
    GroundSizeLimit,
    UnboundedDomain,
    OracleTooLarge,
    Io,
};

std::string_view to_string(ErrorCode code);

/// A located problem report. Line 0 means "no source position".
struct Diagnostic {
    ErrorCode code;
    int line = 0;
    std::string message;

    std::string format(std::string_view source_name = {}) const;
};

/// Thrown by every stage of the pipeline; carries the first diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, int line, std::string message);

    ErrorCode code() const noexcept { return diag_.code; }
    int line() const noexcept { return diag_.line; }
    const Diagnostic& diagnostic() const noexcept { return diag_; }

private:
    Diagnostic diag_;
};

/// Thrown by compile_model when one or more tables failed; holds all of them.
class CompileError : public std::runtime_error {
public:
    explicit CompileError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace cdmn
