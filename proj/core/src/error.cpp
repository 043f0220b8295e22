#include "cdmn/error.hpp"

#include <sstream>

namespace cdmn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownBlockKind: return "UnknownBlockKind";
        case ErrorCode::ColumnCountMismatch: return "ColumnCountMismatch";
        case ErrorCode::UnknownHitPolicy: return "UnknownHitPolicy";
        case ErrorCode::DuplicateExecuteBlock: return "DuplicateExecuteBlock";
        case ErrorCode::EmptyTable: return "EmptyTable";
        case ErrorCode::DuplicateSort: return "DuplicateSort";
        case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
        case ErrorCode::UnknownResultSort: return "UnknownResultSort";
        case ErrorCode::ValueOutsideBase: return "ValueOutsideBase";
        case ErrorCode::ZeroSlotRelation: return "ZeroSlotRelation";
        case ErrorCode::AmbiguousSortName: return "AmbiguousSortName";
        case ErrorCode::EmptyInferredDomain: return "EmptyInferredDomain";
        case ErrorCode::ValueOutsideDomain: return "ValueOutsideDomain";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::NonIntroducedVariableUse: return "NonIntroducedVariableUse";
        case ErrorCode::AmbiguousPhrase: return "AmbiguousPhrase";
        case ErrorCode::DuplicateVariable: return "DuplicateVariable";
        case ErrorCode::VariableInOutput: return "VariableInOutput";
        case ErrorCode::MalformedRange: return "MalformedRange";
        case ErrorCode::EmptyList: return "EmptyList";
        case ErrorCode::MalformedExpression: return "MalformedExpression";
        case ErrorCode::SortMismatch: return "SortMismatch";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::EmptyAggregate: return "EmptyAggregate";
        case ErrorCode::UninterpretedSymbol: return "UninterpretedSymbol";
        case ErrorCode::NonValueOutput: return "NonValueOutput";
        case ErrorCode::CyclicDefinition: return "CyclicDefinition";
        case ErrorCode::MultipleOutputColumns: return "MultipleOutputColumns";
        case ErrorCode::NonNumericOutput: return "NonNumericOutput";
        case ErrorCode::InvalidOutputHeader: return "InvalidOutputHeader";
        case ErrorCode::ListInOutputCell: return "ListInOutputCell";
        case ErrorCode::ConflictingAssignment: return "ConflictingAssignment";
        case ErrorCode::PartialFunctionData: return "PartialFunctionData";
        case ErrorCode::InvalidDataHeader: return "InvalidDataHeader";
        case ErrorCode::MalformedExecute: return "MalformedExecute";
        case ErrorCode::NonNumericObjective: return "NonNumericObjective";
        case ErrorCode::DoublyDefined: return "DoublyDefined";
        case ErrorCode::NullOutput: return "NullOutput";
        case ErrorCode::GroundSizeLimit: return "GroundSizeLimit";
        case ErrorCode::UnboundedDomain: return "UnboundedDomain";
        case ErrorCode::OracleTooLarge: return "OracleTooLarge";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

std::string Diagnostic::format(std::string_view source_name) const {
    std::ostringstream out;
    if (!source_name.empty()) out << source_name << ':';
    if (line > 0) out << line << ':';
    if (!source_name.empty() || line > 0) out << ' ';
    out << to_string(code) << ": " << message;
    return out.str();
}

Error::Error(ErrorCode code, int line, std::string message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      diag_{code, line, std::move(message)} {}

namespace {
std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    if (diagnostics.empty()) return "compilation failed";
    std::string text = diagnostics.front().format();
    if (diagnostics.size() > 1) {
        text += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
    }
    return text;
}
}  // namespace

CompileError::CompileError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace cdmn
