#pragma once

// Header expressions and cell entries (the S-FEEL fragment), variable scoping
// for variable-introducing columns, and the cell-to-formula translation.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdmn/glossary.hpp"
#include "cdmn/logic.hpp"

namespace cdmn {

/// Resolved expression: names are already bound to symbols, element constants or variables.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Literal, Variable, Apply, Arith };

    Kind kind = Kind::Number;
    SortId sort{};
    Value value;  // Number / Literal
    Variable var;
    SymbolId symbol{};
    std::vector<ExprPtr> args;  // Apply arguments, or {lhs, rhs} for Arith
    ArithOp op = ArithOp::Add;
};

/// Variables introduced by the columns of one table, in introduction order.
class VarScope {
public:
    explicit VarScope(std::uint32_t first_id = 0) : next_id_(first_id) {}

    const Variable* find(std::string_view name) const;
    /// Adds a binding; throws DuplicateVariable if the name is taken.
    Variable introduce(const std::string& key, const std::string& var_name, SortId sort, int line);

    const std::vector<Variable>& order() const { return order_; }
    std::uint32_t next_id() const { return next_id_; }

private:
    std::map<std::string, Variable, std::less<>> bindings_;
    std::vector<Variable> order_;
    std::uint32_t next_id_;
};

enum class ColumnRole { Input, Output };

struct HeaderExpr {
    enum class Kind {
        BareType,             // `Person`, introduces x_Person
        CalledVar,            // `Country called c1`
        VariableRef,          // a variable introduced by an earlier column
        Constant,             // 0-ary symbol or literal
        FunctionApplication,  // `Hatees of Person`, `c1 and c2 are Bordering`
        Arithmetic,           // `Number of Item * Sodium of Item`
    };

    Kind kind = Kind::Constant;
    ExprPtr expr;
    std::optional<Variable> introduced;

    bool introduces_variable() const { return introduced.has_value(); }
};

struct CellEntry {
    enum class Kind { Any, Comparison, Negation, List, Range, Expression };

    Kind kind = Kind::Any;
    CmpOp op = CmpOp::Eq;        // Comparison
    std::vector<ExprPtr> items;  // Comparison/Expression: 1, Negation: >= 1, List: >= 2, Range: {lo, hi}
    bool lower_inclusive = true;
    bool upper_inclusive = true;
};

/// Parses one column header. Variable-introducing headers extend `scope`.
HeaderExpr parse_header(std::string_view text, const Vocabulary& vocab, VarScope& scope,
                        ColumnRole role, int line = 0);

/// Parses a standalone expression (cells, objectives) against the current scope.
ExprPtr parse_expression(std::string_view text, const Vocabulary& vocab, const VarScope& scope,
                         int line = 0);

CellEntry parse_cell(std::string_view text, const Vocabulary& vocab, const VarScope& scope,
                     int line = 0);

Term term_of(const Expr& expr);
Term term_of(const HeaderExpr& header);

/// Cell entry applied to the column term; throws SortMismatch on ill-typed comparisons.
Formula formula_of_cell(const CellEntry& entry, const Term& column_term, const Vocabulary& vocab,
                        int line = 0);

/// True when both sorts may be compared for equality.
bool sorts_comparable(const Vocabulary& vocab, SortId a, SortId b);
bool is_numeric_sort(const Vocabulary& vocab, SortId s);

/// A data-table column after header parsing.
struct DataColumn {
    ColumnRole role = ColumnRole::Input;
    HeaderExpr header;
    SortId sort{};
    int line = 0;
};

/// Parses the header of a data block; inputs must be variable-introducing or sort columns,
/// outputs must be symbol applications. Throws InvalidDataHeader.
std::vector<DataColumn> parse_data_header(const RawBlock& block, const Vocabulary& vocab);

}  // namespace cdmn
