#pragma once

// Reader and printer for the plain-text .cdmn model format.
//
//   # comment
//   type: Glossary
//   Name | Type | Values
//   Person | string | Agatha, Butler, Charles
//
//   table: Adult
//   U | Age of Person || Person is Adult
//   1 | >= 18 || Yes
//   2 | < 18  || No
//
//   execute
//   get 10 models
//
// Blocks are separated by blank lines. Cells are separated by `|`, the
// input/output boundary by `||`. A leading integer cell on a body row is a row
// number and is dropped.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdmn {

enum class BlockKind { Type, Function, Relation, Constant, Boolean, Table, Data, Execute };

enum class HitPolicy { Unique, Any, First, Sum, Count, Min, Max, Every };

std::string_view to_string(BlockKind kind);
std::string_view to_string(HitPolicy policy);
std::optional<HitPolicy> parse_hit_policy(std::string_view code);

bool is_glossary(BlockKind kind);
bool is_aggregate(HitPolicy policy);

struct RawRow {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    int line = 0;
};

struct RawBlock {
    BlockKind kind = BlockKind::Table;
    std::string title;
    RawRow header;  // for tables the hit-policy cell is removed from header.inputs
    std::vector<RawRow> rows;
    std::optional<HitPolicy> hit_policy;
    int first_line = 0;
    int last_line = 0;
};

struct RawModel {
    std::vector<RawBlock> blocks;
    std::string source_name;
};

/// Throws cdmn::Error (UnknownBlockKind, ColumnCountMismatch, UnknownHitPolicy,
/// DuplicateExecuteBlock, EmptyTable) with the offending source line.
RawModel parse_model(std::string_view source, std::string source_name = "<input>");

/// Canonical text form; parse_model(print_model(m)) is structurally equal to m.
std::string print_model(const RawModel& model);

/// Equality of block structure and cell text, ignoring line numbers.
bool structurally_equal(const RawModel& a, const RawModel& b);

/// True for cells consisting of one or more dashes (the "irrelevant" marker) or empty.
bool is_dash_cell(std::string_view cell);

std::string trim(std::string_view text);

}  // namespace cdmn
