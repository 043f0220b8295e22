#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdmn/error.hpp"
#include "cdmn/model_format.hpp"
#include "cdmn/value.hpp"

namespace cdmn {

enum class SortId : std::uint32_t {};
enum class SymbolId : std::uint32_t {};

inline std::size_t index(SortId id) { return static_cast<std::size_t>(id); }
inline std::size_t index(SymbolId id) { return static_cast<std::size_t>(id); }

enum class BaseType { Int, Float, String, Bool };

enum class DomainKind {
    Enumerated,  // values listed in the glossary
    Range,       // [lo..hi] in the glossary
    Inferred,    // collected from data tables
    Unbounded,   // builtin int / float
};

struct Sort {
    std::string name;
    BaseType base = BaseType::String;
    DomainKind domain_kind = DomainKind::Enumerated;
    std::vector<Value> values;  // Enumerated / Inferred, in first-seen order
    Rational lo;                // Range only
    Rational hi;
    bool builtin = false;
    int line = 0;

    bool is_numeric() const { return base == BaseType::Int || base == BaseType::Float; }
    /// Listed values or an integer range.
    bool finite() const;
    bool contains(const Value& v) const;
    /// All elements in declaration order. Precondition: finite().
    std::vector<Value> elements() const;
    std::size_t size() const;
};

enum class SymbolKind { Function, Relation, Constant, Boolean };

/// One element of a compiled name phrase: a literal word or a typed argument slot.
struct PatternPart {
    bool is_slot = false;
    std::string word;  // literal text, or the sort name for slots
    SortId sort{};
};

struct SymbolDecl {
    SymbolKind kind = SymbolKind::Constant;
    std::string name;  // phrase as written in the glossary
    std::vector<PatternPart> pattern;
    std::vector<SortId> arg_sorts;
    SortId result_sort{};
    std::string functor;  // identifier used when printing `functor(args)`
    int line = 0;

    std::size_t arity() const { return arg_sorts.size(); }
    bool is_predicate() const { return kind == SymbolKind::Relation || kind == SymbolKind::Boolean; }
};

struct ElementConstant {
    SortId sort{};
    Value value;
};

class Vocabulary {
public:
    static constexpr SortId kInt{0};
    static constexpr SortId kFloat{1};
    static constexpr SortId kBool{2};

    Vocabulary();

    const std::vector<Sort>& sorts() const { return sorts_; }
    const Sort& sort(SortId id) const { return sorts_.at(index(id)); }
    Sort& sort_mut(SortId id) { return sorts_.at(index(id)); }
    std::size_t user_sort_count() const { return sorts_.size() - 3; }
    std::optional<SortId> find_sort(std::string_view name) const;

    const std::vector<SymbolDecl>& symbols() const { return symbols_; }
    const SymbolDecl& symbol(SymbolId id) const { return symbols_.at(index(id)); }
    std::optional<SymbolId> find_symbol(std::string_view name) const;
    /// 0-ary constant or boolean with exactly this name.
    std::optional<SymbolId> find_nullary(std::string_view name) const;

    const std::map<std::string, ElementConstant, std::less<>>& element_constants() const {
        return elements_;
    }
    const ElementConstant* find_element(std::string_view name) const;

    SortId add_sort(Sort sort);
    SymbolId add_symbol(SymbolDecl decl);
    /// Registers the auto-introduced constant for a string domain element.
    void add_element(const std::string& name, SortId sort, int line);

private:
    std::vector<Sort> sorts_;
    std::vector<SymbolDecl> symbols_;
    std::map<std::string, ElementConstant, std::less<>> elements_;
    std::map<std::string, SortId, std::less<>> sort_index_;
    std::map<std::string, SymbolId, std::less<>> symbol_index_;
    std::map<std::string, SymbolId> pattern_keys_;
};

/// Value of a basic data cell under the given sort, or nullopt when the text
/// does not conform to the sort's base type.
std::optional<Value> parse_basic_value(std::string_view text, const Sort& sort);

/// Splits a comma-separated cell into trimmed items.
std::vector<std::string> split_list(std::string_view text);

/// Builds sorts and symbols from Type/Function/Relation/Constant/Boolean blocks.
Vocabulary build_vocabulary(const std::vector<const RawBlock*>& glossary_blocks);

/// Fills every inferred sort with the values seen in data-table columns of that sort.
Vocabulary complete_domains(Vocabulary vocab, const std::vector<const RawBlock*>& data_blocks);

/// One diagnostic per data cell whose value lies outside its column's sort.
std::vector<Diagnostic> validate_data(const Vocabulary& vocab,
                                      const std::vector<const RawBlock*>& data_blocks);

}  // namespace cdmn
