#include "cdmn/glossary.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "cdmn/expression.hpp"

namespace cdmn {

// ===========================================================================
// Sort

bool Sort::finite() const {
    switch (domain_kind) {
        case DomainKind::Enumerated:
        case DomainKind::Inferred: return true;
        case DomainKind::Range: return base == BaseType::Int;
        case DomainKind::Unbounded: return false;
    }
    return false;
}

bool Sort::contains(const Value& v) const {
    switch (base) {
        case BaseType::Bool:
            if (!v.is_atom() || (v.name() != "Yes" && v.name() != "No")) return false;
            break;
        case BaseType::String:
            if (!v.is_atom()) return false;
            break;
        case BaseType::Int:
            if (!v.is_number() || !v.number().is_integer()) return false;
            break;
        case BaseType::Float:
            if (!v.is_number()) return false;
            break;
    }
    switch (domain_kind) {
        case DomainKind::Enumerated:
        case DomainKind::Inferred:
            return std::find(values.begin(), values.end(), v) != values.end();
        case DomainKind::Range: return lo <= v.number() && v.number() <= hi;
        case DomainKind::Unbounded: return true;
    }
    return false;
}

std::vector<Value> Sort::elements() const {
    if (domain_kind == DomainKind::Range && base == BaseType::Int) {
        std::vector<Value> out;
        for (std::int64_t i = lo.num(); i <= hi.num(); ++i) out.emplace_back(i);
        return out;
    }
    return values;
}

std::size_t Sort::size() const {
    if (domain_kind == DomainKind::Range && base == BaseType::Int) {
        return static_cast<std::size_t>(hi.num() - lo.num() + 1);
    }
    return values.size();
}

// ===========================================================================
// Vocabulary

Vocabulary::Vocabulary() {
    Sort i;
    i.name = "int";
    i.base = BaseType::Int;
    i.domain_kind = DomainKind::Unbounded;
    i.builtin = true;
    Sort f;
    f.name = "float";
    f.base = BaseType::Float;
    f.domain_kind = DomainKind::Unbounded;
    f.builtin = true;
    Sort b;
    b.name = "bool";
    b.base = BaseType::Bool;
    b.domain_kind = DomainKind::Enumerated;
    b.values = {Value::no(), Value::yes()};
    b.builtin = true;
    sorts_ = {i, f, b};
}

std::optional<SortId> Vocabulary::find_sort(std::string_view name) const {
    auto it = sort_index_.find(name);
    if (it == sort_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<SymbolId> Vocabulary::find_symbol(std::string_view name) const {
    auto it = symbol_index_.find(name);
    if (it == symbol_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<SymbolId> Vocabulary::find_nullary(std::string_view name) const {
    auto id = find_symbol(name);
    if (id && symbol(*id).arity() == 0) return id;
    return std::nullopt;
}

const ElementConstant* Vocabulary::find_element(std::string_view name) const {
    auto it = elements_.find(name);
    return it == elements_.end() ? nullptr : &it->second;
}

SortId Vocabulary::add_sort(Sort sort) {
    if (sort_index_.count(sort.name) || symbol_index_.count(sort.name) ||
        elements_.count(sort.name)) {
        throw Error(ErrorCode::DuplicateSort, sort.line, "type '" + sort.name + "' declared twice");
    }
    SortId id{static_cast<std::uint32_t>(sorts_.size())};
    sort_index_[sort.name] = id;
    sorts_.push_back(std::move(sort));
    return id;
}

namespace {

std::string pattern_key(const std::vector<PatternPart>& pattern) {
    std::string key;
    for (const PatternPart& p : pattern) {
        if (!key.empty()) key += ' ';
        key += p.is_slot ? std::string("\x01") : p.word;
    }
    return key;
}

std::string derive_functor(const SymbolDecl& decl) {
    if (decl.arity() == 0) return decl.name;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < decl.pattern.size(); ++i) {
        const PatternPart& p = decl.pattern[i];
        if (p.is_slot) continue;
        bool between_slots = i > 0 && i + 1 < decl.pattern.size() && decl.pattern[i - 1].is_slot &&
                             decl.pattern[i + 1].is_slot;
        if (p.word == "and" && between_slots) continue;
        if (p.word == "of" && i > 0 && !decl.pattern[i - 1].is_slot) continue;
        words.push_back(p.word);
    }
    std::string out;
    for (const std::string& w : words) out += (out.empty() ? "" : "_") + w;
    return out;
}

}  // namespace

SymbolId Vocabulary::add_symbol(SymbolDecl decl) {
    std::string key = pattern_key(decl.pattern);
    if (pattern_keys_.count(key) || symbol_index_.count(decl.name) || sort_index_.count(decl.name) ||
        elements_.count(decl.name)) {
        throw Error(ErrorCode::DuplicateSymbol, decl.line,
                    "symbol '" + decl.name + "' clashes with an earlier declaration");
    }
    std::string functor = derive_functor(decl);
    bool taken = functor.empty();
    for (const SymbolDecl& other : symbols_) taken = taken || other.functor == functor;
    if (taken) {
        functor.clear();
        for (char c : decl.name) functor += (c == ' ' ? '_' : c);
    }
    decl.functor = functor;
    SymbolId id{static_cast<std::uint32_t>(symbols_.size())};
    pattern_keys_[key] = id;
    symbol_index_[decl.name] = id;
    symbols_.push_back(std::move(decl));
    return id;
}

void Vocabulary::add_element(const std::string& name, SortId sort, int line) {
    if (auto it = elements_.find(name); it != elements_.end()) {
        if (it->second.sort == sort) return;
        throw Error(ErrorCode::DuplicateSymbol, line,
                    "domain element '" + name + "' belongs to both '" +
                        this->sort(it->second.sort).name + "' and '" + this->sort(sort).name + "'");
    }
    if (parse_boolean_literal(name)) {
        throw Error(ErrorCode::DuplicateSymbol, line,
                    "'" + name + "' is a reserved boolean literal and cannot be a domain element");
    }
    if (sort_index_.count(name) || symbol_index_.count(name)) {
        throw Error(ErrorCode::DuplicateSymbol, line,
                    "domain element '" + name + "' clashes with a type or symbol name");
    }
    elements_[name] = ElementConstant{sort, Value::atom(name)};
}

// ===========================================================================
// Helpers

std::optional<Value> parse_basic_value(std::string_view text, const Sort& sort) {
    std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    switch (sort.base) {
        case BaseType::Bool: return parse_boolean_literal(t);
        case BaseType::Int: {
            auto r = Rational::parse(t);
            if (!r || !r->is_integer()) return std::nullopt;
            return Value(*r);
        }
        case BaseType::Float: {
            auto r = Rational::parse(t);
            if (!r) return std::nullopt;
            return Value(*r);
        }
        case BaseType::String: return Value::atom(t);
    }
    return std::nullopt;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(text.substr(start)));
            break;
        }
        out.push_back(trim(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

namespace {

std::vector<std::string> words_of(std::string_view text) {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Columns {
    int name = -1;
    int type = -1;
    int values = -1;
};

Columns locate_columns(const RawBlock& block) {
    Columns c;
    const auto& cells = block.header.inputs;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string h = lower(cells[i]);
        if (h == "name") c.name = static_cast<int>(i);
        if (h == "type") c.type = static_cast<int>(i);
        if (h == "values" || h == "value") c.values = static_cast<int>(i);
    }
    if (c.name < 0) {
        throw Error(ErrorCode::ColumnCountMismatch, block.header.line,
                    "glossary block '" + std::string(to_string(block.kind)) +
                        "' needs a Name column");
    }
    bool needs_type = block.kind == BlockKind::Type || block.kind == BlockKind::Function ||
                      block.kind == BlockKind::Constant;
    if (needs_type && c.type < 0) {
        throw Error(ErrorCode::ColumnCountMismatch, block.header.line,
                    "glossary block '" + std::string(to_string(block.kind)) +
                        "' needs a Type column");
    }
    return c;
}

std::optional<BaseType> parse_base(const std::string& text) {
    std::string t = lower(trim(text));
    if (t == "string") return BaseType::String;
    if (t == "int" || t == "integer") return BaseType::Int;
    if (t == "float" || t == "real") return BaseType::Float;
    return std::nullopt;
}

std::optional<SortId> resolve_result_type(const Vocabulary& vocab, const std::string& text) {
    std::string t = trim(text);
    if (auto id = vocab.find_sort(t)) return id;
    std::string l = lower(t);
    if (l == "int" || l == "integer") return Vocabulary::kInt;
    if (l == "float" || l == "real") return Vocabulary::kFloat;
    if (l == "bool" || l == "boolean") return Vocabulary::kBool;
    return std::nullopt;
}

void parse_type_domain(Sort& sort, const std::string& values_text, int line) {
    std::string v = trim(values_text);
    if (v.empty()) {
        sort.domain_kind = DomainKind::Inferred;
        return;
    }
    if (v.front() == '[' && v.back() == ']' && v.find("..") != std::string::npos) {
        if (!sort.is_numeric()) {
            throw Error(ErrorCode::ValueOutsideBase, line,
                        "range domain given for non-numeric type '" + sort.name + "'");
        }
        std::string inner = v.substr(1, v.size() - 2);
        std::size_t dots = inner.find("..");
        auto lo = Rational::parse(trim(inner.substr(0, dots)));
        auto hi = Rational::parse(trim(inner.substr(dots + 2)));
        if (!lo || !hi || *hi < *lo ||
            (sort.base == BaseType::Int && (!lo->is_integer() || !hi->is_integer()))) {
            throw Error(ErrorCode::ValueOutsideBase, line,
                        "malformed range '" + v + "' for type '" + sort.name + "'");
        }
        sort.domain_kind = DomainKind::Range;
        sort.lo = *lo;
        sort.hi = *hi;
#ifdef CDMN_MUTATE_RANGE_OFF_BY_ONE
        sort.hi = sort.hi - Rational(1);
#endif
        return;
    }
    sort.domain_kind = DomainKind::Enumerated;
    for (const std::string& item : split_list(v)) {
        auto value = parse_basic_value(item, sort);
        if (!value) {
            throw Error(ErrorCode::ValueOutsideBase, line,
                        "value '" + item + "' does not fit base type of '" + sort.name + "'");
        }
        if (std::find(sort.values.begin(), sort.values.end(), *value) == sort.values.end()) {
            sort.values.push_back(*value);
        }
    }
}

// Replaces every occurrence of a declared sort name with a slot, longest match first.
std::vector<PatternPart> compile_pattern(const Vocabulary& vocab, const std::string& name, int line) {
    std::vector<std::string> words = words_of(name);
    std::vector<std::pair<std::vector<std::string>, SortId>> sort_words;
    for (std::size_t s = 3; s < vocab.sorts().size(); ++s) {
        sort_words.emplace_back(words_of(vocab.sorts()[s].name),
                                SortId{static_cast<std::uint32_t>(s)});
    }
    auto match_at = [&](std::size_t pos, std::size_t skip_len) {
        // longest sort name starting at pos, ignoring those of length skip_len or less
        std::size_t best_len = 0;
        SortId best{};
        for (const auto& [sw, id] : sort_words) {
            if (sw.size() <= skip_len || pos + sw.size() > words.size()) continue;
            if (std::equal(sw.begin(), sw.end(), words.begin() + static_cast<long>(pos)) &&
                sw.size() > best_len) {
                best_len = sw.size();
                best = id;
            }
        }
        return std::make_pair(best_len, best);
    };

    std::vector<PatternPart> pattern;
    std::size_t i = 0;
    while (i < words.size()) {
        auto [len, sort] = match_at(i, 0);
        // "Color of Country": a leading type name followed by "of" names the function.
        if (i == 0 && len > 0 && len + 1 < words.size() && words[len] == "of") {
            for (; i < len; ++i) pattern.push_back(PatternPart{false, words[i], SortId{}});
            continue;
        }
        if (len == 0) {
            pattern.push_back(PatternPart{false, words[i], SortId{}});
            ++i;
            continue;
        }
        for (std::size_t k = i + 1; k < i + len; ++k) {
            auto [other_len, other] = match_at(k, 0);
            if (other_len > 0 && k + other_len > i + len) {
                throw Error(ErrorCode::AmbiguousSortName, line,
                            "type names '" + vocab.sort(sort).name + "' and '" +
                                vocab.sort(other).name + "' overlap in '" + name + "'");
            }
        }
        pattern.push_back(PatternPart{true, vocab.sort(sort).name, sort});
        i += len;
    }
    return pattern;
}

std::vector<PatternPart> literal_pattern(const std::string& name) {
    std::vector<PatternPart> pattern;
    for (const std::string& w : words_of(name)) pattern.push_back(PatternPart{false, w, SortId{}});
    return pattern;
}

void add_type_rows(Vocabulary& vocab, const RawBlock& block) {
    Columns c = locate_columns(block);
    for (const RawRow& row : block.rows) {
        Sort sort;
        sort.name = trim(row.inputs.at(static_cast<std::size_t>(c.name)));
        sort.line = row.line;
        auto base = parse_base(row.inputs.at(static_cast<std::size_t>(c.type)));
        if (!base) {
            throw Error(ErrorCode::UnknownResultSort, row.line,
                        "type '" + sort.name + "' has unsupported base '" +
                            row.inputs.at(static_cast<std::size_t>(c.type)) +
                            "' (expected string, int or float)");
        }
        sort.base = *base;
        std::string values = c.values >= 0 ? row.inputs.at(static_cast<std::size_t>(c.values)) : "";
        parse_type_domain(sort, values, row.line);
        SortId id = vocab.add_sort(sort);
        if (sort.base == BaseType::String) {
            for (const Value& v : vocab.sort(id).values) vocab.add_element(v.name(), id, row.line);
        }
    }
}

void add_symbol_rows(Vocabulary& vocab, const RawBlock& block) {
    Columns c = locate_columns(block);
    for (const RawRow& row : block.rows) {
        SymbolDecl decl;
        decl.name = trim(row.inputs.at(static_cast<std::size_t>(c.name)));
        decl.line = row.line;
        switch (block.kind) {
            case BlockKind::Function: decl.kind = SymbolKind::Function; break;
            case BlockKind::Relation: decl.kind = SymbolKind::Relation; break;
            case BlockKind::Constant: decl.kind = SymbolKind::Constant; break;
            default: decl.kind = SymbolKind::Boolean; break;
        }
        if (decl.kind == SymbolKind::Function || decl.kind == SymbolKind::Constant) {
            const std::string& type_text = row.inputs.at(static_cast<std::size_t>(c.type));
            auto result = resolve_result_type(vocab, type_text);
            if (!result) {
                throw Error(ErrorCode::UnknownResultSort, row.line,
                            "'" + decl.name + "' has undeclared type '" + trim(type_text) + "'");
            }
            decl.result_sort = *result;
        } else {
            decl.result_sort = Vocabulary::kBool;
        }
        if (decl.kind == SymbolKind::Function || decl.kind == SymbolKind::Relation) {
            decl.pattern = compile_pattern(vocab, decl.name, row.line);
            for (const PatternPart& p : decl.pattern) {
                if (p.is_slot) decl.arg_sorts.push_back(p.sort);
            }
            if (decl.arg_sorts.empty()) {
                throw Error(ErrorCode::ZeroSlotRelation, row.line,
                            std::string(decl.kind == SymbolKind::Function ? "function" : "relation") +
                                " '" + decl.name + "' mentions no declared type");
            }
        } else {
            decl.pattern = literal_pattern(decl.name);
        }
        vocab.add_symbol(std::move(decl));
    }
}

}  // namespace

Vocabulary build_vocabulary(const std::vector<const RawBlock*>& glossary_blocks) {
    Vocabulary vocab;
    for (const RawBlock* block : glossary_blocks) {
        if (block->kind == BlockKind::Type) add_type_rows(vocab, *block);
    }
    for (const RawBlock* block : glossary_blocks) {
        if (block->kind != BlockKind::Type && is_glossary(block->kind)) add_symbol_rows(vocab, *block);
    }
    return vocab;
}

// ===========================================================================
// Data-driven domains

namespace {

// Calls fn(sort, cell_text, line) for every basic value cell of every data block.
template <typename Fn>
void for_each_data_cell(const Vocabulary& vocab, const std::vector<const RawBlock*>& blocks, Fn fn) {
    for (const RawBlock* block : blocks) {
        std::vector<DataColumn> cols = parse_data_header(*block, vocab);
        const std::size_t n_in = block->header.inputs.size();
        for (const RawRow& row : block->rows) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const std::string& cell = c < n_in ? row.inputs[c] : row.outputs[c - n_in];
                if (cols[c].role == ColumnRole::Input) {
                    for (const std::string& item : split_list(cell)) fn(cols[c].sort, item, row.line);
                } else if (!is_dash_cell(cell) && split_list(cell).size() == 1) {
                    // Dashes and lists in output cells are left to the table compiler.
                    fn(cols[c].sort, trim(cell), row.line);
                }
            }
        }
    }
}

}  // namespace

Vocabulary complete_domains(Vocabulary vocab, const std::vector<const RawBlock*>& data_blocks) {
    std::map<SortId, std::vector<std::pair<Value, int>>> seen;
    for_each_data_cell(vocab, data_blocks, [&](SortId sort, const std::string& text, int line) {
        const Sort& s = vocab.sort(sort);
        if (s.domain_kind != DomainKind::Inferred) return;
        if (auto v = parse_basic_value(text, s)) seen[sort].emplace_back(*v, line);
    });

    std::set<SortId> used;
    for (const SymbolDecl& decl : vocab.symbols()) {
        used.insert(decl.result_sort);
        used.insert(decl.arg_sorts.begin(), decl.arg_sorts.end());
    }

    for (std::size_t i = 3; i < vocab.sorts().size(); ++i) {
        SortId id{static_cast<std::uint32_t>(i)};
        Sort& sort = vocab.sort_mut(id);
        if (sort.domain_kind != DomainKind::Inferred) continue;
        for (const auto& [value, line] : seen[id]) {
            if (std::find(sort.values.begin(), sort.values.end(), value) != sort.values.end()) continue;
            sort.values.push_back(value);
            if (sort.base == BaseType::String) vocab.add_element(value.name(), id, line);
        }
        if (sort.values.empty() && used.count(id)) {
            throw Error(ErrorCode::EmptyInferredDomain, sort.line,
                        "type '" + sort.name +
                            "' lists no values and no data table provides any");
        }
    }
    return vocab;
}

std::vector<Diagnostic> validate_data(const Vocabulary& vocab,
                                      const std::vector<const RawBlock*>& data_blocks) {
    std::vector<Diagnostic> out;
    for_each_data_cell(vocab, data_blocks, [&](SortId sort, const std::string& text, int line) {
        const Sort& s = vocab.sort(sort);
        auto value = parse_basic_value(text, s);
        if (!value || !s.contains(*value)) {
            out.push_back(Diagnostic{ErrorCode::ValueOutsideDomain, line,
                                     "value '" + text + "' is not in the domain of '" + s.name + "'"});
        }
    });
    return out;
}

}  // namespace cdmn
