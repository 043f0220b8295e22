#include "cdmn/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cdmn {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Column {
    HeaderExpr header;
    Term term;
};

std::vector<Column> parse_inputs(const RawBlock& block, const Vocabulary& vocab, VarScope& scope) {
    std::vector<Column> cols;
    for (const std::string& text : block.header.inputs) {
        HeaderExpr h = parse_header(text, vocab, scope, ColumnRole::Input, block.header.line);
        cols.push_back(Column{h, term_of(h)});
    }
    return cols;
}

// Conjunction of the input cells of one row. Returns the parts, not yet joined.
std::vector<Formula> input_parts(const RawRow& row, const std::vector<Column>& cols,
                                 const Vocabulary& vocab, const VarScope& scope) {
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        CellEntry cell = parse_cell(row.inputs[j], vocab, scope, row.line);
        if (cell.kind == CellEntry::Kind::Any) continue;
        parts.push_back(formula_of_cell(cell, cols[j].term, vocab, row.line));
    }
    return parts;
}

Formula conjunction(std::vector<Formula> parts) {
    if (parts.empty()) return make_true();
    if (parts.size() == 1) return parts.front();
    return make_and(std::move(parts));
}

Formula close(const VarScope& scope, Formula body) {
    if (scope.order().empty()) return body;
    return make_forall(scope.order(), std::move(body));
}

std::vector<Variable> variables_of(const std::vector<Column>& cols) {
    std::vector<Variable> out;
    for (const Column& c : cols) {
        if (c.header.introduced) out.push_back(*c.header.introduced);
    }
    return out;
}

CompiledTable table_shell(const RawBlock& block) {
    CompiledTable t;
    t.title = block.title;
    t.policy = block.hit_policy.value_or(HitPolicy::Every);
    t.input_count = block.header.inputs.size();
    t.output_count = block.header.outputs.size();
    t.row_count = block.rows.size();
    t.line = block.header.line;
    return t;
}

// Symbol written by an output header: the header must be a symbol application.
SymbolId output_symbol(const HeaderExpr& h, const std::string& text, int line) {
    if (h.expr->kind != Expr::Kind::Apply) {
        throw Error(ErrorCode::InvalidOutputHeader, line,
                    "output column '" + text + "' must name a function, relation or constant");
    }
    return h.expr->symbol;
}

void reject_self_reference(const std::set<SymbolId>& read, const std::set<SymbolId>& written,
                           const Vocabulary& vocab, const std::string& title, int line) {
    for (SymbolId s : written) {
        if (read.count(s)) {
            throw Error(ErrorCode::CyclicDefinition, line,
                        "table '" + title + "' reads its own output '" + vocab.symbol(s).name + "'");
        }
    }
}

}  // namespace

// ===========================================================================
// Constraint tables

CompiledTable compile_constraint_table(const RawBlock& block, const Vocabulary& vocab) {
    CompiledTable t = table_shell(block);
    VarScope scope;
    std::vector<Column> inputs = parse_inputs(block, vocab, scope);
    std::vector<Column> outputs;
    for (const std::string& text : block.header.outputs) {
        HeaderExpr h = parse_header(text, vocab, scope, ColumnRole::Output, block.header.line);
        outputs.push_back(Column{h, term_of(h)});
    }
    t.vars = variables_of(inputs);

    std::vector<Formula> rows;
    for (const RawRow& row : block.rows) {
        Formula antecedent = conjunction(input_parts(row, inputs, vocab, scope));
        std::vector<Formula> consequents;
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            CellEntry cell = parse_cell(row.outputs[k], vocab, scope, row.line);
            if (cell.kind == CellEntry::Kind::Any) continue;
            consequents.push_back(formula_of_cell(cell, outputs[k].term, vocab, row.line));
        }
        rows.push_back(make_implies(antecedent, conjunction(std::move(consequents))));
    }
    TheoryEntry entry;
    entry.title = block.title;
    entry.policy = HitPolicy::Every;
    entry.line = block.header.line;
    entry.formula = rows.empty() ? make_true() : close(scope, make_and(std::move(rows)));
    t.entry = entry;
    return t;
}

// ===========================================================================
// Decision tables

CompiledTable compile_decision_table(const RawBlock& block, const Vocabulary& vocab) {
    CompiledTable t = table_shell(block);
    const HitPolicy policy = t.policy;
    const int line = block.header.line;
    VarScope scope;
    std::vector<Column> inputs = parse_inputs(block, vocab, scope);
    t.vars = variables_of(inputs);

    struct Output {
        Column column;
        SymbolId symbol{};
        std::optional<ExprPtr> default_value;
    };
    std::vector<Output> outputs;
    for (const std::string& raw_text : block.header.outputs) {
        std::string text = raw_text;
        std::optional<std::string> default_text;
        std::string low = lower(text);
        if (std::size_t at = low.rfind(" default "); at != std::string::npos) {
            default_text = trim(text.substr(at + 9));
            text = trim(text.substr(0, at));
        }
        HeaderExpr h = parse_header(text, vocab, scope, ColumnRole::Output, line);
        Output out{Column{h, term_of(h)}, output_symbol(h, text, line), std::nullopt};
        if (default_text) {
            CellEntry d = parse_cell(*default_text, vocab, scope, line);
            if (d.kind != CellEntry::Kind::Expression || d.items[0]->kind == Expr::Kind::Apply ||
                d.items[0]->kind == Expr::Kind::Variable || d.items[0]->kind == Expr::Kind::Arith) {
                throw Error(ErrorCode::NonValueOutput, line,
                            "default of '" + text + "' must be a single value");
            }
            out.default_value = d.items[0];
        }
        t.writes.insert(out.symbol);
        outputs.push_back(std::move(out));
    }

    // Self-reference check: output symbols may not occur in input headers or cells.
    std::set<SymbolId> read;
    for (const Column& c : inputs) {
        auto s = symbols_of(c.term);
        read.insert(s.begin(), s.end());
    }

    std::vector<Formula> matches;       // M_i
    std::vector<Formula> raw_inputs;    // inputs_i before the F adjustment
    std::vector<Formula> consequents;   // outputs_i
    std::vector<std::vector<std::string>> output_keys;
    std::vector<std::vector<Value>> seen_values(outputs.size());
    for (const RawRow& row : block.rows) {
        std::vector<Formula> parts = input_parts(row, inputs, vocab, scope);
        for (const Formula& p : parts) {
            auto s = symbols_of(p);
            read.insert(s.begin(), s.end());
        }
        Formula in = conjunction(std::move(parts));
        Formula m = in;
        if (policy == HitPolicy::First && !raw_inputs.empty()) {
            std::vector<Formula> guarded{in};
            for (const Formula& earlier : raw_inputs) guarded.push_back(make_not(earlier));
            m = make_and(std::move(guarded));
        }
        raw_inputs.push_back(in);
        matches.push_back(m);

        std::vector<Formula> outs;
        std::vector<std::string> keys;
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            const std::string& text = row.outputs[k];
            CellEntry cell = parse_cell(text, vocab, scope, row.line);
            if (cell.kind == CellEntry::Kind::Any) {
                keys.emplace_back("-");
                continue;
            }
            bool single_value = (cell.kind == CellEntry::Kind::Expression ||
                                 (cell.kind == CellEntry::Kind::Comparison && cell.op == CmpOp::Eq)) &&
                                (cell.items[0]->kind == Expr::Kind::Number ||
                                 cell.items[0]->kind == Expr::Kind::Literal);
            if (!single_value) {
                throw Error(ErrorCode::NonValueOutput, row.line,
                            "decision output cell '" + trim(text) + "' must be a single value");
            }
            const Value& v = cell.items[0]->value;
            const Sort& out_sort = vocab.sort(outputs[k].column.term->sort);
            if (out_sort.finite() && !out_sort.contains(v)) {
                throw Error(ErrorCode::ValueOutsideDomain, row.line,
                            "output value '" + v.to_string() + "' is not in the domain of '" +
                                out_sort.name + "'");
            }
            if (std::find(seen_values[k].begin(), seen_values[k].end(), v) == seen_values[k].end()) {
                seen_values[k].push_back(v);
            }
            keys.push_back(v.to_string());
            outs.push_back(formula_of_cell(cell, outputs[k].column.term, vocab, row.line));
        }
        consequents.push_back(conjunction(std::move(outs)));
        output_keys.push_back(std::move(keys));
    }
    reject_self_reference(read, t.writes, vocab, block.title, line);

    std::vector<Formula> parts;
    for (std::size_t i = 0; i < matches.size(); ++i) parts.push_back(make_implies(matches[i], consequents[i]));

    // No row matches: default or infeasible.
    Formula none = matches.empty() ? make_true() : make_not(matches.size() == 1 ? matches[0] : make_or(matches));
    bool all_defaults = !outputs.empty() &&
                        std::all_of(outputs.begin(), outputs.end(),
                                    [](const Output& o) { return o.default_value.has_value(); });
    std::size_t coverage_part = parts.size();
    if (all_defaults) {
        std::vector<Formula> defaults;
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            CellEntry d;
            d.kind = CellEntry::Kind::Expression;
            d.items = {*outputs[k].default_value};
            defaults.push_back(formula_of_cell(d, outputs[k].column.term, vocab, line));
            const Value& v = (*outputs[k].default_value)->value;
            if (std::find(seen_values[k].begin(), seen_values[k].end(), v) == seen_values[k].end()) {
                seen_values[k].push_back(v);
            }
        }
        parts.push_back(make_implies(none, conjunction(std::move(defaults))));
    } else {
        parts.push_back(make_implies(none, make_false()));
    }

    if (policy == HitPolicy::Unique || policy == HitPolicy::Any) {
        for (std::size_t i = 0; i < matches.size(); ++i) {
            for (std::size_t j = i + 1; j < matches.size(); ++j) {
                if (policy == HitPolicy::Any && output_keys[i] == output_keys[j]) continue;
                parts.push_back(make_not(make_and({matches[i], matches[j]})));
            }
        }
    }

    for (std::size_t k = 0; k < outputs.size(); ++k) {
        t.output_values.emplace_back(outputs[k].symbol, seen_values[k]);
    }

    TheoryEntry entry;
    entry.title = block.title;
    entry.policy = policy;
    entry.line = line;
    entry.coverage_part = coverage_part;
    entry.formula = close(scope, make_and(std::move(parts)));
    t.entry = entry;
    return t;
}

// ===========================================================================
// Aggregate tables

CompiledTable compile_aggregate_table(const RawBlock& block, const Vocabulary& vocab) {
    CompiledTable t = table_shell(block);
    const int line = block.header.line;
    if (block.header.outputs.size() != 1) {
        throw Error(ErrorCode::MultipleOutputColumns, line,
                    "aggregate table '" + block.title + "' needs exactly one output column, has " +
                        std::to_string(block.header.outputs.size()));
    }
    VarScope scope;
    std::vector<Column> inputs = parse_inputs(block, vocab, scope);
    t.vars = variables_of(inputs);

    const std::string& out_text = block.header.outputs[0];
    HeaderExpr h = parse_header(out_text, vocab, scope, ColumnRole::Output, line);
    SymbolId symbol = output_symbol(h, out_text, line);
    const SymbolDecl& decl = vocab.symbol(symbol);
    if (!is_numeric_sort(vocab, decl.result_sort)) {
        throw Error(ErrorCode::NonNumericOutput, line,
                    "aggregate output '" + out_text + "' is not numeric");
    }
    std::vector<Variable> params;
    for (const ExprPtr& arg : h.expr->args) {
        bool fresh = arg->kind == Expr::Kind::Variable &&
                     std::find(params.begin(), params.end(), arg->var) == params.end();
        if (!fresh) {
            throw Error(ErrorCode::InvalidOutputHeader, line,
                        "aggregate output '" + out_text + "' must apply its symbol to distinct variables");
        }
        params.push_back(arg->var);
    }
    std::vector<Variable> bound;
    for (const Variable& v : scope.order()) {
        if (std::find(params.begin(), params.end(), v) == params.end()) bound.push_back(v);
    }
    t.writes.insert(symbol);

    AggKind kind = AggKind::Sum;
    switch (t.policy) {
        case HitPolicy::Count: kind = AggKind::Count; break;
        case HitPolicy::Min: kind = AggKind::Min; break;
        case HitPolicy::Max: kind = AggKind::Max; break;
        default: kind = AggKind::Sum; break;
    }

    std::set<SymbolId> read;
    for (const Column& c : inputs) {
        auto s = symbols_of(c.term);
        read.insert(s.begin(), s.end());
    }
    std::vector<AggBranch> branches;
    for (const RawRow& row : block.rows) {
        Formula condition = conjunction(input_parts(row, inputs, vocab, scope));
        auto s = symbols_of(condition);
        read.insert(s.begin(), s.end());
        Term body;
        if (kind == AggKind::Count) {
            body = make_value(Value(1), Vocabulary::kInt);
        } else {
            CellEntry cell = parse_cell(row.outputs[0], vocab, scope, row.line);
            bool single = cell.kind == CellEntry::Kind::Expression ||
                          (cell.kind == CellEntry::Kind::Comparison && cell.op == CmpOp::Eq);
            if (!single || !is_numeric_sort(vocab, cell.items[0]->sort)) {
                throw Error(ErrorCode::NonNumericOutput, row.line,
                            "aggregate cell '" + trim(row.outputs[0]) + "' is not a numeric expression");
            }
            body = term_of(*cell.items[0]);
            auto b = symbols_of(body);
            read.insert(b.begin(), b.end());
        }
        branches.push_back(AggBranch{condition, body});
    }
    reject_self_reference(read, t.writes, vocab, block.title, line);

    Definition def;
    def.symbol = symbol;
    def.params = params;
    def.body = make_aggregate(kind, bound, std::move(branches), decl.result_sort);
    def.title = block.title;
    def.line = line;
    t.definition = def;
    return t;
}

CompiledTable compile_table(const RawBlock& block, const Vocabulary& vocab) {
    switch (block.hit_policy.value_or(HitPolicy::Every)) {
        case HitPolicy::Every: return compile_constraint_table(block, vocab);
        case HitPolicy::Unique:
        case HitPolicy::Any:
        case HitPolicy::First: return compile_decision_table(block, vocab);
        default: return compile_aggregate_table(block, vocab);
    }
}

// ===========================================================================
// Data tables

DataFragment compile_data_table(const RawBlock& block, const Vocabulary& vocab) {
    std::vector<DataColumn> cols = parse_data_header(block, vocab);
    const std::size_t n_in = block.header.inputs.size();
    DataFragment frag;

    for (const RawRow& row : block.rows) {
        std::vector<std::vector<Value>> lists;
        std::vector<Variable> vars;
        for (std::size_t c = 0; c < n_in; ++c) {
            const Sort& sort = vocab.sort(cols[c].sort);
            std::vector<Value> values;
            for (const std::string& item : split_list(row.inputs[c])) {
                auto v = parse_basic_value(item, sort);
                if (!v || !sort.contains(*v)) {
                    throw Error(ErrorCode::ValueOutsideDomain, row.line,
                                "value '" + item + "' is not in the domain of '" + sort.name + "'");
                }
                values.push_back(*v);
            }
            lists.push_back(std::move(values));
            vars.push_back(*cols[c].header.introduced);
        }
        struct Out {
            SymbolId symbol;
            std::vector<Variable> args;
            Value value;
        };
        std::vector<Out> outs;
        for (std::size_t c = n_in; c < cols.size(); ++c) {
            const std::string& cell = row.outputs[c - n_in];
            if (is_dash_cell(cell)) continue;
            if (split_list(cell).size() > 1) {
                throw Error(ErrorCode::ListInOutputCell, row.line,
                            "data output cell '" + cell + "' holds a list");
            }
            const Sort& sort = vocab.sort(cols[c].sort);
            auto v = parse_basic_value(cell, sort);
            if (!v || !sort.contains(*v)) {
                throw Error(ErrorCode::ValueOutsideDomain, row.line,
                            "value '" + trim(cell) + "' is not in the domain of '" + sort.name + "'");
            }
            Out o{cols[c].header.expr->symbol, {}, *v};
            for (const ExprPtr& a : cols[c].header.expr->args) o.args.push_back(a->var);
            outs.push_back(std::move(o));
        }

        // Cross product over the input lists, first column slowest.
        std::vector<std::size_t> idx(lists.size(), 0);
        bool empty = std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); });
        while (!empty) {
            Valuation env;
            for (std::size_t c = 0; c < lists.size(); ++c) env.set(vars[c], lists[c][idx[c]]);
            for (const Out& o : outs) {
                Tuple tuple;
                for (const Variable& a : o.args) tuple.push_back(*env.get(a));
                auto& table = frag.tables[o.symbol];
                auto [it, inserted] = table.emplace(tuple, o.value);
                if (!inserted && it->second != o.value) {
                    throw Error(ErrorCode::ConflictingAssignment, row.line,
                                "'" + vocab.symbol(o.symbol).name + "' is given both " +
                                    it->second.to_string() + " and " + o.value.to_string() +
                                    " for the same arguments");
                }
                if (inserted) frag.lines[o.symbol][tuple] = row.line;
            }
            std::size_t c = lists.size();
            while (c > 0) {
                --c;
                if (++idx[c] < lists[c].size()) break;
                idx[c] = 0;
                if (c == 0) empty = true;
            }
            if (lists.empty()) break;
        }
    }
    // Symbols in the header are interpreted by this table even without rows.
    for (std::size_t c = n_in; c < cols.size(); ++c) frag.tables[cols[c].header.expr->symbol];
    return frag;
}

std::map<SymbolId, SymbolTable> merge_data(const std::vector<DataFragment>& fragments,
                                           const Vocabulary& vocab) {
    std::map<SymbolId, SymbolTable> fixed;
    for (const DataFragment& frag : fragments) {
        for (const auto& [symbol, table] : frag.tables) {
            SymbolTable& into = fixed[symbol];
            for (const auto& [tuple, value] : table) {
                auto [it, inserted] = into.emplace(tuple, value);
                if (!inserted && it->second != value) {
                    throw Error(ErrorCode::ConflictingAssignment, frag.lines.at(symbol).at(tuple),
                                "'" + vocab.symbol(symbol).name + "' is given both " +
                                    it->second.to_string() + " and " + value.to_string() +
                                    " for the same arguments");
                }
            }
        }
    }
    Structure probe;
    probe.vocab = std::shared_ptr<const Vocabulary>(&vocab, [](const Vocabulary*) {});
    for (auto& [symbol, table] : fixed) {
        const SymbolDecl& decl = vocab.symbol(symbol);
        for (const Tuple& tuple : probe.instances(symbol)) {
            if (table.count(tuple)) continue;
            if (decl.is_predicate()) {
                table.emplace(tuple, Value::no());
                continue;
            }
            std::string args;
            for (const Value& v : tuple) args += (args.empty() ? "" : ", ") + v.to_string();
            throw Error(ErrorCode::PartialFunctionData, decl.line,
                        "data tables fix '" + decl.name + "' but give no value for (" + args + ")");
        }
    }
    return fixed;
}

// ===========================================================================
// Execute

Task compile_execute(const RawBlock* block, const Vocabulary& vocab) {
    Task task;
    if (block == nullptr) return task;
    task.line = block->header.line;
    if (!block->rows.empty()) {
        throw Error(ErrorCode::MalformedExecute, block->rows.front().line,
                    "execute block takes a single line");
    }
    const std::string text = trim(block->header.inputs.at(0));
    std::istringstream in(text);
    std::string verb;
    in >> verb;
    verb = lower(verb);
    if (verb == "get") {
        std::string count, noun, rest;
        in >> count >> noun >> rest;
        noun = lower(noun);
        bool ok = (noun == "model" || noun == "models") && rest.empty();
        if (ok && lower(count) == "all") {
            task.count = 0;
        } else if (ok && !count.empty() &&
                   std::all_of(count.begin(), count.end(), [](unsigned char c) { return std::isdigit(c); }) &&
                   count.size() < 10 && std::stoul(count) > 0) {
            task.count = std::stoul(count);
        } else {
            throw Error(ErrorCode::MalformedExecute, task.line,
                        "expected 'get <N> models', got '" + text + "'");
        }
        return task;
    }
    if (verb == "minimize" || verb == "maximize" || verb == "minimise" || verb == "maximise") {
        task.mode = verb.substr(0, 3) == "min" ? Task::Mode::Minimize : Task::Mode::Maximize;
        task.objective_text = trim(text.substr(verb.size()));
        if (task.objective_text.empty()) {
            throw Error(ErrorCode::MalformedExecute, task.line, "'" + text + "' names no term");
        }
        VarScope none;
        ExprPtr e = parse_expression(task.objective_text, vocab, none, task.line);
        if (!is_numeric_sort(vocab, e->sort)) {
            throw Error(ErrorCode::NonNumericObjective, task.line,
                        "objective '" + task.objective_text + "' is not numeric");
        }
        task.objective = term_of(*e);
        return task;
    }
    throw Error(ErrorCode::MalformedExecute, task.line,
                "expected 'get <N> models', 'minimize <term>' or 'maximize <term>', got '" + text + "'");
}

// ===========================================================================
// Whole model

CompiledModel compile_model(const RawModel& raw) {
    std::vector<const RawBlock*> glossary;
    std::vector<const RawBlock*> data;
    std::vector<const RawBlock*> tables;
    const RawBlock* execute = nullptr;
    for (const RawBlock& b : raw.blocks) {
        if (is_glossary(b.kind)) glossary.push_back(&b);
        else if (b.kind == BlockKind::Data) data.push_back(&b);
        else if (b.kind == BlockKind::Table) tables.push_back(&b);
        else execute = &b;
    }

    auto vocab = std::make_shared<Vocabulary>();
    try {
        *vocab = complete_domains(build_vocabulary(glossary), data);
    } catch (const Error& e) {
        throw CompileError({e.diagnostic()});
    }
    std::vector<Diagnostic> diags = validate_data(*vocab, data);
    if (!diags.empty()) throw CompileError(std::move(diags));

    CompiledModel model;
    model.vocab = vocab;
    model.structure.vocab = vocab;

    std::vector<DataFragment> fragments;
    for (const RawBlock* b : data) {
        try {
            fragments.push_back(compile_data_table(*b, *vocab));
        } catch (const Error& e) {
            diags.push_back(e.diagnostic());
        }
    }
    if (diags.empty()) {
        try {
            model.structure.fixed = merge_data(fragments, *vocab);
        } catch (const Error& e) {
            diags.push_back(e.diagnostic());
        }
    }

    std::map<SymbolId, const CompiledTable*> writer;
    for (const RawBlock* b : tables) {
        try {
            model.tables.push_back(compile_table(*b, *vocab));
        } catch (const Error& e) {
            diags.push_back(e.diagnostic());
        }
    }
    for (const CompiledTable& t : model.tables) {
        for (SymbolId s : t.writes) {
            const std::string& name = vocab->symbol(s).name;
            if (model.structure.is_fixed(s)) {
                diags.push_back({ErrorCode::DoublyDefined, t.line,
                                 "'" + name + "' is fixed by a data table and also written by '" +
                                     t.title + "'"});
            } else if (auto it = writer.find(s); it != writer.end()) {
                diags.push_back({ErrorCode::DoublyDefined, t.line,
                                 "'" + name + "' is written by both '" + it->second->title + "' and '" +
                                     t.title + "'"});
            } else {
                writer[s] = &t;
            }
        }
    }

    try {
        model.task = compile_execute(execute, *vocab);
    } catch (const Error& e) {
        diags.push_back(e.diagnostic());
    }

    if (!diags.empty()) {
        std::stable_sort(diags.begin(), diags.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
        throw CompileError(std::move(diags));
    }

    std::set<SymbolId> derived;
    for (const CompiledTable& t : model.tables) {
        if (t.entry) model.theory.formulas.push_back(*t.entry);
        if (t.definition) {
            model.theory.definitions.push_back(*t.definition);
            derived.insert(t.definition->symbol);
        }
        if (t.entry) {
            for (const auto& [symbol, values] : t.output_values) {
                if (vocab->sort(vocab->symbol(symbol).result_sort).finite()) continue;
                auto& dom = model.structure.value_domains[symbol];
                for (const Value& v : values) {
                    if (std::find(dom.begin(), dom.end(), v) == dom.end()) dom.push_back(v);
                }
            }
        }
    }
    for (std::size_t i = 0; i < vocab->symbols().size(); ++i) {
        SymbolId s{static_cast<std::uint32_t>(i)};
        if (model.structure.is_fixed(s)) continue;
        if (derived.count(s)) model.structure.derived.push_back(s);
        else model.structure.unknown.push_back(s);
    }
    return model;
}

CompiledModel compile_source(std::string_view source, std::string source_name) {
    RawModel raw;
    try {
        raw = parse_model(source, std::move(source_name));
    } catch (const Error& e) {
        throw CompileError({e.diagnostic()});
    }
    return compile_model(raw);
}

}  // namespace cdmn
