#include "cdmn/emit.hpp"

#include <algorithm>

#include "json.hpp"

namespace cdmn {

using nlohmann::json;

namespace {

json value_json(const Value& v) {
    if (v.is_number() && v.number().is_integer()) return v.number().num();
    return v.to_string();
}

json tuple_json(const Tuple& t) {
    json out = json::array();
    for (const Value& v : t) out.push_back(value_json(v));
    return out;
}

std::string symbol_name(const Vocabulary& vocab, SymbolId s) { return vocab.symbol(s).functor; }

json vars_json(const std::vector<Variable>& vars, const Vocabulary& vocab) {
    json out = json::array();
    for (const Variable& v : vars) out.push_back({{"name", v.name}, {"sort", vocab.sort(v.sort).name}});
    return out;
}

json formula_json(const Formula& f, const Vocabulary& vocab);

json term_json(const Term& t, const Vocabulary& vocab) {
    switch (t->kind) {
        case TermNode::Kind::Variable: return {{"var", t->var.name}};
        case TermNode::Kind::Value: return {{"value", value_json(t->value)}};
        case TermNode::Kind::Apply: {
            json args = json::array();
            for (const Term& a : t->args) args.push_back(term_json(a, vocab));
            return {{"apply", symbol_name(vocab, t->symbol)}, {"args", args}};
        }
        case TermNode::Kind::Arith:
            return {{"op", std::string(to_string(t->op))},
                    {"args", {term_json(t->args[0], vocab), term_json(t->args[1], vocab)}}};
        case TermNode::Kind::Aggregate: {
            json branches = json::array();
            for (const AggBranch& b : t->branches) {
                branches.push_back({{"if", formula_json(b.condition, vocab)}, {"then", term_json(b.body, vocab)}});
            }
            return {{"aggregate", std::string(to_string(t->agg))},
                    {"bound", vars_json(t->bound, vocab)},
                    {"branches", branches}};
        }
    }
    return nullptr;
}

json formula_json(const Formula& f, const Vocabulary& vocab) {
    auto children = [&] {
        json out = json::array();
        for (const Formula& c : f->children) out.push_back(formula_json(c, vocab));
        return out;
    };
    switch (f->kind) {
        case FormulaNode::Kind::True: return {{"op", "true"}};
        case FormulaNode::Kind::False: return {{"op", "false"}};
        case FormulaNode::Kind::Compare:
            return {{"op", std::string(to_string(f->op))},
                    {"args", {term_json(f->terms[0], vocab), term_json(f->terms[1], vocab)}}};
        case FormulaNode::Kind::Atom: {
            json args = json::array();
            for (const Term& a : f->terms) args.push_back(term_json(a, vocab));
            return {{"op", "atom"}, {"symbol", symbol_name(vocab, f->symbol)}, {"args", args}};
        }
        case FormulaNode::Kind::Not: return {{"op", "not"}, {"args", children()}};
        case FormulaNode::Kind::And: return {{"op", "and"}, {"args", children()}};
        case FormulaNode::Kind::Or: return {{"op", "or"}, {"args", children()}};
        case FormulaNode::Kind::Implies: return {{"op", "implies"}, {"args", children()}};
        case FormulaNode::Kind::Forall:
            return {{"op", "forall"}, {"vars", vars_json(f->vars, vocab)}, {"args", children()}};
    }
    return nullptr;
}

json theory_json(const Theory& theory, const Vocabulary& vocab) {
    json formulas = json::array();
    for (const TheoryEntry& e : theory.formulas) {
        formulas.push_back({{"title", e.title},
                            {"policy", std::string(to_string(e.policy))},
                            {"line", e.line},
                            {"formula", formula_json(e.formula, vocab)},
                            {"text", to_string(e.formula, vocab)}});
    }
    json definitions = json::array();
    for (const Definition& d : theory.definitions) {
        definitions.push_back({{"title", d.title},
                               {"symbol", symbol_name(vocab, d.symbol)},
                               {"params", vars_json(d.params, vocab)},
                               {"line", d.line},
                               {"body", term_json(d.body, vocab)},
                               {"text", to_string(d.body, vocab)}});
    }
    return {{"formulas", formulas}, {"definitions", definitions}};
}

json structure_json(const Structure& s) {
    const Vocabulary& vocab = *s.vocab;
    json sorts = json::object();
    for (std::size_t i = 3; i < 3 + vocab.user_sort_count(); ++i) {
        const Sort& sort = vocab.sort(SortId(static_cast<std::uint32_t>(i)));
        json entry = {{"finite", sort.finite()}};
        if (sort.domain_kind == DomainKind::Range) {
            entry["range"] = {value_json(Value(sort.lo)), value_json(Value(sort.hi))};
        } else {
            entry["values"] = tuple_json(sort.values);
        }
        sorts[sort.name] = entry;
    }
    json fixed = json::object();
    for (const auto& [sym, table] : s.fixed) {
        json rows = json::array();
        for (const auto& [args, v] : table) rows.push_back({tuple_json(args), value_json(v)});
        fixed[symbol_name(vocab, sym)] = rows;
    }
    json unknown = json::array();
    for (SymbolId sym : s.unknown) unknown.push_back(symbol_name(vocab, sym));
    json derived = json::array();
    for (SymbolId sym : s.derived) derived.push_back(symbol_name(vocab, sym));
    json domains = json::object();
    for (const auto& [sym, values] : s.value_domains) domains[symbol_name(vocab, sym)] = tuple_json(values);
    return {{"sorts", sorts}, {"fixed", fixed}, {"unknown", unknown}, {"derived", derived},
            {"value_domains", domains}};
}

json task_json(const Task& task, const Vocabulary& vocab) {
    switch (task.mode) {
        case Task::Mode::Enumerate: return {{"mode", "enumerate"}, {"count", task.count}};
        case Task::Mode::Minimize:
        case Task::Mode::Maximize:
            return {{"mode", task.mode == Task::Mode::Minimize ? "minimize" : "maximize"},
                    {"objective", term_json(task.objective, vocab)},
                    {"objective_text", task.objective_text}};
    }
    return nullptr;
}

json ground_json(const GroundProblem& gp) {
    const Vocabulary& vocab = *gp.structure().vocab;
    json vars = json::array();
    for (const GroundVar& v : gp.vars()) {
        vars.push_back({{"name", instance_name(vocab, v.symbol, v.args)}, {"domain", tuple_json(v.domain)}});
    }
    json origins = json::array();
    std::vector<std::size_t> per_origin(gp.origins().size(), 0);
    for (const GroundConstraint& c : gp.constraints()) ++per_origin[c.origin];
    for (std::size_t i = 0; i < gp.origins().size(); ++i) {
        const GroundOrigin& o = gp.origins()[i];
        origins.push_back({{"title", o.title},
                           {"policy", std::string(to_string(o.policy))},
                           {"definition", o.definition},
                           {"instantiations", o.instantiations},
                           {"kept", o.kept},
                           {"constraints", per_origin[i]}});
    }
    json constraints = json::array();
    for (const GroundConstraint& c : gp.constraints()) {
        constraints.push_back({{"origin", gp.origins()[c.origin].title}, {"text", gp.to_string(c.node)}});
    }
    json diagnostics = json::array();
    for (const Diagnostic& d : gp.diagnostics()) {
        diagnostics.push_back({{"code", std::string(to_string(d.code))}, {"line", d.line}, {"message", d.message}});
    }
    json out = {{"variables", vars},
                {"origins", origins},
                {"constraints", constraints},
                {"nodes", gp.nodes().size()},
                {"diagnostics", diagnostics},
                {"trivially_unsat", gp.trivially_unsat()}};
    if (gp.objective()) out["objective"] = gp.to_string(*gp.objective());
    return out;
}

}  // namespace

std::string instance_name(const Vocabulary& vocab, SymbolId symbol, const Tuple& args) {
    std::string out = vocab.symbol(symbol).functor;
    if (args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].to_string();
    return out + ")";
}

std::vector<std::string> model_lines(const ModelResult& model, const Vocabulary& vocab) {
    std::vector<std::string> lines;
    for (const Assignment* part : {&model.assignments, &model.derived}) {
        for (const auto& [sym, table] : *part) {
            for (const auto& [args, v] : table) lines.push_back(instance_name(vocab, sym, args) + " = " + v.to_string());
        }
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

std::string emit_json(const CompiledModel& model, const GroundProblem* ground, int indent) {
    const Vocabulary& vocab = *model.vocab;
    json out = {{"theory", theory_json(model.theory, vocab)},
                {"structure", structure_json(model.structure)},
                {"task", task_json(model.task, vocab)}};
    if (ground) out["ground"] = ground_json(*ground);
    return out.dump(indent);
}

std::string emit_result_json(const SolveResult& result, const Vocabulary& vocab, int indent) {
    json models = json::array();
    auto model_json = [&](const ModelResult& m) {
        json obj = json::object();
        for (const Assignment* part : {&m.assignments, &m.derived}) {
            for (const auto& [sym, table] : *part) {
                for (const auto& [args, v] : table) obj[instance_name(vocab, sym, args)] = value_json(v);
            }
        }
        return obj;
    };
    const bool optimizing = result.objective.has_value();
    if (optimizing) {
        if (!result.models.empty()) models.push_back(model_json(result.models.back()));
    } else {
        for (const ModelResult& m : result.models) models.push_back(model_json(m));
    }
    json out = {{"status", std::string(to_string(result.status))}, {"models", models}};
    if (optimizing) out["objective"] = value_json(*result.objective);
    return out.dump(indent);
}

}  // namespace cdmn
