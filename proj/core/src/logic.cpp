#include "cdmn/logic.hpp"

#include <functional>
#include <sstream>

#include "cdmn/error.hpp"

namespace cdmn {

std::string_view to_string(ArithOp op) {
    switch (op) {
        case ArithOp::Add: return "+";
        case ArithOp::Sub: return "-";
        case ArithOp::Mul: return "*";
        case ArithOp::Div: return "/";
    }
    return "?";
}

std::string_view to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "~=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "=<";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

std::string_view to_string(AggKind kind) {
    switch (kind) {
        case AggKind::Sum: return "sum";
        case AggKind::Count: return "count";
        case AggKind::Min: return "min";
        case AggKind::Max: return "max";
    }
    return "?";
}

CmpOp negate(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return CmpOp::Ne;
        case CmpOp::Ne: return CmpOp::Eq;
        case CmpOp::Lt: return CmpOp::Ge;
        case CmpOp::Le: return CmpOp::Gt;
        case CmpOp::Gt: return CmpOp::Le;
        case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

bool compare_values(CmpOp op, const Value& a, const Value& b) {
    if (op == CmpOp::Eq) return a == b;
    if (op == CmpOp::Ne) return a != b;
    if (!a.is_number() || !b.is_number()) {
        throw Error(ErrorCode::SortMismatch, 0,
                    "ordering comparison between non-numeric values " + a.to_string() + " and " +
                        b.to_string());
    }
    const Rational& x = a.number();
    const Rational& y = b.number();
    switch (op) {
        case CmpOp::Lt: return x < y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Gt: return x > y;
        case CmpOp::Ge: return x >= y;
        default: break;
    }
    return false;
}

// ===========================================================================
// Construction

Term make_variable(const Variable& v) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Variable;
    n->sort = v.sort;
    n->var = v;
    return n;
}

Term make_value(Value v, SortId sort) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Value;
    n->sort = sort;
    n->value = std::move(v);
    return n;
}

Term make_apply(SymbolId symbol, std::vector<Term> args, SortId result_sort) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Apply;
    n->sort = result_sort;
    n->symbol = symbol;
    n->args = std::move(args);
    return n;
}

Term make_arith(ArithOp op, Term lhs, Term rhs, SortId sort) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Arith;
    n->sort = sort;
    n->op = op;
    n->args = {std::move(lhs), std::move(rhs)};
    return n;
}

Term make_aggregate(AggKind kind, std::vector<Variable> bound, std::vector<AggBranch> branches,
                    SortId sort) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermNode::Kind::Aggregate;
    n->sort = sort;
    n->agg = kind;
    n->bound = std::move(bound);
    n->branches = std::move(branches);
    return n;
}

namespace {
Formula formula_of(FormulaNode::Kind kind) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = kind;
    return n;
}
}  // namespace

Formula make_true() {
    static const Formula t = formula_of(FormulaNode::Kind::True);
    return t;
}

Formula make_false() {
    static const Formula f = formula_of(FormulaNode::Kind::False);
    return f;
}

Formula make_compare(CmpOp op, Term lhs, Term rhs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Compare;
    n->op = op;
    n->terms = {std::move(lhs), std::move(rhs)};
    return n;
}

Formula make_atom(SymbolId relation, std::vector<Term> args) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Atom;
    n->symbol = relation;
    n->terms = std::move(args);
    return n;
}

Formula make_not(Formula f) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Not;
    n->children = {std::move(f)};
    return n;
}

Formula make_and(std::vector<Formula> fs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::And;
    n->children = std::move(fs);
    return n;
}

Formula make_or(std::vector<Formula> fs) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Or;
    n->children = std::move(fs);
    return n;
}

Formula make_implies(Formula antecedent, Formula consequent) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Implies;
    n->children = {std::move(antecedent), std::move(consequent)};
    return n;
}

Formula make_forall(std::vector<Variable> vars, Formula body) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = FormulaNode::Kind::Forall;
    n->vars = std::move(vars);
    n->children = {std::move(body)};
    return n;
}

// ===========================================================================
// Structures

std::vector<Value> domain_of(const Vocabulary& vocab, SortId sort) {
    const Sort& s = vocab.sort(sort);
    if (!s.finite()) {
        throw Error(ErrorCode::UnboundedDomain, s.line,
                    "sort '" + s.name + "' has no finite domain to range over");
    }
    return s.elements();
}

std::vector<Value> Structure::result_domain(SymbolId symbol) const {
    auto it = value_domains.find(symbol);
    if (it != value_domains.end()) return it->second;
    const SymbolDecl& decl = vocab->symbol(symbol);
    const Sort& s = vocab->sort(decl.result_sort);
    if (!s.finite()) {
        throw Error(ErrorCode::UnboundedDomain, decl.line,
                    "symbol '" + decl.name + "' ranges over unbounded sort '" + s.name +
                        "'; fix it with a data table or give it a finite type");
    }
    return s.elements();
}

std::vector<Tuple> Structure::instances(SymbolId symbol) const {
    const SymbolDecl& decl = vocab->symbol(symbol);
    std::vector<Tuple> out{Tuple{}};
    for (SortId arg : decl.arg_sorts) {
        std::vector<Value> dom = domain_of(*vocab, arg);
        std::vector<Tuple> next;
        next.reserve(out.size() * dom.size());
        for (const Tuple& prefix : out) {
            for (const Value& v : dom) {
                Tuple t = prefix;
                t.push_back(v);
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

// ===========================================================================
// Evaluation

void Valuation::set(const Variable& v, Value value) {
    if (slots_.size() <= v.id) slots_.resize(v.id + 1);
    slots_[v.id] = std::move(value);
}

void Valuation::erase(const Variable& v) {
    if (v.id < slots_.size()) slots_[v.id].reset();
}

const Value* Valuation::get(const Variable& v) const {
    if (v.id >= slots_.size() || !slots_[v.id]) return nullptr;
    return &*slots_[v.id];
}

Interpretation::Interpretation(const Structure& structure, const Assignment* candidate,
                               const std::vector<Definition>* definitions)
    : structure_(structure), candidate_(candidate) {
    if (definitions != nullptr) {
        for (const Definition& d : *definitions) definitions_[d.symbol] = &d;
    }
}

Value Interpretation::lookup(SymbolId symbol, const Tuple& args) const {
    const SymbolDecl& decl = structure_.vocab->symbol(symbol);
    if (auto it = structure_.fixed.find(symbol); it != structure_.fixed.end()) {
        auto hit = it->second.find(args);
        if (hit != it->second.end()) return hit->second;
        if (decl.is_predicate()) return Value::no();
    }
    if (candidate_ != nullptr) {
        if (auto it = candidate_->find(symbol); it != candidate_->end()) {
            auto hit = it->second.find(args);
            if (hit != it->second.end()) return hit->second;
        }
    }
    if (auto it = definitions_.find(symbol); it != definitions_.end()) {
        const Definition& def = *it->second;
        auto key = std::make_pair(symbol, args);
        if (!in_progress_.insert(key).second) {
            throw Error(ErrorCode::CyclicDefinition, def.line,
                        "definition of '" + decl.name + "' depends on itself");
        }
        Valuation v;
        for (std::size_t i = 0; i < def.params.size(); ++i) v.set(def.params[i], args.at(i));
        try {
            Value result = evaluate_term(def.body, *this, v);
            in_progress_.erase(key);
            return result;
        } catch (...) {
            in_progress_.erase(key);
            throw;
        }
    }
    std::string text = decl.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) text += (i ? ", " : "") + args[i].to_string();
    throw Error(ErrorCode::UninterpretedSymbol, decl.line, "no value for " + text + ")");
}

namespace {

// Calls fn once per tuple of values for vars (lexicographic, first variable slowest).
void for_each_tuple(const std::vector<Variable>& vars, const Vocabulary& vocab, Valuation& v,
                    const std::function<bool()>& fn) {
    std::vector<std::vector<Value>> domains;
    domains.reserve(vars.size());
    for (const Variable& var : vars) domains.push_back(domain_of(vocab, var.sort));
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == vars.size()) return fn();
        for (const Value& value : domains[i]) {
            v.set(vars[i], value);
            if (!rec(i + 1)) return false;
        }
        return true;
    };
    rec(0);
    for (const Variable& var : vars) v.erase(var);
}


}  // namespace

Value apply_arith(ArithOp op, const Value& a, const Value& b, const Sort& result_sort) {
    if (!a.is_number() || !b.is_number()) {
        throw Error(ErrorCode::SortMismatch, 0, "arithmetic on non-numeric value");
    }
    switch (op) {
        case ArithOp::Add: return a.number() + b.number();
        case ArithOp::Sub: return a.number() - b.number();
        case ArithOp::Mul: return a.number() * b.number();
        case ArithOp::Div: {
            if (b.number() == Rational(0)) {
                throw Error(ErrorCode::DivisionByZero, 0,
                            "division of " + a.to_string() + " by zero");
            }
            Rational q = a.number() / b.number();
            if (result_sort.base == BaseType::Int && !q.is_integer()) {
                throw Error(ErrorCode::SortMismatch, 0,
                            "integer division " + a.to_string() + " / " + b.to_string() +
                                " is not integral");
            }
            return q;
        }
    }
    return Value();
}

Value evaluate_term(const Term& t, const Interpretation& interp, Valuation& v) {
    const Vocabulary& vocab = *interp.structure().vocab;
    switch (t->kind) {
        case TermNode::Kind::Value: return t->value;
        case TermNode::Kind::Variable: {
            const Value* val = v.get(t->var);
            if (val == nullptr) {
                throw Error(ErrorCode::UnknownName, 0, "unbound variable " + t->var.name);
            }
            return *val;
        }
        case TermNode::Kind::Apply: {
            Tuple args;
            args.reserve(t->args.size());
            for (const Term& a : t->args) args.push_back(evaluate_term(a, interp, v));
            return interp.lookup(t->symbol, args);
        }
        case TermNode::Kind::Arith: {
            Value a = evaluate_term(t->args[0], interp, v);
            Value b = evaluate_term(t->args[1], interp, v);
            return apply_arith(t->op, a, b, vocab.sort(t->sort));
        }
        case TermNode::Kind::Aggregate: {
            Rational total(0);
            std::optional<Rational> best;
            for_each_tuple(t->bound, vocab, v, [&] {
                for (const AggBranch& br : t->branches) {
                    if (!evaluate_formula(br.condition, interp, v)) continue;
                    if (t->agg == AggKind::Count) {
                        total = total + Rational(1);
                        continue;
                    }
                    Value body = evaluate_term(br.body, interp, v);
                    if (!body.is_number()) {
                        throw Error(ErrorCode::NonNumericOutput, 0, "aggregate over non-number");
                    }
                    const Rational& x = body.number();
                    if (t->agg == AggKind::Sum) {
                        total = total + x;
                    } else if (!best || (t->agg == AggKind::Min ? x < *best : x > *best)) {
                        best = x;
                    }
                }
                return true;
            });
            if (t->agg == AggKind::Sum || t->agg == AggKind::Count) return total;
            if (!best) {
                throw Error(ErrorCode::EmptyAggregate, 0,
                            std::string(to_string(t->agg)) + " over an empty selection");
            }
            return *best;
        }
    }
    return Value();
}

bool evaluate_formula(const Formula& f, const Interpretation& interp, Valuation& v) {
    switch (f->kind) {
        case FormulaNode::Kind::True: return true;
        case FormulaNode::Kind::False: return false;
        case FormulaNode::Kind::Compare:
            return compare_values(f->op, evaluate_term(f->terms[0], interp, v),
                                  evaluate_term(f->terms[1], interp, v));
        case FormulaNode::Kind::Atom: {
            Tuple args;
            for (const Term& a : f->terms) args.push_back(evaluate_term(a, interp, v));
            return interp.lookup(f->symbol, args).is_yes();
        }
        case FormulaNode::Kind::Not: return !evaluate_formula(f->children[0], interp, v);
        case FormulaNode::Kind::And:
            for (const Formula& c : f->children) {
                if (!evaluate_formula(c, interp, v)) return false;
            }
            return true;
        case FormulaNode::Kind::Or:
            for (const Formula& c : f->children) {
                if (evaluate_formula(c, interp, v)) return true;
            }
            return false;
        case FormulaNode::Kind::Implies:
            return !evaluate_formula(f->children[0], interp, v) ||
                   evaluate_formula(f->children[1], interp, v);
        case FormulaNode::Kind::Forall: {
            bool all = true;
            for_each_tuple(f->vars, *interp.structure().vocab, v, [&] {
                all = evaluate_formula(f->children[0], interp, v);
                return all;
            });
            return all;
        }
    }
    return false;
}

// ===========================================================================
// Inspection

namespace {

void collect_free(const Term& t, std::set<Variable>& bound, std::set<Variable>& out);

void collect_free(const Formula& f, std::set<Variable>& bound, std::set<Variable>& out) {
    for (const Term& t : f->terms) collect_free(t, bound, out);
    if (f->kind == FormulaNode::Kind::Forall) {
        std::vector<Variable> added;
        for (const Variable& x : f->vars) {
            if (bound.insert(x).second) added.push_back(x);
        }
        collect_free(f->children[0], bound, out);
        for (const Variable& x : added) bound.erase(x);
        return;
    }
    for (const Formula& c : f->children) collect_free(c, bound, out);
}

void collect_free(const Term& t, std::set<Variable>& bound, std::set<Variable>& out) {
    switch (t->kind) {
        case TermNode::Kind::Variable:
            if (!bound.count(t->var)) out.insert(t->var);
            return;
        case TermNode::Kind::Value: return;
        case TermNode::Kind::Apply:
        case TermNode::Kind::Arith:
            for (const Term& a : t->args) collect_free(a, bound, out);
            return;
        case TermNode::Kind::Aggregate: {
            std::vector<Variable> added;
            for (const Variable& x : t->bound) {
                if (bound.insert(x).second) added.push_back(x);
            }
            for (const AggBranch& br : t->branches) {
                collect_free(br.condition, bound, out);
                collect_free(br.body, bound, out);
            }
            for (const Variable& x : added) bound.erase(x);
            return;
        }
    }
}

void collect_symbols(const Term& t, std::set<SymbolId>& out);

void collect_symbols(const Formula& f, std::set<SymbolId>& out) {
    if (f->kind == FormulaNode::Kind::Atom) out.insert(f->symbol);
    for (const Term& t : f->terms) collect_symbols(t, out);
    for (const Formula& c : f->children) collect_symbols(c, out);
}

void collect_symbols(const Term& t, std::set<SymbolId>& out) {
    if (t->kind == TermNode::Kind::Apply) out.insert(t->symbol);
    for (const Term& a : t->args) collect_symbols(a, out);
    for (const AggBranch& br : t->branches) {
        collect_symbols(br.condition, out);
        collect_symbols(br.body, out);
    }
}

}  // namespace

std::set<Variable> free_variables(const Formula& f) {
    std::set<Variable> bound;
    std::set<Variable> out;
    collect_free(f, bound, out);
    return out;
}

std::set<Variable> free_variables(const Term& t) {
    std::set<Variable> bound;
    std::set<Variable> out;
    collect_free(t, bound, out);
    return out;
}

std::set<SymbolId> symbols_of(const Formula& f) {
    std::set<SymbolId> out;
    collect_symbols(f, out);
    return out;
}

std::set<SymbolId> symbols_of(const Term& t) {
    std::set<SymbolId> out;
    collect_symbols(t, out);
    return out;
}

namespace {

std::string vars_text(const std::vector<Variable>& vars, const Vocabulary& vocab) {
    std::string out;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) out += ", ";
        out += vars[i].name + "[" + vocab.sort(vars[i].sort).name + "]";
    }
    return out;
}

std::string applied(const SymbolDecl& decl, const std::vector<std::string>& args) {
    if (args.empty()) return decl.functor;
    std::string out = decl.functor + "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i];
    return out + ")";
}

}  // namespace

std::string to_string(const Term& t, const Vocabulary& vocab) {
    switch (t->kind) {
        case TermNode::Kind::Value: return t->value.to_string();
        case TermNode::Kind::Variable: return t->var.name;
        case TermNode::Kind::Apply: {
            std::vector<std::string> args;
            for (const Term& a : t->args) args.push_back(to_string(a, vocab));
            return applied(vocab.symbol(t->symbol), args);
        }
        case TermNode::Kind::Arith:
            return "(" + to_string(t->args[0], vocab) + " " + std::string(to_string(t->op)) + " " +
                   to_string(t->args[1], vocab) + ")";
        case TermNode::Kind::Aggregate: {
            std::string out = std::string(to_string(t->agg)) + "{" + vars_text(t->bound, vocab) + ": ";
            for (std::size_t i = 0; i < t->branches.size(); ++i) {
                if (i) out += "; ";
                out += to_string(t->branches[i].condition, vocab) + " : " +
                       to_string(t->branches[i].body, vocab);
            }
            return out + "}";
        }
    }
    return "?";
}

std::string to_string(const Formula& f, const Vocabulary& vocab) {
    auto join = [&](std::string_view sep) {
        if (f->children.empty()) return std::string(f->kind == FormulaNode::Kind::And ? "true" : "false");
        std::string out = "(";
        for (std::size_t i = 0; i < f->children.size(); ++i) {
            if (i) out += sep;
            out += to_string(f->children[i], vocab);
        }
        return out + ")";
    };
    switch (f->kind) {
        case FormulaNode::Kind::True: return "true";
        case FormulaNode::Kind::False: return "false";
        case FormulaNode::Kind::Compare:
            return to_string(f->terms[0], vocab) + " " + std::string(to_string(f->op)) + " " +
                   to_string(f->terms[1], vocab);
        case FormulaNode::Kind::Atom: {
            std::vector<std::string> args;
            for (const Term& a : f->terms) args.push_back(to_string(a, vocab));
            return applied(vocab.symbol(f->symbol), args);
        }
        case FormulaNode::Kind::Not: return "~(" + to_string(f->children[0], vocab) + ")";
        case FormulaNode::Kind::And: return join(" & ");
        case FormulaNode::Kind::Or: return join(" | ");
        case FormulaNode::Kind::Implies:
            return "(" + to_string(f->children[0], vocab) + " => " + to_string(f->children[1], vocab) +
                   ")";
        case FormulaNode::Kind::Forall:
            return "!" + vars_text(f->vars, vocab) + ": " + to_string(f->children[0], vocab);
    }
    return "?";
}

}  // namespace cdmn
