#include "cdmn/grounding.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cdmn {

std::optional<std::uint32_t> GroundProblem::var_of(SymbolId symbol, const Tuple& args) const {
    auto it = var_index_.find({symbol, args});
    if (it == var_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::uint32_t> GroundProblem::vars_under(NodeId id) const {
    std::vector<std::uint32_t> out;
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        const GroundNode& g = nodes_[n];
        if (g.kind == GKind::Var) out.push_back(g.var);
        for (NodeId k : g.kids) stack.push_back(k);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string GroundProblem::to_string(NodeId id) const {
    const GroundNode& n = nodes_[id];
    const Vocabulary& vocab = *structure_.vocab;
    auto list = [&](std::string_view sep) {
        std::string out = "(";
        for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? std::string(sep) : "") + to_string(n.kids[i]);
        return out + ")";
    };
    switch (n.kind) {
        case GKind::Const: return n.value.to_string();
        case GKind::Var: {
            const GroundVar& v = vars_[n.var];
            const SymbolDecl& decl = vocab.symbol(v.symbol);
            if (v.args.empty()) return decl.functor;
            std::string out = decl.functor + "(";
            for (std::size_t i = 0; i < v.args.size(); ++i) out += (i ? ", " : "") + v.args[i].to_string();
            return out + ")";
        }
        case GKind::Arith:
            return "(" + to_string(n.kids[0]) + " " + std::string(cdmn::to_string(n.aop)) + " " +
                   to_string(n.kids[1]) + ")";
        case GKind::Agg: {
            std::string out = std::string(cdmn::to_string(n.agg)) + "{";
            for (std::size_t i = 0; i + 1 < n.kids.size(); i += 2) {
                out += (i ? "; " : "") + to_string(n.kids[i]) + " : " + to_string(n.kids[i + 1]);
            }
            out += "}";
            if (n.value.is_number() && n.value.number() != Rational(0)) out += " + " + n.value.to_string();
            return out;
        }
        case GKind::Select: {
            std::string out = "case " + to_string(n.kids[0]) + " of {";
            for (std::size_t i = 0; i < n.keys.size(); ++i) {
                out += (i ? "; " : "") + n.keys[i].to_string() + ": " + to_string(n.kids[i + 1]);
            }
            return out + "}";
        }
        case GKind::True: return "true";
        case GKind::False: return "false";
        case GKind::Cmp:
            return to_string(n.kids[0]) + " " + std::string(cdmn::to_string(n.cop)) + " " + to_string(n.kids[1]);
        case GKind::Not: return "~(" + to_string(n.kids[0]) + ")";
        case GKind::And: return list(" & ");
        case GKind::Or: return list(" | ");
        case GKind::Implies: return "(" + to_string(n.kids[0]) + " => " + to_string(n.kids[1]) + ")";
    }
    return "?";
}

// ===========================================================================

class Grounder {
public:
    Grounder(GroundProblem& gp, const GroundOptions& options) : gp_(gp), options_(options) {
        for (const Definition& d : gp_.theory_.definitions) definitions_[d.symbol] = &d;
        true_ = intern(make(GKind::True));
        false_ = intern(make(GKind::False));
    }

    void run() {
        const Structure& s = gp_.structure_;
        for (SymbolId sym : s.unknown) {
            std::vector<Value> dom = s.result_domain(sym);
            for (Tuple& args : s.instances(sym)) {
                auto id = static_cast<std::uint32_t>(gp_.vars_.size());
                gp_.var_index_[{sym, args}] = id;
                gp_.vars_.push_back(GroundVar{sym, std::move(args), dom});
            }
        }

        for (const TheoryEntry& e : gp_.theory_.formulas) {
            gp_.origins_.push_back(GroundOrigin{e.title, e.policy, false, 0, 0, e.line});
        }
        for (const Definition& d : gp_.theory_.definitions) {
            definition_origin_[d.symbol] = gp_.origins_.size();
            gp_.origins_.push_back(GroundOrigin{d.title, HitPolicy::Sum, true, 0, 0, d.line});
        }

        for (std::size_t i = 0; i < gp_.theory_.formulas.size(); ++i) ground_entry(i);
        for (SymbolId sym : s.derived) {
            for (const Tuple& args : s.instances(sym)) derived(sym, args);
        }
        if (gp_.task_.optimizing()) {
            Valuation env;
            current_origin_ = std::nullopt;
            gp_.objective_ = term(gp_.task_.objective, env);
        }
    }

private:
    // ---- node construction -------------------------------------------------

    static GroundNode make(GKind kind) {
        GroundNode n;
        n.kind = kind;
        n.sort = Vocabulary::kBool;
        return n;
    }

    NodeId intern(GroundNode n) {
        std::string key;
        key.reserve(16 + 6 * n.kids.size());
        key += static_cast<char>(n.kind);
        key += std::to_string(index(n.sort));
        key += '|';
        if (n.kind == GKind::Const || n.kind == GKind::Agg) {
            key += n.value.is_number() ? "#" : "@";
            key += n.value.to_string();
        }
        key += '|';
        key += std::to_string(n.var) + "," + std::to_string(static_cast<int>(n.aop)) + "," +
               std::to_string(static_cast<int>(n.cop)) + "," + std::to_string(static_cast<int>(n.agg));
        for (NodeId k : n.kids) {
            key += ',';
            key += std::to_string(k);
        }
        for (const Value& v : n.keys) {
            key += ';';
            key += v.to_string();
        }
        auto [it, inserted] = index_.emplace(std::move(key), static_cast<NodeId>(gp_.nodes_.size()));
        if (inserted) gp_.nodes_.push_back(std::move(n));
        return it->second;
    }

    const GroundNode& at(NodeId id) const { return gp_.nodes_[id]; }
    bool is_const(NodeId id) const { return at(id).kind == GKind::Const; }

    NodeId constant(Value v, SortId sort) {
        GroundNode n = make(GKind::Const);
        n.sort = sort;
        n.value = std::move(v);
        return intern(std::move(n));
    }

    NodeId boolean(bool b) const { return b ? true_ : false_; }

    NodeId variable(std::uint32_t var) {
        GroundNode n = make(GKind::Var);
        n.var = var;
        n.sort = gp_.structure_.vocab->symbol(gp_.vars_[var].symbol).result_sort;
        return intern(std::move(n));
    }

    NodeId arith(ArithOp op, NodeId a, NodeId b, SortId sort) {
        if (is_const(a) && is_const(b)) {
            return constant(apply_arith(op, at(a).value, at(b).value, gp_.structure_.vocab->sort(sort)), sort);
        }
        GroundNode n = make(GKind::Arith);
        n.sort = sort;
        n.aop = op;
        n.kids = {a, b};
        return intern(std::move(n));
    }

    bool value_possible(NodeId term, const Value& v) const {
        const GroundNode& n = at(term);
        if (n.kind != GKind::Var) return true;
        const auto& dom = gp_.vars_[n.var].domain;
        return std::find(dom.begin(), dom.end(), v) != dom.end();
    }

    NodeId cmp(CmpOp op, NodeId a, NodeId b) {
        if (is_const(a) && is_const(b)) return boolean(compare_values(op, at(a).value, at(b).value));
        if (a == b) return boolean(op == CmpOp::Eq || op == CmpOp::Le || op == CmpOp::Ge);
        if (op == CmpOp::Eq || op == CmpOp::Ne) {
            if ((is_const(b) && !value_possible(a, at(b).value)) ||
                (is_const(a) && !value_possible(b, at(a).value))) {
                return boolean(op == CmpOp::Ne);
            }
        }
        GroundNode n = make(GKind::Cmp);
        n.cop = op;
        n.kids = {a, b};
        return intern(std::move(n));
    }

    NodeId negation(NodeId a) {
        const GroundNode& n = at(a);
        if (n.kind == GKind::True) return false_;
        if (n.kind == GKind::False) return true_;
        if (n.kind == GKind::Not) return n.kids[0];
        if (n.kind == GKind::Cmp) {
            NodeId l = n.kids[0];
            NodeId r = n.kids[1];
            return cmp(negate(n.cop), l, r);
        }
        GroundNode g = make(GKind::Not);
        g.kids = {a};
        return intern(std::move(g));
    }

    NodeId junction(GKind kind, const std::vector<NodeId>& parts) {
        const NodeId unit = kind == GKind::And ? true_ : false_;
        const NodeId zero = kind == GKind::And ? false_ : true_;
        std::vector<NodeId> kids;
        std::set<NodeId> seen;
        std::function<bool(NodeId)> add = [&](NodeId p) {
            if (p == zero) return false;
            if (p == unit) return true;
            if (at(p).kind == kind) {
                for (NodeId k : at(p).kids) {
                    if (!add(k)) return false;
                }
                return true;
            }
            if (seen.insert(p).second) kids.push_back(p);
            return true;
        };
        for (NodeId p : parts) {
            if (!add(p)) return zero;
        }
        if (kids.empty()) return unit;
        if (kids.size() == 1) return kids[0];
        GroundNode n = make(kind);
        n.kids = std::move(kids);
        return intern(std::move(n));
    }

    NodeId implies(NodeId a, NodeId b) {
        if (a == false_ || b == true_ || a == b) return true_;
        if (a == true_) return b;
        if (b == false_) return negation(a);
        GroundNode n = make(GKind::Implies);
        n.kids = {a, b};
        return intern(std::move(n));
    }

    NodeId select(NodeId index, const std::vector<Value>& keys, const std::vector<NodeId>& branches,
                  SortId sort) {
        if (is_const(index)) {
            const Value& v = at(index).value;
            for (std::size_t i = 0; i < keys.size(); ++i) {
                if (keys[i] == v) return branches[i];
            }
            throw Error(ErrorCode::UninterpretedSymbol, origin_line(),
                        "argument value " + v.to_string() + " lies outside the symbol's argument type");
        }
        if (std::all_of(branches.begin(), branches.end(), [&](NodeId b) { return b == branches[0]; })) {
            return branches[0];
        }
        GroundNode n = make(GKind::Select);
        n.sort = sort;
        n.kids.push_back(index);
        n.kids.insert(n.kids.end(), branches.begin(), branches.end());
        n.keys = keys;
        return intern(std::move(n));
    }

    NodeId aggregate(AggKind kind, const std::vector<std::pair<NodeId, NodeId>>& branches, SortId sort) {
        Rational offset(0);
        std::vector<NodeId> kids;
        bool all_fixed = true;
        std::optional<Rational> best;
        std::unordered_map<NodeId, std::size_t> const_branch;
        for (const auto& [c, b] : branches) {
            if (c == false_) continue;
            if (c == true_ && is_const(b)) {
                const Rational& x = at(b).value.number();
                if (kind == AggKind::Sum || kind == AggKind::Count) {
                    offset = offset + x;
                    continue;
                }
                if (!best || (kind == AggKind::Min ? x < *best : x > *best)) best = x;
            } else {
                all_fixed = false;
                if ((kind == AggKind::Sum || kind == AggKind::Count) && is_const(b)) {
                    // Same condition, constant bodies: one branch with the summed body.
                    auto [it, fresh] = const_branch.emplace(c, kids.size());
                    if (!fresh) {
                        NodeId& body = kids[it->second + 1];
                        body = constant(Value(at(body).value.number() + at(b).value.number()), sort);
                        continue;
                    }
                }
            }
            kids.push_back(c);
            kids.push_back(b);
        }
        if (kind == AggKind::Sum || kind == AggKind::Count) {
            if (kids.empty()) return constant(Value(offset), sort);
        } else {
            if (kids.empty()) {
                throw Error(ErrorCode::EmptyAggregate, origin_line(),
                            std::string(cdmn::to_string(kind)) + " in '" + origin_title() +
                                "' selects no row under the fixed data");
            }
            if (all_fixed) return constant(Value(*best), sort);
        }
        GroundNode n = make(GKind::Agg);
        n.sort = sort;
        n.agg = kind;
        n.value = Value(offset);
        n.kids = std::move(kids);
        return intern(std::move(n));
    }

    // ---- theory traversal --------------------------------------------------

    int origin_line() const { return current_origin_ ? gp_.origins_[*current_origin_].line : 0; }
    std::string origin_title() const {
        return current_origin_ ? gp_.origins_[*current_origin_].title : std::string("objective");
    }

    void charge(std::size_t units) {
        work_ += units;
        if (work_ > options_.size_limit) {
            throw Error(ErrorCode::GroundSizeLimit, origin_line(),
                        "grounding exceeds the limit of " + std::to_string(options_.size_limit) +
                            " instantiations (while grounding '" + origin_title() + "')");
        }
    }

    template <typename Fn>
    void for_each_tuple(const std::vector<Variable>& vars, Valuation& env, Fn&& fn) {
        std::vector<std::vector<Value>> doms;
        for (const Variable& v : vars) doms.push_back(domain_of(*gp_.structure_.vocab, v.sort));
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == vars.size()) {
                fn();
                return;
            }
            for (const Value& val : doms[i]) {
                env.set(vars[i], val);
                rec(i + 1);
            }
        };
        rec(0);
        for (const Variable& v : vars) env.erase(v);
    }

    void ground_entry(std::size_t idx) {
        const TheoryEntry& e = gp_.theory_.formulas[idx];
        current_origin_ = idx;
        if (e.formula->kind == FormulaNode::Kind::True) return;  // empty conjunction
        Valuation env;
        std::function<void(const Formula&)> descend = [&](const Formula& f) {
            if (f->kind == FormulaNode::Kind::Forall) {
                for_each_tuple(f->vars, env, [&] { descend(f->children[0]); });
                return;
            }
            if (f->kind == FormulaNode::Kind::And) {
                for (std::size_t i = 0; i < f->children.size(); ++i) leaf(idx, f->children[i], env, i);
                return;
            }
            leaf(idx, f, env, std::nullopt);
        };
        descend(e.formula);
    }

    void leaf(std::size_t idx, const Formula& f, Valuation& env, std::optional<std::size_t> part) {
        GroundOrigin& origin = gp_.origins_[idx];
        ++origin.instantiations;
        charge(1);
        NodeId node = formula(f, env);
        if (node == true_) return;
        add_constraint(idx, node);
        if (node != false_) return;
        gp_.trivially_unsat_ = true;
        const TheoryEntry& e = gp_.theory_.formulas[idx];
        if (part && e.coverage_part && *part == *e.coverage_part && !null_reported_.count(idx)) {
            null_reported_.insert(idx);
            gp_.diagnostics_.push_back(Diagnostic{ErrorCode::NullOutput, e.line,
                                                  "table '" + e.title + "': no row applies" +
                                                      describe(env) + " and no default is declared"});
        }
    }

    std::string describe(const Valuation& env) const {
        std::string out;
        for (const Variable& v : bound_vars_of_current()) {
            if (const Value* val = env.get(v)) out += (out.empty() ? " for " : ", ") + v.name + " = " + val->to_string();
        }
        return out;
    }

    std::vector<Variable> bound_vars_of_current() const {
        if (!current_origin_ || *current_origin_ >= gp_.theory_.formulas.size()) return {};
        const Formula& f = gp_.theory_.formulas[*current_origin_].formula;
        if (f->kind == FormulaNode::Kind::Forall) return f->vars;
        return {};
    }

    void add_constraint(std::size_t origin, NodeId node) {
        ++gp_.origins_[origin].kept;
        gp_.constraints_.push_back(GroundConstraint{node, origin, gp_.vars_under(node)});
    }

    NodeId formula(const Formula& f, Valuation& env) {
        switch (f->kind) {
            case FormulaNode::Kind::True: return true_;
            case FormulaNode::Kind::False: return false_;
            case FormulaNode::Kind::Compare: return cmp(f->op, term(f->terms[0], env), term(f->terms[1], env));
            case FormulaNode::Kind::Atom: {
                std::vector<NodeId> args;
                for (const Term& a : f->terms) args.push_back(term(a, env));
                return cmp(CmpOp::Eq, apply(f->symbol, args), constant(Value::yes(), Vocabulary::kBool));
            }
            case FormulaNode::Kind::Not: return negation(formula(f->children[0], env));
            case FormulaNode::Kind::And:
            case FormulaNode::Kind::Or: {
                std::vector<NodeId> parts;
                NodeId zero = f->kind == FormulaNode::Kind::And ? false_ : true_;
                for (const Formula& c : f->children) {
                    NodeId p = formula(c, env);
                    if (p == zero) return zero;
                    parts.push_back(p);
                }
                return junction(f->kind == FormulaNode::Kind::And ? GKind::And : GKind::Or, parts);
            }
            case FormulaNode::Kind::Implies: {
                NodeId a = formula(f->children[0], env);
                if (a == false_) return true_;
                return implies(a, formula(f->children[1], env));
            }
            case FormulaNode::Kind::Forall: {
                std::vector<NodeId> parts;
                for_each_tuple(f->vars, env, [&] {
                    charge(1);
                    parts.push_back(formula(f->children[0], env));
                });
                return junction(GKind::And, parts);
            }
        }
        return true_;
    }

    NodeId term(const Term& t, Valuation& env) {
        switch (t->kind) {
            case TermNode::Kind::Value: return constant(t->value, t->sort);
            case TermNode::Kind::Variable: {
                const Value* v = env.get(t->var);
                if (v == nullptr) {
                    throw Error(ErrorCode::UnknownName, origin_line(), "unbound variable " + t->var.name);
                }
                return constant(*v, t->var.sort);
            }
            case TermNode::Kind::Apply: {
                std::vector<NodeId> args;
                for (const Term& a : t->args) args.push_back(term(a, env));
                return apply(t->symbol, args);
            }
            case TermNode::Kind::Arith: return arith(t->op, term(t->args[0], env), term(t->args[1], env), t->sort);
            case TermNode::Kind::Aggregate: {
                std::vector<std::pair<NodeId, NodeId>> branches;
                NodeId one = constant(Value(1), Vocabulary::kInt);
                for_each_tuple(t->bound, env, [&] {
                    for (const AggBranch& br : t->branches) {
                        charge(1);
                        NodeId c = formula(br.condition, env);
                        if (c == false_) continue;
                        NodeId b = t->agg == AggKind::Count ? one : term(br.body, env);
                        branches.emplace_back(c, b);
                    }
                });
                return aggregate(t->agg, branches, t->sort);
            }
        }
        return true_;
    }

    NodeId apply(SymbolId symbol, const std::vector<NodeId>& args) {
        const Vocabulary& vocab = *gp_.structure_.vocab;
        const SymbolDecl& decl = vocab.symbol(symbol);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (is_const(args[i])) continue;
            std::vector<Value> keys = domain_of(vocab, decl.arg_sorts[i]);
            std::vector<NodeId> branches;
            std::vector<NodeId> fixed_args = args;
            for (const Value& k : keys) {
                fixed_args[i] = constant(k, decl.arg_sorts[i]);
                branches.push_back(apply(symbol, fixed_args));
            }
            return select(args[i], keys, branches, decl.result_sort);
        }
        Tuple tuple;
        for (NodeId a : args) tuple.push_back(at(a).value);
        const Structure& s = gp_.structure_;
        if (auto it = s.fixed.find(symbol); it != s.fixed.end()) {
            auto hit = it->second.find(tuple);
            if (hit != it->second.end()) return constant(hit->second, decl.result_sort);
            if (decl.is_predicate()) return constant(Value::no(), Vocabulary::kBool);
        }
        if (auto v = gp_.var_of(symbol, tuple)) return variable(*v);
        if (definitions_.count(symbol)) return derived(symbol, tuple);
        std::string text = decl.name + "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) text += (i ? ", " : "") + tuple[i].to_string();
        throw Error(ErrorCode::UninterpretedSymbol, origin_line(), "no value for " + text + ")");
    }

    NodeId derived(SymbolId symbol, const Tuple& args) {
        auto key = std::make_pair(symbol, args);
        if (auto it = gp_.derived_.find(key); it != gp_.derived_.end()) return it->second;
        const Definition& def = *definitions_.at(symbol);
        if (!in_progress_.insert(key).second) {
            throw Error(ErrorCode::CyclicDefinition, def.line,
                        "definition of '" + gp_.structure_.vocab->symbol(symbol).name + "' depends on itself");
        }
        auto saved_origin = current_origin_;
        std::size_t origin = definition_origin_.at(symbol);
        current_origin_ = origin;
        Valuation env;
        for (std::size_t i = 0; i < def.params.size(); ++i) env.set(def.params[i], args.at(i));
        NodeId node = term(def.body, env);
        in_progress_.erase(key);
        gp_.derived_[key] = node;

        // A derived value must still lie in its declared type.
        const Vocabulary& vocab = *gp_.structure_.vocab;
        const Sort& sort = vocab.sort(vocab.symbol(symbol).result_sort);
        ++gp_.origins_[origin].instantiations;
        if (sort.finite() || sort.domain_kind == DomainKind::Range) {
            NodeId member;
            if (sort.domain_kind == DomainKind::Range) {
                member = junction(GKind::And, {cmp(CmpOp::Ge, node, constant(Value(sort.lo), Vocabulary::kFloat)),
                                               cmp(CmpOp::Le, node, constant(Value(sort.hi), Vocabulary::kFloat))});
            } else {
                std::vector<NodeId> options;
                for (const Value& v : sort.elements()) options.push_back(cmp(CmpOp::Eq, node, constant(v, sort_id_of(sort))));
                member = junction(GKind::Or, options);
            }
            if (member != true_) {
                add_constraint(origin, member);
                if (member == false_) gp_.trivially_unsat_ = true;
            }
        }
        current_origin_ = saved_origin;
        return node;
    }

    SortId sort_id_of(const Sort& sort) const {
        const auto& sorts = gp_.structure_.vocab->sorts();
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            if (&sorts[i] == &sort) return SortId{static_cast<std::uint32_t>(i)};
        }
        return Vocabulary::kFloat;
    }

    GroundProblem& gp_;
    GroundOptions options_;
    std::unordered_map<std::string, NodeId> index_;
    NodeId true_ = 0;
    NodeId false_ = 0;
    std::map<SymbolId, const Definition*> definitions_;
    std::map<SymbolId, std::size_t> definition_origin_;
    std::set<std::pair<SymbolId, Tuple>> in_progress_;
    std::set<std::size_t> null_reported_;
    std::optional<std::size_t> current_origin_;
    std::size_t work_ = 0;
};

GroundProblem ground(const Theory& theory, const Structure& structure, const Task& task,
                     const GroundOptions& options) {
    GroundProblem gp;
    gp.theory_ = theory;
    gp.structure_ = structure;
    gp.task_ = task;
    Grounder g(gp, options);
    g.run();
    return gp;
}

}  // namespace cdmn
