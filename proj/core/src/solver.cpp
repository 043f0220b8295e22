#include "cdmn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "cdmn/oracle.hpp"

namespace cdmn {

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Sat: return "SAT";
        case SolveStatus::Unsat: return "UNSAT";
        case SolveStatus::Optimum: return "OPTIMUM";
        case SolveStatus::Limit: return "LIMIT";
    }
    return "?";
}

namespace {

constexpr std::uint8_t kFalse = 0;
constexpr std::uint8_t kTrue = 1;
constexpr std::uint8_t kUnknown = 2;

// Abstract value of a ground node under a partial assignment.
struct AV {
    enum class K : std::uint8_t { Num, Atom, Tri, Err };
    K k = K::Err;
    std::uint8_t tri = kUnknown;
    bool lo_inf = false;
    bool hi_inf = false;
    std::int32_t atom = -1;  // -1: any atom of the sort
    Rational lo;
    Rational hi;

    static AV err() { return AV{}; }
    static AV truth(std::uint8_t t) {
        AV a;
        a.k = K::Tri;
        a.tri = t;
        return a;
    }
    static AV number(const Rational& x) {
        AV a;
        a.k = K::Num;
        a.lo = x;
        a.hi = x;
        return a;
    }
    static AV interval(const Rational& lo, bool lo_inf, const Rational& hi, bool hi_inf) {
        AV a;
        a.k = K::Num;
        a.lo = lo;
        a.hi = hi;
        a.lo_inf = lo_inf;
        a.hi_inf = hi_inf;
        return a;
    }
    static AV unbounded() { return interval(0, true, 0, true); }
    static AV atom_of(std::int32_t id) {
        AV a;
        a.k = K::Atom;
        a.atom = id;
        return a;
    }

    bool exact() const {
        if (k == K::Num) return !lo_inf && !hi_inf && lo == hi;
        if (k == K::Atom) return atom >= 0;
        if (k == K::Tri) return tri != kUnknown;
        return false;
    }
};

AV hull(const AV& a, const AV& b) {
    if (a.k == AV::K::Err) return b;
    if (b.k == AV::K::Err) return a;
    if (a.k != b.k) return AV::err();
    switch (a.k) {
        case AV::K::Num: {
            AV r = a;
            if (b.lo_inf || (!r.lo_inf && b.lo < r.lo)) { r.lo = b.lo; r.lo_inf = b.lo_inf; }
            if (b.hi_inf || (!r.hi_inf && b.hi > r.hi)) { r.hi = b.hi; r.hi_inf = b.hi_inf; }
            return r;
        }
        case AV::K::Atom: return AV::atom_of(a.atom == b.atom ? a.atom : -1);
        case AV::K::Tri: return AV::truth(a.tri == b.tri ? a.tri : kUnknown);
        case AV::K::Err: break;
    }
    return AV::err();
}

struct VarState {
    std::vector<Value> domain;
    std::vector<Rational> numbers;    // numeric domains
    std::vector<std::int32_t> atoms;  // atom domains
    bool numeric = false;
    std::vector<std::uint8_t> live;
    std::size_t live_count = 0;
    std::int32_t assigned = -1;
    std::vector<std::uint32_t> watches;  // constraint indices
};

class Search {
public:
    Search(const GroundProblem& gp, const SolveOptions& options, const ModelCallback& on_model)
        : gp_(gp), vocab_(*gp.structure().vocab), options_(options), on_model_(on_model) {
        const auto& nodes = gp_.nodes();
        cache_.resize(nodes.size());
        stamp_.assign(nodes.size(), 0);
        node_atom_.assign(nodes.size(), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].kind == GKind::Const && nodes[i].value.is_atom()) {
                node_atom_[i] = intern_atom(nodes[i].value.name());
            }
        }

        vars_.resize(gp_.vars().size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            VarState& v = vars_[i];
            v.domain = gp_.vars()[i].domain;
            v.numeric = !v.domain.empty() && v.domain.front().is_number();
            for (const Value& x : v.domain) {
                if (x.is_number()) {
                    v.numbers.push_back(x.number());
                    v.atoms.push_back(-1);
                } else {
                    v.numbers.emplace_back(0);
                    v.atoms.push_back(intern_atom(x.name()));
                }
            }
            v.live.assign(v.domain.size(), 1);
            v.live_count = v.domain.size();
        }

        const auto& cs = gp_.constraints();
        open_.resize(cs.size());
        queued_.assign(cs.size(), 0);
        for (std::uint32_t c = 0; c < cs.size(); ++c) {
            open_[c] = cs[c].vars.size();
            for (std::uint32_t x : cs[c].vars) vars_[x].watches.push_back(c);
        }

        // Select nodes indexed directly by a variable: branch per domain position.
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const GroundNode& n = nodes[i];
            if (n.kind != GKind::Select) continue;
            const GroundNode& idx = nodes[n.kids[0]];
            if (idx.kind != GKind::Var) continue;
            std::vector<std::int32_t> table;
            for (const Value& x : vars_[idx.var].domain) {
                auto it = std::find(n.keys.begin(), n.keys.end(), x);
                table.push_back(it == n.keys.end() ? -1 : static_cast<std::int32_t>(it - n.keys.begin()));
            }
            select_table_.emplace(static_cast<NodeId>(i), std::move(table));
        }

        const Task& task = gp_.task();
        optimizing_ = task.optimizing() && gp_.objective().has_value();
        minimize_ = task.mode == Task::Mode::Minimize;
        limit_ = options_.max_models ? *options_.max_models : task.count;
        if (options_.timeout_seconds > 0) {
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(options_.timeout_seconds));
        }
    }

    SolveResult run() {
        SolveResult result;
        bool feasible = !gp_.trivially_unsat();
        for (const VarState& v : vars_) {
            if (v.domain.empty()) feasible = false;
        }
        if (feasible) {
            for (std::uint32_t c = 0; c < gp_.constraints().size(); ++c) enqueue(c);
            if (propagate()) search();
        }
        result.stats = stats_;

        if (optimizing_) {
            if (best_) {
                ModelResult& m = *best_;
                if (options_.verify) verify(m);
                m.status = timed_out_ ? SolveStatus::Limit : SolveStatus::Optimum;
                result.objective = m.objective;
                result.status = m.status;
                for (ModelResult& inc : incumbents_) inc.status = SolveStatus::Sat;
                incumbents_.back().status = m.status;
                result.models = std::move(incumbents_);
            } else {
                result.status = timed_out_ ? SolveStatus::Limit : SolveStatus::Unsat;
            }
            return result;
        }
        if (!models_.empty()) {
            result.status = SolveStatus::Sat;
        } else {
            result.status = timed_out_ ? SolveStatus::Limit : SolveStatus::Unsat;
        }
        result.models = std::move(models_);
        return result;
    }

private:
    std::int32_t intern_atom(const std::string& name) {
        auto [it, inserted] = atom_ids_.emplace(name, static_cast<std::int32_t>(atom_ids_.size()));
        return it->second;
    }

    // ---- abstract evaluation ----------------------------------------------

    const AV& eval(NodeId id) {
        if (stamp_[id] == epoch_) return cache_[id];
        AV r = compute(id);
        cache_[id] = std::move(r);
        stamp_[id] = epoch_;
        return cache_[id];
    }

    void invalidate() { ++epoch_; }

    AV var_value(std::uint32_t x) const {
        const VarState& v = vars_[x];
        std::int32_t at = v.assigned;
        if (at < 0 && v.live_count == 1) {
            at = static_cast<std::int32_t>(std::find(v.live.begin(), v.live.end(), 1) - v.live.begin());
        }
        if (at >= 0) {
            return v.numeric ? AV::number(v.numbers[at]) : AV::atom_of(v.atoms[at]);
        }
        if (!v.numeric) return AV::atom_of(-1);
        bool any = false;
        Rational lo, hi;
        for (std::size_t i = 0; i < v.domain.size(); ++i) {
            if (!v.live[i]) continue;
            if (!any || v.numbers[i] < lo) lo = v.numbers[i];
            if (!any || v.numbers[i] > hi) hi = v.numbers[i];
            any = true;
        }
        if (!any) return AV::err();
        return AV::interval(lo, false, hi, false);
    }

    /// Whether an open variable can still take the value described by `a` (exact).
    bool var_may_equal(std::uint32_t x, const AV& a) const {
        const VarState& v = vars_[x];
        for (std::size_t i = 0; i < v.domain.size(); ++i) {
            if (!v.live[i]) continue;
            if (v.numeric ? (a.k == AV::K::Num && v.numbers[i] == a.lo) : (a.k == AV::K::Atom && v.atoms[i] == a.atom)) {
                return true;
            }
        }
        return false;
    }

    bool is_open_var(NodeId id) const {
        const GroundNode& n = gp_.node(id);
        return n.kind == GKind::Var && vars_[n.var].assigned < 0 && vars_[n.var].live_count > 1;
    }

    AV compute(NodeId id) {
        const GroundNode& n = gp_.node(id);
        switch (n.kind) {
            case GKind::Const:
                if (n.value.is_number()) return AV::number(n.value.number());
                return AV::atom_of(node_atom_[id]);
            case GKind::True: return AV::truth(kTrue);
            case GKind::False: return AV::truth(kFalse);
            case GKind::Var: return var_value(n.var);
            case GKind::Arith: return arith(n);
            case GKind::Agg: return aggregate(n);
            case GKind::Select: return select(id, n);
            case GKind::Cmp: return compare(n);
            case GKind::Not: {
                AV a = eval(n.kids[0]);
                if (a.k != AV::K::Tri) return AV::err();
                return AV::truth(a.tri == kUnknown ? kUnknown : static_cast<std::uint8_t>(1 - a.tri));
            }
            case GKind::And:
            case GKind::Or: {
                const std::uint8_t dominant = n.kind == GKind::And ? kFalse : kTrue;
                bool err = false;
                bool unknown = false;
                for (NodeId k : n.kids) {
                    const AV& a = eval(k);
                    if (a.k != AV::K::Tri) {
                        err = true;
                        continue;
                    }
                    if (a.tri == dominant) return AV::truth(dominant);
                    if (a.tri == kUnknown) unknown = true;
                }
                if (err) return AV::err();
                return AV::truth(unknown ? kUnknown : static_cast<std::uint8_t>(1 - dominant));
            }
            case GKind::Implies: {
                AV a = eval(n.kids[0]);
                AV b = eval(n.kids[1]);
                if ((a.k == AV::K::Tri && a.tri == kFalse) || (b.k == AV::K::Tri && b.tri == kTrue)) {
                    return AV::truth(kTrue);
                }
                if (a.k != AV::K::Tri || b.k != AV::K::Tri) return AV::err();
                if (a.tri == kTrue && b.tri == kFalse) return AV::truth(kFalse);
                return AV::truth(kUnknown);
            }
        }
        return AV::err();
    }

    AV arith(const GroundNode& n) {
        AV a = eval(n.kids[0]);
        AV b = eval(n.kids[1]);
        if (a.k != AV::K::Num || b.k != AV::K::Num) return AV::err();
        try {
            if (a.exact() && b.exact()) {
                Value r = apply_arith(n.aop, Value(a.lo), Value(b.lo), vocab_.sort(n.sort));
                return AV::number(r.number());
            }
            switch (n.aop) {
                case ArithOp::Add:
                    return AV::interval(a.lo + b.lo, a.lo_inf || b.lo_inf, a.hi + b.hi, a.hi_inf || b.hi_inf);
                case ArithOp::Sub:
                    return AV::interval(a.lo - b.hi, a.lo_inf || b.hi_inf, a.hi - b.lo, a.hi_inf || b.lo_inf);
                case ArithOp::Mul: {
                    if (a.lo_inf || a.hi_inf || b.lo_inf || b.hi_inf) return AV::unbounded();
                    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
                    auto [mn, mx] = std::minmax_element(c, c + 4);
                    return AV::interval(*mn, false, *mx, false);
                }
                case ArithOp::Div: {
                    if (a.lo_inf || a.hi_inf || b.lo_inf || b.hi_inf) return AV::unbounded();
                    if (b.lo <= Rational(0) && b.hi >= Rational(0)) return AV::unbounded();
                    Rational c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
                    auto [mn, mx] = std::minmax_element(c, c + 4);
                    return AV::interval(*mn, false, *mx, false);
                }
            }
        } catch (const Error&) {
            return AV::err();
        } catch (const std::overflow_error&) {
            return AV::unbounded();
        }
        return AV::err();
    }

    AV aggregate(const GroundNode& n) {
        const bool additive = n.agg == AggKind::Sum || n.agg == AggKind::Count;
        try {
            if (additive) {
                AV acc = AV::number(n.value.number());
                for (std::size_t i = 0; i + 1 < n.kids.size(); i += 2) {
                    const AV& c = eval(n.kids[i]);
                    if (c.k != AV::K::Tri) return AV::err();
                    if (c.tri == kFalse) continue;
                    const AV& b = eval(n.kids[i + 1]);
                    if (b.k != AV::K::Num) return AV::err();
                    if (c.tri == kTrue) {
                        acc.lo = acc.lo + b.lo;
                        acc.hi = acc.hi + b.hi;
                        acc.lo_inf = acc.lo_inf || b.lo_inf;
                        acc.hi_inf = acc.hi_inf || b.hi_inf;
                    } else {
                        if (b.lo_inf || b.lo < Rational(0)) acc.lo = acc.lo + b.lo;
                        if (b.hi_inf || b.hi > Rational(0)) acc.hi = acc.hi + b.hi;
                        acc.lo_inf = acc.lo_inf || b.lo_inf;
                        acc.hi_inf = acc.hi_inf || b.hi_inf;
                    }
                }
                return acc;
            }
            // min / max: "sure" branches bound the result from one side.
            const bool is_min = n.agg == AggKind::Min;
            bool any_possible = false;
            bool any_sure = false;
            bool all_sure_exact = true;
            AV possible;  // hull of all possible bodies
            AV sure_bound;
            for (std::size_t i = 0; i + 1 < n.kids.size(); i += 2) {
                const AV& c = eval(n.kids[i]);
                if (c.k != AV::K::Tri) return AV::err();
                if (c.tri == kFalse) continue;
                const AV& b = eval(n.kids[i + 1]);
                if (b.k != AV::K::Num) return AV::err();
                possible = any_possible ? hull(possible, b) : b;
                any_possible = true;
                if (c.tri == kTrue) {
                    if (!any_sure) {
                        sure_bound = b;
                    } else if (is_min) {
                        if (!b.hi_inf && (sure_bound.hi_inf || b.hi < sure_bound.hi)) {
                            sure_bound.hi = b.hi;
                            sure_bound.hi_inf = false;
                        }
                    } else if (!b.lo_inf && (sure_bound.lo_inf || b.lo > sure_bound.lo)) {
                        sure_bound.lo = b.lo;
                        sure_bound.lo_inf = false;
                    }
                    any_sure = true;
                } else {
                    all_sure_exact = false;
                }
                if (!b.exact()) all_sure_exact = false;
            }
            if (!any_possible) return AV::err();
            AV r = possible;
            if (is_min) {
                if (any_sure) { r.hi = sure_bound.hi; r.hi_inf = sure_bound.hi_inf; }
            } else if (any_sure) {
                r.lo = sure_bound.lo;
                r.lo_inf = sure_bound.lo_inf;
            }
            if (all_sure_exact) {
                // Every branch decided and exact: the interval already collapsed.
                return is_min ? AV::number(r.lo) : AV::number(r.hi);
            }
            return r;
        } catch (const std::overflow_error&) {
            return AV::unbounded();
        }
    }

    AV select(NodeId id, const GroundNode& n) {
        const GroundNode& idx = gp_.node(n.kids[0]);
        if (idx.kind == GKind::Var) {
            const VarState& v = vars_[idx.var];
            const std::vector<std::int32_t>& table = select_table_.at(id);
            AV acc;
            bool any = false;
            for (std::size_t i = 0; i < v.domain.size(); ++i) {
                if (v.assigned >= 0 ? static_cast<std::int32_t>(i) != v.assigned : !v.live[i]) continue;
                AV b = table[i] < 0 ? AV::err() : eval(n.kids[1 + table[i]]);
                acc = any ? hull(acc, b) : b;
                any = true;
            }
            return any ? acc : AV::err();
        }
        AV key = eval(n.kids[0]);
        if (key.exact()) {
            for (std::size_t i = 0; i < n.keys.size(); ++i) {
                const Value& k = n.keys[i];
                bool hit = key.k == AV::K::Num ? (k.is_number() && k.number() == key.lo)
                                                : (k.is_atom() && atom_ids_.count(k.name()) &&
                                                   atom_ids_.at(k.name()) == key.atom);
                if (hit) return eval(n.kids[1 + i]);
            }
            return AV::err();
        }
        if (key.k == AV::K::Err) return AV::err();
        AV acc;
        bool any = false;
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
            const AV& b = eval(n.kids[i]);
            acc = any ? hull(acc, b) : b;
            any = true;
        }
        return any ? acc : AV::err();
    }

    static std::uint8_t order(CmpOp op, const AV& a, const AV& b) {
        // Lt / Le only; callers swap for Gt / Ge.
        const bool strict = op == CmpOp::Lt;
        if (!a.hi_inf && !b.lo_inf && (strict ? a.hi < b.lo : a.hi <= b.lo)) return kTrue;
        if (!a.lo_inf && !b.hi_inf && (strict ? a.lo >= b.hi : a.lo > b.hi)) return kFalse;
        return kUnknown;
    }

    AV compare(const GroundNode& n) {
        AV a = eval(n.kids[0]);
        AV b = eval(n.kids[1]);
        if (a.k == AV::K::Err || b.k == AV::K::Err || a.k == AV::K::Tri || b.k == AV::K::Tri) return AV::err();
        if (n.cop == CmpOp::Eq || n.cop == CmpOp::Ne) {
            std::uint8_t eq = kUnknown;
            if (a.k != b.k) {
                eq = kFalse;
            } else if (a.exact() && b.exact()) {
                eq = (a.k == AV::K::Num ? a.lo == b.lo : a.atom == b.atom) ? kTrue : kFalse;
            } else if (b.exact() && is_open_var(n.kids[0])) {
                eq = var_may_equal(gp_.node(n.kids[0]).var, b) ? kUnknown : kFalse;
            } else if (a.exact() && is_open_var(n.kids[1])) {
                eq = var_may_equal(gp_.node(n.kids[1]).var, a) ? kUnknown : kFalse;
            } else if (a.k == AV::K::Num) {
                if ((!a.hi_inf && !b.lo_inf && a.hi < b.lo) || (!a.lo_inf && !b.hi_inf && a.lo > b.hi)) eq = kFalse;
            }
            if (n.cop == CmpOp::Ne && eq != kUnknown) eq = static_cast<std::uint8_t>(1 - eq);
            return AV::truth(eq);
        }
        if (a.k != AV::K::Num || b.k != AV::K::Num) return AV::err();
        switch (n.cop) {
            case CmpOp::Lt:
            case CmpOp::Le: return AV::truth(order(n.cop, a, b));
            case CmpOp::Gt: return AV::truth(order(CmpOp::Lt, b, a));
            case CmpOp::Ge: return AV::truth(order(CmpOp::Le, b, a));
            default: break;
        }
        return AV::err();
    }

    /// Constraint status: an evaluation error counts as a violation.
    std::uint8_t status_of(std::uint32_t c) {
        const AV& a = eval(gp_.constraints()[c].node);
        if (a.k != AV::K::Tri) return kFalse;
        return a.tri;
    }

    // ---- state changes -----------------------------------------------------

    void assign(std::uint32_t x, std::int32_t value) {
        vars_[x].assigned = value;
        for (std::uint32_t c : vars_[x].watches) --open_[c];
    }

    void unassign(std::uint32_t x) {
        vars_[x].assigned = -1;
        for (std::uint32_t c : vars_[x].watches) ++open_[c];
    }

    void prune(std::uint32_t x, std::size_t i) {
        vars_[x].live[i] = 0;
        --vars_[x].live_count;
        trail_.emplace_back(x, static_cast<std::uint32_t>(i));
        ++stats_.prunings;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [x, i] = trail_.back();
            trail_.pop_back();
            vars_[x].live[i] = 1;
            ++vars_[x].live_count;
        }
    }

    void enqueue(std::uint32_t c) {
        if (queued_[c]) return;
        queued_[c] = 1;
        queue_.push_back(c);
    }

    void clear_queue() {
        for (std::uint32_t c : queue_) queued_[c] = 0;
        queue_.clear();
    }

    /// Checks queued constraints; forward-checks those with a single open variable.
    bool propagate() {
        while (!queue_.empty()) {
            std::uint32_t c = queue_.back();
            queue_.pop_back();
            queued_[c] = 0;
            invalidate();
            std::uint8_t s = status_of(c);
            if (s == kFalse) {
                clear_queue();
                return false;
            }
            if (s == kTrue || open_[c] != 1) continue;

            std::uint32_t y = 0;
            for (std::uint32_t x : gp_.constraints()[c].vars) {
                if (vars_[x].assigned < 0) {
                    y = x;
                    break;
                }
            }
            VarState& v = vars_[y];
            bool pruned = false;
            for (std::size_t i = 0; i < v.domain.size(); ++i) {
                if (!v.live[i]) continue;
                v.assigned = static_cast<std::int32_t>(i);
                invalidate();
                std::uint8_t t = status_of(c);
                v.assigned = -1;
                if (t == kFalse) {
                    prune(y, i);
                    pruned = true;
                }
            }
            if (v.live_count == 0) {
                clear_queue();
                return false;
            }
            if (pruned) {
                for (std::uint32_t d : v.watches) {
                    if (d != c) enqueue(d);
                }
            }
        }
        return true;
    }

    // ---- objective ---------------------------------------------------------

    AV objective_bound() {
        invalidate();
        return eval(*gp_.objective());
    }

    bool bound_allows_improvement() {
        if (!best_) return true;
        AV b = objective_bound();
        if (b.k != AV::K::Num) return false;
        const Rational& incumbent = best_->objective->number();
        if (minimize_) return b.lo_inf || b.lo < incumbent;
        return b.hi_inf || b.hi > incumbent;
    }

    // ---- search ------------------------------------------------------------

    bool out_of_time() {
        if (!deadline_) return false;
        if (std::chrono::steady_clock::now() >= *deadline_) timed_out_ = true;
        return timed_out_;
    }

    std::optional<std::uint32_t> choose_var() const {
        std::optional<std::uint32_t> best;
        for (std::uint32_t x = 0; x < vars_.size(); ++x) {
            if (vars_[x].assigned >= 0) continue;
            if (!best || vars_[x].live_count < vars_[*best].live_count) best = x;
        }
        return best;
    }

    std::vector<std::int32_t> value_order(std::uint32_t x) {
        VarState& v = vars_[x];
        std::vector<std::int32_t> values;
        for (std::size_t i = 0; i < v.domain.size(); ++i) {
            if (v.live[i]) values.push_back(static_cast<std::int32_t>(i));
        }
        if (!optimizing_ || values.size() < 2) return values;
        // Most promising objective bound first; domain order breaks ties.
        std::vector<std::pair<AV, std::int32_t>> keyed;
        for (std::int32_t i : values) {
            v.assigned = i;
            keyed.emplace_back(objective_bound(), i);
        }
        v.assigned = -1;
        auto rank = [&](const AV& a, const AV& b) {
            if (a.k != AV::K::Num || b.k != AV::K::Num) return a.k == AV::K::Num && b.k != AV::K::Num;
            if (minimize_) {
                if (a.lo_inf != b.lo_inf) return b.lo_inf;
                return !a.lo_inf && a.lo < b.lo;
            }
            if (a.hi_inf != b.hi_inf) return b.hi_inf;
            return !a.hi_inf && a.hi > b.hi;
        };
        std::stable_sort(keyed.begin(), keyed.end(),
                         [&](const auto& p, const auto& q) { return rank(p.first, q.first); });
        for (std::size_t i = 0; i < keyed.size(); ++i) values[i] = keyed[i].second;
        return values;
    }

    /// Returns false when the search must stop.
    bool search() {
        ++stats_.nodes;
        if (out_of_time()) return false;
        std::optional<std::uint32_t> x = choose_var();
        if (!x) return on_solution();

        for (std::int32_t value : value_order(*x)) {
            std::size_t mark = trail_.size();
            assign(*x, value);
            for (std::uint32_t c : vars_[*x].watches) enqueue(c);
            bool ok = propagate() && (!optimizing_ || bound_allows_improvement());
            if (!ok) ++stats_.failures;
            bool go_on = !ok || search();
            undo(mark);
            unassign(*x);
            if (!go_on) return false;
        }
        return true;
    }

    Value to_value(const AV& a) const {
        if (a.k == AV::K::Num && a.exact()) return Value(a.lo);
        if (a.k == AV::K::Atom && a.atom >= 0) {
            for (const auto& [name, id] : atom_ids_) {
                if (id == a.atom) return Value::atom(name);
            }
        }
        throw std::logic_error("solver: non-exact value at a full assignment");
    }

    ModelResult snapshot() {
        ModelResult m;
        for (std::uint32_t x = 0; x < vars_.size(); ++x) {
            const GroundVar& g = gp_.vars()[x];
            m.assignments[g.symbol][g.args] = vars_[x].domain[vars_[x].assigned];
        }
        invalidate();
        for (const auto& [key, node] : gp_.derived_nodes()) {
            m.derived[key.first][key.second] = to_value(eval(node));
        }
        if (optimizing_) m.objective = to_value(eval(*gp_.objective()));
        return m;
    }

    void verify(const ModelResult& m) const {
        CheckResult check = check_model(gp_.theory(), gp_.structure(), m.assignments);
        if (!check.ok) {
            std::string what;
            for (const std::string& t : check.violated) what += (what.empty() ? "" : ", ") + t;
            throw std::logic_error("solver produced a model violating: " + what);
        }
    }

    bool on_solution() {
        ModelResult m = snapshot();
        if (optimizing_) {
            if (best_ && !(minimize_ ? m.objective->number() < best_->objective->number()
                                     : m.objective->number() > best_->objective->number())) {
                return true;
            }
            incumbents_.push_back(m);
            best_ = std::move(m);
            if (on_model_ && !on_model_(*best_)) {
                timed_out_ = true;  // stopped by the caller: optimality is unproven
                return false;
            }
            return true;
        }
        if (options_.verify) verify(m);
        models_.push_back(std::move(m));
        if (on_model_ && !on_model_(models_.back())) return false;
        return limit_ == 0 || models_.size() < limit_;
    }

    const GroundProblem& gp_;
    const Vocabulary& vocab_;
    const SolveOptions& options_;
    const ModelCallback& on_model_;

    std::vector<AV> cache_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 1;
    std::vector<std::int32_t> node_atom_;
    std::unordered_map<std::string, std::int32_t> atom_ids_;
    std::unordered_map<NodeId, std::vector<std::int32_t>> select_table_;

    std::vector<VarState> vars_;
    std::vector<std::size_t> open_;  // unassigned variables per constraint
    std::vector<std::uint8_t> queued_;
    std::vector<std::uint32_t> queue_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> trail_;

    bool optimizing_ = false;
    bool minimize_ = true;
    std::size_t limit_ = 1;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    bool timed_out_ = false;

    std::vector<ModelResult> models_;
    std::vector<ModelResult> incumbents_;
    std::optional<ModelResult> best_;
    SolveStats stats_;
};

}  // namespace

SolveResult solve(const GroundProblem& problem, const SolveOptions& options, const ModelCallback& on_model) {
    Search search(problem, options, on_model);
    return search.run();
}

}  // namespace cdmn
