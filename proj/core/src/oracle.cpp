#include "cdmn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace cdmn {

namespace {

bool holds(const Formula& f, const Interpretation& interp) {
    Valuation v;
    try {
        return evaluate_formula(f, interp, v);
    } catch (const Error& e) {
        // An evaluation error (empty min/max, division by zero) rules the candidate out.
        if (e.code() == ErrorCode::EmptyAggregate || e.code() == ErrorCode::DivisionByZero ||
            e.code() == ErrorCode::SortMismatch) {
            return false;
        }
        throw;
    }
}

bool derived_in_type(const Structure& s, SymbolId sym, const Interpretation& interp) {
    const Sort& sort = s.vocab->sort(s.vocab->symbol(sym).result_sort);
    for (const Tuple& args : s.instances(sym)) {
        try {
            if (!sort.contains(interp.lookup(sym, args))) return false;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::EmptyAggregate || e.code() == ErrorCode::DivisionByZero ||
                e.code() == ErrorCode::SortMismatch) {
                return false;
            }
            throw;
        }
    }
    return true;
}

const Definition* definition_of(const Theory& theory, SymbolId s) {
    for (const Definition& d : theory.definitions) {
        if (d.symbol == s) return &d;
    }
    return nullptr;
}

// Unknown symbols a set of symbols depends on, looking through definitions.
std::set<SymbolId> expand(const Theory& theory, std::set<SymbolId> todo) {
    std::set<SymbolId> out;
    while (!todo.empty()) {
        SymbolId s = *todo.begin();
        todo.erase(todo.begin());
        if (!out.insert(s).second) continue;
        if (const Definition* d = definition_of(theory, s)) {
            for (SymbolId t : symbols_of(d->body)) todo.insert(t);
        }
    }
    return out;
}

}  // namespace

CheckResult check_model(const Theory& theory, const Structure& structure, const Assignment& candidate) {
    CheckResult result;
    std::set<std::string> violated;
    for (SymbolId sym : structure.unknown) {
        const SymbolDecl& decl = structure.vocab->symbol(sym);
        std::vector<Value> dom = structure.result_domain(sym);
        auto table = candidate.find(sym);
        for (const Tuple& args : structure.instances(sym)) {
            const Value* v = nullptr;
            if (table != candidate.end()) {
                auto hit = table->second.find(args);
                if (hit != table->second.end()) v = &hit->second;
            }
            if (v == nullptr || std::find(dom.begin(), dom.end(), *v) == dom.end()) {
                violated.insert("type of " + decl.name);
                break;
            }
        }
    }
    if (violated.empty()) {
        Interpretation interp(structure, &candidate, &theory.definitions);
        for (const TheoryEntry& e : theory.formulas) {
            if (!holds(e.formula, interp)) violated.insert(e.title);
        }
        for (const Definition& d : theory.definitions) {
            if (!derived_in_type(structure, d.symbol, interp)) violated.insert(d.title);
        }
    }
    result.violated.assign(violated.begin(), violated.end());
    result.ok = result.violated.empty();
    return result;
}

std::size_t candidate_space(const Structure& structure) {
    long double total = 1;
    for (SymbolId sym : structure.unknown) {
        long double dom = static_cast<long double>(structure.result_domain(sym).size());
        long double n = static_cast<long double>(structure.instances(sym).size());
        total *= std::pow(dom, n);
        if (total > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2)) {
            return std::numeric_limits<std::size_t>::max();
        }
    }
    return static_cast<std::size_t>(total);
}

std::vector<Assignment> brute_force_models(const Theory& theory, const Structure& structure, std::size_t cap) {
    const std::size_t space = candidate_space(structure);
    if (space > cap) {
        throw Error(ErrorCode::OracleTooLarge, 0,
                    "oracle would enumerate " +
                        (space == std::numeric_limits<std::size_t>::max() ? std::string("too many")
                                                                          : std::to_string(space)) +
                        " candidates (cap " + std::to_string(cap) + ")");
    }

    const auto& unknown = structure.unknown;
    std::map<SymbolId, std::size_t> position;
    for (std::size_t i = 0; i < unknown.size(); ++i) position[unknown[i]] = i;

    // Each check runs as soon as the last unknown it depends on is assigned.
    struct Check {
        const Formula* formula = nullptr;
        SymbolId derived{};
    };
    std::vector<std::vector<Check>> checks_at(unknown.size() + 1);
    auto slot_for = [&](const std::set<SymbolId>& deps) {
        std::size_t at = 0;
        for (SymbolId s : deps) {
            if (auto it = position.find(s); it != position.end()) at = std::max(at, it->second + 1);
        }
        return at;
    };
    for (const TheoryEntry& e : theory.formulas) {
        checks_at[slot_for(expand(theory, symbols_of(e.formula)))].push_back(Check{&e.formula, {}});
    }
    for (const Definition& d : theory.definitions) {
        checks_at[slot_for(expand(theory, {d.symbol}))].push_back(Check{nullptr, d.symbol});
    }

    std::vector<std::vector<Tuple>> instances;
    std::vector<std::vector<Value>> domains;
    for (SymbolId s : unknown) {
        instances.push_back(structure.instances(s));
        domains.push_back(structure.result_domain(s));
    }

    std::vector<Assignment> models;
    Assignment candidate;
    Interpretation interp(structure, &candidate, &theory.definitions);
    auto passes = [&](std::size_t slot) {
        for (const Check& c : checks_at[slot]) {
            bool ok = c.formula ? holds(*c.formula, interp) : derived_in_type(structure, c.derived, interp);
            if (!ok) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> assign_symbol = [&](std::size_t k) {
        if (k == unknown.size()) {
            models.push_back(candidate);
            return;
        }
        const auto& inst = instances[k];
        const auto& dom = domains[k];
        if (dom.empty() && !inst.empty()) return;
        std::vector<std::size_t> digits(inst.size(), 0);
        SymbolTable& table = candidate[unknown[k]];
        while (true) {
            for (std::size_t i = 0; i < inst.size(); ++i) table[inst[i]] = dom[digits[i]];
            if (passes(k + 1)) assign_symbol(k + 1);
            // odometer, last instance fastest
            std::size_t i = inst.size();
            while (i > 0 && ++digits[i - 1] == dom.size()) digits[--i] = 0;
            if (i == 0) break;
        }
        candidate.erase(unknown[k]);
    };

    if (passes(0)) assign_symbol(0);
    return models;
}

Value evaluate_objective(const Theory& theory, const Structure& structure, const Assignment& candidate,
                         const Term& objective) {
    Interpretation interp(structure, &candidate, &theory.definitions);
    Valuation v;
    return evaluate_term(objective, interp, v);
}

}  // namespace cdmn
