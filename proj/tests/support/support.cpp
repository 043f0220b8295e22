#include "support.hpp"

#include "cdmn/error.hpp"
#include "cdmn/oracle.hpp"

namespace cdmn::testing {

std::string corpus_path(const std::string& name) { return std::string(CDMN_CORPUS_DIR) + "/" + name + ".cdmn"; }

std::string fixture_path(const std::string& name) { return std::string(CDMN_FIXTURE_DIR) + "/" + name; }

CompiledModel compile_file(const std::string& path) {
    return compile_source(corpus::read_file(path), path);
}

CompiledModel compile_corpus(const std::string& name) { return compile_file(corpus_path(name)); }

Vocabulary vocabulary_of(const std::string& source) {
    RawModel raw = parse_model(source);
    std::vector<const RawBlock*> glossary;
    std::vector<const RawBlock*> data;
    for (const RawBlock& b : raw.blocks) {
        if (is_glossary(b.kind)) glossary.push_back(&b);
        if (b.kind == BlockKind::Data) data.push_back(&b);
    }
    return complete_domains(build_vocabulary(glossary), data);
}

ModelSet solver_models(const CompiledModel& model, SolveStatus* status, double timeout) {
    GroundProblem gp = ground(model);
    SolveOptions options;
    options.max_models = 0;
    options.timeout_seconds = timeout;
    SolveResult r = solve(gp, options);
    if (status) *status = r.status;
    ModelSet out;
    for (const ModelResult& m : r.models) out.insert(corpus::canonical(m.assignments, *model.vocab));
    return out;
}

ModelSet oracle_models(const CompiledModel& model) {
    ModelSet out;
    for (const Assignment& a : brute_force_models(model.theory, model.structure)) {
        out.insert(corpus::canonical(a, *model.vocab));
    }
    return out;
}

Comparison compare_with_oracle(const CompiledModel& model) {
    Comparison c;
    std::vector<Assignment> expected = brute_force_models(model.theory, model.structure);
    GroundProblem gp = ground(model);
    if (!model.task.optimizing()) {
        SolveOptions options;
        options.max_models = 0;
        SolveResult r = solve(gp, options);
        ModelSet got;
        for (const ModelResult& m : r.models) got.insert(corpus::canonical(m.assignments, *model.vocab));
        ModelSet want;
        for (const Assignment& a : expected) want.insert(corpus::canonical(a, *model.vocab));
        c.agree = got == want && got.size() == r.models.size() &&
                  r.status == (want.empty() ? SolveStatus::Unsat : SolveStatus::Sat);
        c.detail = "solver " + std::to_string(got.size()) + " models (" + std::string(to_string(r.status)) +
                   "), oracle " + std::to_string(want.size());
        return c;
    }
    SolveResult r = solve(gp);
    if (expected.empty()) {
        c.agree = r.status == SolveStatus::Unsat;
        c.detail = "oracle infeasible, solver " + std::string(to_string(r.status));
        return c;
    }
    const bool minimize = model.task.mode == Task::Mode::Minimize;
    std::optional<Value> best;
    for (const Assignment& a : expected) {
        Value v = evaluate_objective(model.theory, model.structure, a, model.task.objective);
        if (!best || (minimize ? v < *best : v > *best)) best = v;
    }
    c.agree = r.status == SolveStatus::Optimum && r.objective && *r.objective == *best;
    c.detail = "oracle optimum " + best->to_string() + ", solver " + std::string(to_string(r.status)) + " " +
               (r.objective ? r.objective->to_string() : "none");
    return c;
}

}  // namespace cdmn::testing
