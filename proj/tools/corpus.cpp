#include "corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "cdmn/emit.hpp"
#include "cdmn/error.hpp"
#include "cdmn/grounding.hpp"
#include "cdmn/oracle.hpp"
#include "json.hpp"

namespace cdmn::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view kind_name(Expectation::Kind k) {
    switch (k) {
        case Expectation::Kind::Models: return "models";
        case Expectation::Kind::Optimum: return "optimum";
        case Expectation::Kind::Bound: return "bound";
    }
    return "?";
}

}  // namespace

CanonicalModel canonical(const Assignment& assignment, const Vocabulary& vocab) {
    CanonicalModel out;
    for (const auto& [sym, table] : assignment) {
        for (const auto& [args, v] : table) out[instance_name(vocab, sym, args)] = v.to_string();
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, 0, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path expectation_path(const fs::path& model_path) {
    fs::path p = model_path;
    p.replace_extension(".expected.json");
    return p;
}

std::vector<fs::path> list_models(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, 0, "corpus directory not found: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".cdmn") out.push_back(entry.path());
    }
    if (out.empty()) throw Error(ErrorCode::Io, 0, "corpus directory has no .cdmn models: " + dir.string());
    std::sort(out.begin(), out.end());
    return out;
}

Expectation load_expectation(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, 0, path.string() + ": " + e.what());
    }
    Expectation e;
    const std::string kind = doc.value("kind", "models");
    if (kind == "optimum") {
        e.kind = Expectation::Kind::Optimum;
    } else if (kind == "bound") {
        e.kind = Expectation::Kind::Bound;
    } else if (kind != "models") {
        throw Error(ErrorCode::Io, 0, path.string() + ": unknown expectation kind '" + kind + "'");
    }
    if (doc.contains("objective")) e.objective = doc["objective"].get<std::string>();
    e.timeout = doc.value("timeout", 30.0);
    e.note = doc.value("note", "");
    for (const auto& m : doc.value("models", json::array())) e.models.insert(m.get<CanonicalModel>());
    return e;
}

void save_expectation(const fs::path& path, const Expectation& e) {
    json doc = {{"kind", std::string(kind_name(e.kind))}, {"timeout", e.timeout}};
    if (!e.note.empty()) doc["note"] = e.note;
    if (e.objective) doc["objective"] = *e.objective;
    if (e.kind == Expectation::Kind::Models) {
        json models = json::array();
        for (const CanonicalModel& m : e.models) models.push_back(m);
        doc["models"] = models;
        doc["model_count"] = e.models.size();
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, 0, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

Expectation oracle_expectation(const CompiledModel& model) {
    Expectation e;
    std::vector<Assignment> models = brute_force_models(model.theory, model.structure);
    if (!model.task.optimizing() || models.empty()) {
        for (const Assignment& a : models) e.models.insert(canonical(a, *model.vocab));
        return e;
    }
    e.kind = Expectation::Kind::Optimum;
    std::optional<Value> best;
    const bool minimize = model.task.mode == Task::Mode::Minimize;
    for (const Assignment& a : models) {
        Value v = evaluate_objective(model.theory, model.structure, a, model.task.objective);
        if (!best || (minimize ? v < *best : v > *best)) best = v;
    }
    e.objective = best->to_string();
    return e;
}

EntryResult run_entry(const fs::path& model_path, const Expectation& expected) {
    EntryResult r;
    r.name = model_path.stem().string();
    const auto start = std::chrono::steady_clock::now();
    try {
        CompiledModel model = compile_source(read_file(model_path), model_path.filename().string());
        GroundProblem gp = ground(model);
        SolveOptions options;
        options.timeout_seconds = expected.timeout;
        if (expected.kind == Expectation::Kind::Models) options.max_models = 0;
        SolveResult result = solve(gp, options);

        switch (expected.kind) {
            case Expectation::Kind::Models: {
                std::set<CanonicalModel> got;
                for (const ModelResult& m : result.models) got.insert(canonical(m.assignments, *model.vocab));
                if (result.status == SolveStatus::Limit) {
                    r.detail = "timed out after " + std::to_string(got.size()) + " models";
                } else if (got.size() != result.models.size()) {
                    r.detail = "solver repeated a model";
                } else if (got != expected.models) {
                    std::size_t missing = 0;
                    for (const CanonicalModel& m : expected.models) missing += got.count(m) ? 0 : 1;
                    r.detail = std::to_string(got.size()) + " models, expected " +
                               std::to_string(expected.models.size()) + " (" + std::to_string(missing) +
                               " missing)";
                } else {
                    r.pass = true;
                    r.detail = got.empty() ? "UNSAT as expected" : std::to_string(got.size()) + " models";
                }
                break;
            }
            case Expectation::Kind::Optimum: {
                const std::string got = result.objective ? result.objective->to_string() : "none";
                r.pass = result.status == SolveStatus::Optimum && got == expected.objective;
                r.detail = std::string(to_string(result.status)) + " objective=" + got + ", expected " +
                           expected.objective.value_or("?");
                break;
            }
            case Expectation::Kind::Bound: {
                if (!result.objective) {
                    r.detail = std::string(to_string(result.status)) + " without an incumbent";
                    break;
                }
                auto limit = Rational::parse(expected.objective.value_or(""));
                const Rational& got = result.objective->number();
                const bool minimize = model.task.mode == Task::Mode::Minimize;
                r.pass = limit && (minimize ? got <= *limit : got >= *limit);
                r.detail = std::string(to_string(result.status)) + " objective=" + got.to_string() +
                           ", baseline " + expected.objective.value_or("?");
                break;
            }
        }
    } catch (const CompileError& e) {
        r.detail = e.what();
    } catch (const Error& e) {
        r.detail = e.what();
    } catch (const std::exception& e) {
        r.detail = std::string("internal error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace cdmn::corpus
