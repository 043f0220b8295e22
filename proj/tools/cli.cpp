#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cdmn/emit.hpp"
#include "cdmn/error.hpp"
#include "cdmn/grounding.hpp"
#include "cdmn/oracle.hpp"
#include "corpus.hpp"

#ifndef CDMN_DEFAULT_CORPUS_DIR
#define CDMN_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace cdmn::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string model;
    std::optional<std::size_t> models;
    std::optional<double> timeout;
    std::string format = "text";
    std::string emit;
    std::string corpus_dir = CDMN_DEFAULT_CORPUS_DIR;
    bool regen_oracle = false;
};

void print_diagnostics(const std::vector<Diagnostic>& diags, const std::string& source, std::ostream& err) {
    for (const Diagnostic& d : diags) err << d.format(source) << '\n';
}

/// Compiles a model file, printing diagnostics. Returns nullopt and sets `code` on failure.
std::optional<CompiledModel> load(const RunConfig& cfg, std::ostream& err, int& code) {
    const std::string name = fs::path(cfg.model).filename().string();
    std::string source;
    try {
        source = corpus::read_file(cfg.model);
    } catch (const Error& e) {
        err << e.diagnostic().format() << '\n';
        code = kIo;
        return std::nullopt;
    }
    try {
        return compile_source(source, name);
    } catch (const CompileError& e) {
        print_diagnostics(e.diagnostics(), name, err);
        err << e.diagnostics().size() << " diagnostics\n";
    } catch (const Error& e) {
        print_diagnostics({e.diagnostic()}, name, err);
        err << "1 diagnostics\n";
    }
    code = kFailed;
    return std::nullopt;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int code = kOk;
    if (!load(cfg, err, code)) return code;
    out << "0 diagnostics\n";
    return kOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int code = kOk;
    std::optional<CompiledModel> model = load(cfg, err, code);
    if (!model) return code;
    const Vocabulary& vocab = *model->vocab;
    SolveResult result;
    try {
        GroundProblem gp = ground(*model);
        for (const Diagnostic& d : gp.diagnostics()) err << "warning: " << d.format(cfg.model) << '\n';
        SolveOptions options;
        options.max_models = cfg.models;
        options.timeout_seconds = cfg.timeout.value_or(0);
        result = solve(gp, options);
    } catch (const Error& e) {
        err << e.diagnostic().format(cfg.model) << '\n';
        return kFailed;
    }

    if (cfg.format == "json") {
        out << emit_result_json(result, vocab) << '\n';
    } else {
        std::vector<const ModelResult*> shown;
        if (result.objective) {
            if (!result.models.empty()) shown.push_back(&result.models.back());
        } else {
            for (const ModelResult& m : result.models) shown.push_back(&m);
        }
        for (std::size_t i = 0; i < shown.size(); ++i) {
            if (i) out << "---\n";
            for (const std::string& line : model_lines(*shown[i], vocab)) out << line << '\n';
        }
        out << "status: " << to_string(result.status);
        if (result.status == SolveStatus::Optimum) out << " (objective=" << result.objective->to_string() << ")";
        out << '\n';
    }
    switch (result.status) {
        case SolveStatus::Sat:
        case SolveStatus::Optimum: return kOk;
        case SolveStatus::Unsat: return kFailed;
        case SolveStatus::Limit: return kLimit;
    }
    return kFailed;
}

int cmd_ground(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int code = kOk;
    std::optional<CompiledModel> model = load(cfg, err, code);
    if (!model) return code;
    std::string text;
    try {
        GroundProblem gp = ground(*model);
        text = emit_json(*model, &gp);
    } catch (const Error& e) {
        err << e.diagnostic().format(cfg.model) << '\n';
        return kFailed;
    }
    if (cfg.emit.empty()) {
        out << text << '\n';
        return kOk;
    }
    std::ofstream file(cfg.emit, std::ios::binary);
    if (!file || !(file << text << '\n')) {
        err << "Io: cannot write " << cfg.emit << '\n';
        return kIo;
    }
    return kOk;
}

int cmd_corpus(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> models;
    try {
        models = corpus::list_models(cfg.corpus_dir);
    } catch (const Error& e) {
        err << e.diagnostic().format() << '\n';
        return kIo;
    }

    if (cfg.regen_oracle) {
        for (const fs::path& p : models) {
            const fs::path target = corpus::expectation_path(p);
            try {
                CompiledModel model = compile_source(corpus::read_file(p), p.filename().string());
                corpus::Expectation e = corpus::oracle_expectation(model);
                if (fs::exists(target)) {
                    corpus::Expectation old = corpus::load_expectation(target);
                    e.timeout = old.timeout;
                    e.note = old.note;
                }
                corpus::save_expectation(target, e);
                out << "regenerated " << target.filename().string() << '\n';
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OracleTooLarge || !fs::exists(target)) {
                    err << p.filename().string() << ": " << e.what() << '\n';
                    return kFailed;
                }
                out << "kept " << target.filename().string() << " (too large for the oracle)\n";
            } catch (const CompileError& e) {
                err << p.filename().string() << ": " << e.what() << '\n';
                return kFailed;
            }
        }
    }

    std::size_t width = 5;
    for (const fs::path& p : models) width = std::max(width, p.stem().string().size());
    std::size_t failed = 0;
    for (const fs::path& p : models) {
        corpus::EntryResult r;
        const fs::path expected = corpus::expectation_path(p);
        if (!fs::exists(expected)) {
            r.name = p.stem().string();
            r.detail = "missing " + expected.filename().string();
        } else {
            try {
                corpus::Expectation e = corpus::load_expectation(expected);
                if (cfg.timeout) e.timeout = *cfg.timeout;
                r = corpus::run_entry(p, e);
            } catch (const Error& e) {
                r.name = p.stem().string();
                r.detail = e.what();
            }
        }
        if (!r.pass) ++failed;
        out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.pass ? "PASS" : "FAIL")
            << "  " << r.detail << '\n';
    }
    out << (models.size() - failed) << "/" << models.size() << " passed\n";
    return failed == 0 ? kOk : kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile, ground and solve tabular constraint models", "cdmn"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_model = [&](CLI::App* sub) { sub->add_option("model", cfg.model, "Model file (.cdmn)")->required(); };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "Validate a model and print its diagnostics");
    add_model(check);

    CLI::App* solve_cmd = app.add_subcommand("solve", "Enumerate models or optimize");
    add_model(solve_cmd);
    solve_cmd->add_option("--models", cfg.models, "Number of models to enumerate")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--timeout", cfg.timeout, "Time budget in seconds")->check(CLI::PositiveNumber);
    add_format(solve_cmd);

    CLI::App* ground_cmd = app.add_subcommand("ground", "Write the ground problem as JSON");
    add_model(ground_cmd);
    ground_cmd->add_option("--emit", cfg.emit, "Output path (default: standard output)");

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "Run the bundled corpus against its expectations");
    corpus_cmd->add_option("dir", cfg.corpus_dir, "Corpus directory");
    corpus_cmd->add_flag("--regen-oracle", cfg.regen_oracle, "Recompute expectations by brute force first");
    corpus_cmd->add_option("--timeout", cfg.timeout, "Per-model time budget in seconds")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kIo;
    }

    if (*check) return cmd_check(cfg, out, err);
    if (*solve_cmd) return cmd_solve(cfg, out, err);
    if (*ground_cmd) return cmd_ground(cfg, out, err);
    return cmd_corpus(cfg, out, err);
}

}  // namespace cdmn::cli
