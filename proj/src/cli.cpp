#include "iotforge/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#ifdef __unix__
#include <unistd.h>
#endif

#include "iotforge/explore.hpp"
#include "iotforge/formatter.hpp"
#include "iotforge/json_io.hpp"
#include "iotforge/parser.hpp"
#include "iotforge/rta.hpp"
#include "iotforge/thingml.hpp"
#include "iotforge/validator.hpp"

namespace iotforge::cli {

namespace {

const char* kUsage =
    "usage: iotforge <command> [options]\n"
    "\n"
    "commands:\n"
    "  validate <file> [--format json|text] [--fix] [--emit-model PATH]\n"
    "      check the model against the rule catalog (V001..V012)\n"
    "  analyze <file> [--processor NAME] [--wcet-margin FLOAT] [--format json|text]\n"
    "          [--out PATH]\n"
    "      fixed-priority response-time analysis per processor\n"
    "  simulate <file> --steps N --seed S\n"
    "      random run of the composed state machines\n"
    "  explore <file> [--queue-bound K] [--max-configs M] [--format json|text]\n"
    "      exhaustive bounded search for deadlocks and queue overflows\n"
    "  generate <file> --target thingml --out-dir DIR\n"
    "      emit ThingML-subset code\n"
    "\n"
    "exit codes: 0 ok, 1 validation errors, 2 negative verdict, 3 usage/I-O error\n"
    "environment: IOTFORGE_COLOR=0 disables color\n";

struct ParsedArgs {
    std::string command;
    std::string file;
    std::map<std::string, std::string> flags;
};

const std::map<std::string, std::set<std::string>>& allowed_flags() {
    static const std::map<std::string, std::set<std::string>> flags = {
        {"validate", {"--format", "--fix", "--emit-model"}},
        {"analyze", {"--processor", "--wcet-margin", "--format", "--out"}},
        {"simulate", {"--steps", "--seed"}},
        {"explore", {"--queue-bound", "--max-configs", "--format"}},
        {"generate", {"--target", "--out-dir"}},
    };
    return flags;
}

bool flag_takes_value(const std::string& flag) { return flag != "--fix"; }

bool color_enabled(std::ostream& out) {
    if (&out != &std::cout) return false;
    const char* env = std::getenv("IOTFORGE_COLOR");
    if (env && std::string(env) == "0") return false;
#ifdef __unix__
    return isatty(STDOUT_FILENO) != 0;
#else
    return false;
#endif
}

std::string severity_label(const Diagnostic& d, bool color) {
    std::string label = d.severity == Severity::Error ? "error" : "warning";
    if (!color) return label;
    return (d.severity == Severity::Error ? "\033[31m" : "\033[33m") + label + "\033[0m";
}

void print_diagnostics_text(const std::vector<Diagnostic>& diags, std::ostream& out, bool color) {
    for (const auto& d : diags) {
        out << d.span.file << ':' << d.span.start_line << ':' << d.span.start_col << ": "
            << severity_label(d, color) << '[' << d.code << "]: " << d.message << '\n';
    }
}

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    out << content;
    return true;
}

// the table points into the model, so the model needs a stable address
struct LoadedModel {
    std::unique_ptr<IoTModel> model;
    SymbolTable table;
    std::vector<Diagnostic> warnings;
};

// Parse + validate pipeline shared by all commands. Returns nullopt after
// printing diagnostics (parse or validation errors → exit 1 by contract).
std::optional<LoadedModel> load_validated(const std::string& path, bool analysis_requested,
                                          const std::string& format, std::ostream& out,
                                          std::ostream& err) {
    auto source = read_file(path, err);
    if (!source) return std::nullopt;
    ParseResult parsed = parse_model(*source, path);
    if (!parsed.ok()) {
        if (format == "json") out << diagnostics_to_json(parsed.diagnostics);
        else print_diagnostics_text(parsed.diagnostics, out, color_enabled(out));
        return std::nullopt;
    }
    LoadedModel loaded;
    loaded.model = std::make_unique<IoTModel>(std::move(*parsed.model));
    ValidationOptions options;
    options.analysis_requested = analysis_requested;
    auto diags = validate(*loaded.model, options);
    if (has_errors(diags)) {
        if (format == "json") out << diagnostics_to_json(diags);
        else print_diagnostics_text(diags, out, color_enabled(out));
        return std::nullopt;
    }
    loaded.warnings = std::move(diags);
    auto built = build_symbol_table(*loaded.model);
    loaded.table = std::move(built.table);
    return loaded;
}

int cmd_validate(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    std::string format = args.flags.count("--format") ? args.flags.at("--format") : "text";
    auto source = read_file(args.file, err);
    if (!source) return kExitUsage;
    ParseResult parsed = parse_model(*source, args.file);
    std::vector<Diagnostic> diags;
    if (!parsed.ok()) {
        diags = parsed.diagnostics;
    } else {
        diags = validate(*parsed.model);
    }
    if (format == "json") out << diagnostics_to_json(diags);
    else print_diagnostics_text(diags, out, color_enabled(out));
    bool failed = has_errors(diags);
    if (parsed.ok() && args.flags.count("--fix")) {
        IoTModel fixed = synthesize_missing_state_events(*parsed.model);
        std::filesystem::path p(args.file);
        std::filesystem::path sibling = p.parent_path() / (p.stem().string() + ".fixed" +
                                                           p.extension().string());
        if (!write_file(sibling.string(), format_model(fixed), err)) return kExitUsage;
        if (format != "json") out << "wrote fixed model to " << sibling.string() << '\n';
    }
    if (parsed.ok() && !failed && args.flags.count("--emit-model")) {
        auto built = build_symbol_table(*parsed.model);
        if (!write_file(args.flags.at("--emit-model"), model_to_json(built.table), err))
            return kExitUsage;
    }
    if (format != "json" && !failed) {
        size_t warning_count = diags.size();
        out << "model OK";
        if (warning_count > 0) out << " (" << warning_count << " warning(s))";
        out << '\n';
    }
    return failed ? kExitValidation : kExitOk;
}

int cmd_analyze(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    std::string format = args.flags.count("--format") ? args.flags.at("--format") : "text";
    double margin = 1.0;
    if (args.flags.count("--wcet-margin")) {
        try {
            margin = std::stod(args.flags.at("--wcet-margin"));
        } catch (const std::exception&) {
            err << "error: --wcet-margin expects a number\n" << kUsage;
            return kExitUsage;
        }
        if (margin < 1.0) {
            err << "error: --wcet-margin must be >= 1.0\n";
            return kExitUsage;
        }
    }
    auto loaded = load_validated(args.file, true, format, out, err);
    if (!loaded) return kExitValidation;

    std::vector<std::string> processors;
    if (args.flags.count("--processor")) {
        const std::string& name = args.flags.at("--processor");
        if (!loaded->table.find_processor(name)) {
            err << "error: unknown processor '" << name << "'\n";
            return kExitUsage;
        }
        processors.push_back(name);
    } else {
        for (const auto& proc : loaded->model->hardware) processors.push_back(proc.name);
    }

    AnalyzeOptions options;
    options.wcet_margin = margin;
    std::vector<ScheduleReport> reports;
    for (const auto& name : processors)
        reports.push_back(analyze_processor(loaded->table, name, options));

    std::ostringstream rendered;
    if (format == "json") {
        rendered << "[";
        for (size_t i = 0; i < reports.size(); ++i) {
            std::string one = schedule_report_to_json(reports[i]);
            if (!one.empty() && one.back() == '\n') one.pop_back();
            rendered << (i ? ",\n" : "\n") << one;
        }
        rendered << "\n]\n";
    } else {
        for (const auto& report : reports) rendered << schedule_report_to_text(report);
    }
    if (args.flags.count("--out")) {
        if (!write_file(args.flags.at("--out"), rendered.str(), err)) return kExitUsage;
    } else {
        out << rendered.str();
    }

    for (const auto& report : reports)
        if (report.verdict != Verdict::Schedulable) return kExitNegativeVerdict;
    return kExitOk;
}

int cmd_simulate(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    if (!args.flags.count("--steps") || !args.flags.count("--seed")) {
        err << "error: simulate requires --steps and --seed\n" << kUsage;
        return kExitUsage;
    }
    int steps = 0;
    std::uint64_t seed = 0;
    try {
        steps = std::stoi(args.flags.at("--steps"));
        seed = std::stoull(args.flags.at("--seed"));
    } catch (const std::exception&) {
        err << "error: --steps and --seed expect integers\n" << kUsage;
        return kExitUsage;
    }
    auto loaded = load_validated(args.file, false, "text", out, err);
    if (!loaded) return kExitValidation;
    BehaviorSim sim(loaded->table);
    Trace trace = sim.run_random(steps, seed);
    out << trace_to_text(trace);
    if (trace.terminal_reason == "overflow" || trace.deadlocked) return kExitNegativeVerdict;
    return kExitOk;
}

int cmd_explore(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    std::string format = args.flags.count("--format") ? args.flags.at("--format") : "text";
    int queue_bound = 4;
    int max_configs = 100000;
    try {
        if (args.flags.count("--queue-bound")) queue_bound = std::stoi(args.flags.at("--queue-bound"));
        if (args.flags.count("--max-configs")) max_configs = std::stoi(args.flags.at("--max-configs"));
    } catch (const std::exception&) {
        err << "error: --queue-bound and --max-configs expect integers\n" << kUsage;
        return kExitUsage;
    }
    if (queue_bound < 1 || max_configs < 1) {
        err << "error: --queue-bound and --max-configs must be positive\n";
        return kExitUsage;
    }
    auto loaded = load_validated(args.file, false, format, out, err);
    if (!loaded) return kExitValidation;
    SimOptions options;
    options.queue_bound = queue_bound;
    BehaviorSim sim(loaded->table, options);
    ExplorationReport report = explore(sim, max_configs);
    if (format == "json") out << exploration_report_to_json(report);
    else out << exploration_report_to_text(report);
    if (!report.deadlocks.empty() || !report.overflows.empty()) return kExitNegativeVerdict;
    return kExitOk;
}

int cmd_generate(const ParsedArgs& args, std::ostream& out, std::ostream& err) {
    if (!args.flags.count("--target") || args.flags.at("--target") != "thingml") {
        err << "error: generate requires --target thingml\n" << kUsage;
        return kExitUsage;
    }
    if (!args.flags.count("--out-dir")) {
        err << "error: generate requires --out-dir\n" << kUsage;
        return kExitUsage;
    }
    auto loaded = load_validated(args.file, false, "text", out, err);
    if (!loaded) return kExitValidation;
    thingml::Document doc = thingml::map_model(loaded->table);
    auto files = thingml::emit(doc);
    std::filesystem::path base(args.flags.at("--out-dir"));
    for (const auto& [relative, content] : files) {
        std::filesystem::path target = base / relative;
        if (!write_file(target.string(), content, err)) return kExitUsage;
        out << "wrote " << target.generic_string() << '\n';
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << kUsage;
        return kExitUsage;
    }
    ParsedArgs parsed;
    parsed.command = args[0];
    auto allowed_it = allowed_flags().find(parsed.command);
    if (allowed_it == allowed_flags().end()) {
        err << "error: unknown command '" << parsed.command << "'\n" << kUsage;
        return kExitUsage;
    }
    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg.rfind("--", 0) == 0) {
            if (!allowed_it->second.count(arg)) {
                err << "error: unknown option '" << arg << "' for " << parsed.command << "\n"
                    << kUsage;
                return kExitUsage;
            }
            if (flag_takes_value(arg)) {
                if (i + 1 >= args.size()) {
                    err << "error: option '" << arg << "' expects a value\n" << kUsage;
                    return kExitUsage;
                }
                parsed.flags[arg] = args[++i];
            } else {
                parsed.flags[arg] = "";
            }
        } else if (parsed.file.empty()) {
            parsed.file = arg;
        } else {
            err << "error: unexpected argument '" << arg << "'\n" << kUsage;
            return kExitUsage;
        }
    }
    if (parsed.file.empty()) {
        err << "error: " << parsed.command << " requires a model file\n" << kUsage;
        return kExitUsage;
    }
    if (parsed.flags.count("--format")) {
        const std::string& format = parsed.flags.at("--format");
        if (format != "json" && format != "text") {
            err << "error: --format expects json or text\n" << kUsage;
            return kExitUsage;
        }
    }

    try {
        if (parsed.command == "validate") return cmd_validate(parsed, out, err);
        if (parsed.command == "analyze") return cmd_analyze(parsed, out, err);
        if (parsed.command == "simulate") return cmd_simulate(parsed, out, err);
        if (parsed.command == "explore") return cmd_explore(parsed, out, err);
        return cmd_generate(parsed, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace iotforge::cli
