// probterm: prove or refute (positive) almost-sure termination of
// single-loop polynomial probabilistic programs, or estimate termination
// statistics by simulation.

#include "probterm/report.hpp"
#include "probterm/simulator.hpp"
#include "probterm/suite.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace probterm;

AnalysisOptions options_with_timeout(double seconds) {
    AnalysisOptions opts;
    opts.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(seconds));
    return opts;
}

int run_analyze(const std::vector<std::string>& paths, bool json, bool canonical,
                double timeout) {
    int exit_code = 0;
    for (const auto& path : paths) {
        try {
            AnalysisReport report = analyze_file(path, options_with_timeout(timeout));
            if (json)
                std::cout << report.to_json(!canonical).dump(2) << "\n";
            else
                std::cout << report.human(!canonical) << "\n";
        } catch (const InternalSoundnessError& e) {
            std::cerr << path << ": internal error: " << e.what() << "\n";
            return 3;
        } catch (const std::exception& e) {
            std::cerr << path << ": " << e.what() << "\n";
            exit_code = std::max(exit_code, 2);
        }
    }
    return exit_code;
}

int run_suite_cmd(const std::string& manifest, double timeout, bool json) {
    SuiteResult result;
    try {
        result = run_suite(parse_manifest(manifest), timeout);
    } catch (const InternalSoundnessError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (json) {
        Json rows = Json::array();
        for (const auto& r : result.rows) {
            Json row;
            row["program"] = r.entry.path;
            row["expected_past"] = r.entry.expected_past;
            row["expected_ast"] = r.entry.expected_ast;
            row["past"] = r.report.past;
            row["ast"] = r.report.ast;
            row["agreement"] = r.agreement == SuiteAgreement::Exact
                                   ? "exact"
                                   : (r.agreement == SuiteAgreement::Disagree ? "disagree"
                                                                              : "sound-maybe");
            row["seconds"] = r.seconds;
            row["timed_out"] = r.report.timed_out;
            if (!r.error.empty()) row["error"] = r.error;
            rows.push_back(std::move(row));
        }
        Json doc;
        doc["rows"] = rows;
        doc["exact"] = result.exact;
        doc["sound_maybe"] = result.sound_maybe;
        doc["disagreements"] = result.disagreements;
        std::cout << doc.dump(2) << "\n";
    } else {
        print_suite(result, std::cout);
    }
    return result.ok() ? 0 : 1;
}

int run_simulate(const std::string& path, const std::vector<std::string>& binds, uint64_t runs,
                 uint64_t max_steps, uint64_t seed, bool json) {
    try {
        SimConfig cfg;
        cfg.runs = runs;
        cfg.max_steps = max_steps;
        cfg.seed = seed;
        for (const auto& b : binds) {
            auto eq = b.find('=');
            if (eq == std::string::npos)
                throw SimulationError("--bind expects name=value, got '" + b + "'");
            cfg.bindings[b.substr(0, eq)] = parse_rational(b.substr(eq + 1));
        }
        ProgramSpec prog = load_program(read_file(path));
        SimReport report = simulate(prog, cfg);
        if (json) {
            Json j;
            j["program"] = path;
            j["runs"] = report.runs;
            j["seed"] = seed;
            j["max_steps"] = max_steps;
            j["terminated"] = report.terminated;
            j["termination_rate"] = to_double(report.termination_rate());
            j["termination_rate_exact"] = report.termination_rate().str();
            j["rate_stderr"] = report.rate_stderr();
            j["mean_steps_terminated"] = report.mean_steps_terminated();
            j["censored"] = report.censored;
            j["censored_overflow"] = report.censored_overflow;
            Json hist = Json::object();
            for (size_t b = 0; b < report.histogram.size(); ++b)
                if (report.histogram[b]) hist[std::to_string(b)] = report.histogram[b];
            j["steps_log2_histogram"] = hist;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "program: " << path << "\n"
                      << "runs: " << report.runs << " (seed " << seed << ", cap " << max_steps
                      << " steps)\n"
                      << "terminated: " << report.terminated << "\n"
                      << "termination_rate: " << to_double(report.termination_rate()) << " ("
                      << report.termination_rate().str() << ")\n"
                      << "rate_stderr: " << report.rate_stderr() << "\n"
                      << "mean_steps_terminated: " << report.mean_steps_terminated() << "\n"
                      << "censored: " << report.censored << "\n"
                      << "censored_overflow: " << report.censored_overflow << "\n";
            std::cout << "steps histogram (log2 buckets):\n";
            for (size_t b = 0; b < report.histogram.size(); ++b) {
                if (!report.histogram[b]) continue;
                uint64_t lo = b == 0 ? 0 : (1ull << (b - 1));
                uint64_t hi = b == 0 ? 0 : (1ull << b) - 1;
                std::cout << "  [" << lo << ", " << hi << "]: " << report.histogram[b] << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probterm: termination analysis for probabilistic loops"};
    app.require_subcommand(0, 1);

    std::vector<std::string> benchmarks;
    bool json = false, canonical = false;
    double timeout = 50.0;
    app.add_option("--benchmarks", benchmarks, "program files to analyze");
    app.add_flag("--json", json, "machine-readable output");
    app.add_flag("--canonical", canonical, "omit timing fields (stable across runs)");
    app.add_option("--timeout", timeout, "per-program timeout in seconds")->check(CLI::PositiveNumber);

    auto* suite = app.add_subcommand("suite", "run a benchmark manifest and compare verdicts");
    std::string manifest;
    double suite_timeout = 50.0;
    bool suite_json = false;
    suite->add_option("manifest", manifest, "manifest file: <program> <PAST> <AST> per line")
        ->required();
    suite->add_option("--timeout", suite_timeout, "per-program timeout in seconds")
        ->check(CLI::PositiveNumber);
    suite->add_flag("--json", suite_json, "machine-readable output");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of termination behavior");
    std::string sim_path;
    std::vector<std::string> binds;
    uint64_t runs = 1000, max_steps = 10000, seed = 0;
    sim->add_option("program", sim_path, "program file")->required();
    sim->add_option("--bind", binds, "binding name=value for a symbolic constant");
    sim->add_option("--runs", runs, "number of trials")->check(CLI::PositiveNumber);
    sim->add_option("--max-steps", max_steps, "censoring step cap")->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_flag("--json", json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (suite->parsed()) return run_suite_cmd(manifest, suite_timeout, suite_json);
    if (sim->parsed()) return run_simulate(sim_path, binds, runs, max_steps, seed, json);
    if (benchmarks.empty()) {
        std::cerr << app.help() << "\n";
        return 2;
    }
    return run_analyze(benchmarks, json, canonical, timeout);
}
