// Benchmark-suite harness: runs every manifest entry under a per-program
// timeout and compares against the expected classification. A Maybe answer
// is never a conflict (the tool declined, soundly); a Yes/No flip is.
#pragma once

#include "probterm/report.hpp"

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace probterm {

struct ManifestEntry {
    std::string path; // resolved against the manifest's directory
    std::string expected_past;
    std::string expected_ast;
};

inline std::vector<ManifestEntry> parse_manifest(const std::string& manifest_path) {
    std::string text = read_file(manifest_path);
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::vector<ManifestEntry> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        ManifestEntry e;
        if (!(ls >> e.path)) continue; // blank
        if (!(ls >> e.expected_past >> e.expected_ast))
            throw std::runtime_error(manifest_path + ":" + std::to_string(lineno) +
                                     ": expected '<program> <PAST> <AST>'");
        for (const std::string* s : {&e.expected_past, &e.expected_ast})
            if (*s != "Yes" && *s != "No" && *s != "Maybe")
                throw std::runtime_error(manifest_path + ":" + std::to_string(lineno) +
                                         ": verdicts must be Yes, No or Maybe");
        e.path = (base / e.path).string();
        out.push_back(std::move(e));
    }
    return out;
}

enum class SuiteAgreement { Exact, SoundMaybe, Disagree };

struct SuiteRow {
    ManifestEntry entry;
    AnalysisReport report;
    SuiteAgreement agreement = SuiteAgreement::SoundMaybe;
    double seconds = 0.0;
    std::string error; // parse/load failure
};

inline SuiteAgreement judge(const std::string& expected, const std::string& got,
                            const std::string& expected2, const std::string& got2) {
    auto conflict = [](const std::string& e, const std::string& g) {
        return (e == "Yes" && g == "No") || (e == "No" && g == "Yes");
    };
    if (conflict(expected, got) || conflict(expected2, got2)) return SuiteAgreement::Disagree;
    if (expected == got && expected2 == got2) return SuiteAgreement::Exact;
    return SuiteAgreement::SoundMaybe;
}

struct SuiteResult {
    std::vector<SuiteRow> rows;
    int exact = 0, sound_maybe = 0, disagreements = 0;

    bool ok() const { return disagreements == 0; }
};

inline SuiteResult run_suite(const std::vector<ManifestEntry>& entries, double timeout_seconds,
                             AnalysisOptions base_opts = {}) {
    SuiteResult result;
    for (const auto& e : entries) {
        SuiteRow row;
        row.entry = e;
        auto t0 = std::chrono::steady_clock::now();
        AnalysisOptions opts = base_opts;
        opts.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(timeout_seconds));
        try {
            row.report = analyze_file(e.path, opts);
        } catch (const std::exception& err) {
            row.error = err.what();
            row.report.program = e.path;
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.agreement = judge(e.expected_past, row.report.past, e.expected_ast, row.report.ast);
        switch (row.agreement) {
            case SuiteAgreement::Exact: result.exact++; break;
            case SuiteAgreement::SoundMaybe: result.sound_maybe++; break;
            case SuiteAgreement::Disagree: result.disagreements++; break;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

inline void print_suite(const SuiteResult& result, std::ostream& os) {
    size_t width = 8;
    for (const auto& r : result.rows)
        width = std::max(width, std::filesystem::path(r.entry.path).filename().string().size());
    os << std::left << std::setw(static_cast<int>(width) + 2) << "program"
       << std::setw(12) << "expected" << std::setw(12) << "got" << std::setw(8) << "agree"
       << "time\n";
    for (const auto& r : result.rows) {
        std::string name = std::filesystem::path(r.entry.path).filename().string();
        std::string expected = r.entry.expected_past + "/" + r.entry.expected_ast;
        std::string got = r.report.past + "/" + r.report.ast;
        if (r.report.timed_out) got += " (timeout)";
        if (!r.error.empty()) got = "error";
        const char* agree = r.agreement == SuiteAgreement::Exact
                                ? "yes"
                                : (r.agreement == SuiteAgreement::Disagree ? "NO" : "maybe");
        std::ostringstream t;
        t << std::fixed << std::setprecision(2) << r.seconds << "s";
        os << std::left << std::setw(static_cast<int>(width) + 2) << name << std::setw(12)
           << expected << std::setw(12) << got << std::setw(8) << agree << t.str() << "\n";
        if (!r.error.empty()) os << "    error: " << r.error << "\n";
    }
    os << "summary: " << result.exact << " exact, " << result.sound_maybe
       << " sound-but-Maybe, " << result.disagreements << " disagreement(s)\n";
}

} // namespace probterm
