// Analysis reports: human-readable blocks and the machine-readable JSON
// contract. The JSON document has the fixed shape
//   {program, past, ast, witnesses[], assumptions[], notes[], timed_out,
//    phases{parse_ms, moments_ms, bounds_ms, rules_ms}}
// and the `phases` object is omitted in canonical mode so repeated runs
// compare byte-identical.
#pragma once

#include "probterm/options.hpp"
#include "probterm/program.hpp"
#include "probterm/rules.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace probterm {

using Json = nlohmann::ordered_json;

struct WitnessRecord {
    std::string rule;
    std::string applicable;
    std::string certified;
    std::vector<std::pair<std::string, std::string>> details;
    std::string note;

    friend bool operator==(const WitnessRecord&, const WitnessRecord&) = default;
};

struct AnalysisReport {
    std::string program;
    std::string past = "Maybe";
    std::string ast = "Maybe";
    std::vector<WitnessRecord> witnesses;
    std::vector<std::string> assumptions;
    std::vector<std::string> notes;
    bool timed_out = false;
    PhaseTimes phases;

    static AnalysisReport from_verdict(const std::string& program, const Verdict& v,
                                       const PhaseTimes& phases) {
        AnalysisReport r;
        r.program = program;
        r.past = to_string(v.past);
        r.ast = to_string(v.ast);
        for (const auto& w : v.witnesses) {
            WitnessRecord rec;
            rec.rule = w.rule;
            rec.applicable = to_string(w.applicable);
            rec.certified = to_string(w.certified);
            rec.details = w.details;
            rec.note = w.note;
            r.witnesses.push_back(std::move(rec));
        }
        for (const auto& a : v.assumptions) r.assumptions.push_back(a.str());
        r.notes = v.notes;
        r.timed_out = v.timed_out;
        r.phases = phases;
        return r;
    }

    Json to_json(bool include_timing = true) const {
        Json j;
        j["program"] = program;
        j["past"] = past;
        j["ast"] = ast;
        j["witnesses"] = Json::array();
        for (const auto& w : witnesses) {
            Json wj;
            wj["rule"] = w.rule;
            wj["applicable"] = w.applicable;
            wj["certified"] = w.certified;
            Json details = Json::object();
            for (const auto& [k, v] : w.details) details[k] = v;
            wj["details"] = details;
            if (!w.note.empty()) wj["note"] = w.note;
            j["witnesses"].push_back(std::move(wj));
        }
        j["assumptions"] = assumptions;
        j["notes"] = notes;
        j["timed_out"] = timed_out;
        if (include_timing) {
            j["phases"] = {{"parse_ms", phases.parse_ms},
                           {"moments_ms", phases.moments_ms},
                           {"bounds_ms", phases.bounds_ms},
                           {"rules_ms", phases.rules_ms}};
        }
        return j;
    }

    static AnalysisReport from_json(const Json& j) {
        AnalysisReport r;
        r.program = j.at("program").get<std::string>();
        r.past = j.at("past").get<std::string>();
        r.ast = j.at("ast").get<std::string>();
        for (const auto& wj : j.at("witnesses")) {
            WitnessRecord w;
            w.rule = wj.at("rule").get<std::string>();
            w.applicable = wj.at("applicable").get<std::string>();
            w.certified = wj.at("certified").get<std::string>();
            for (const auto& [k, v] : wj.at("details").items())
                w.details.emplace_back(k, v.get<std::string>());
            if (wj.contains("note")) w.note = wj.at("note").get<std::string>();
            r.witnesses.push_back(std::move(w));
        }
        r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
        r.notes = j.at("notes").get<std::vector<std::string>>();
        r.timed_out = j.at("timed_out").get<bool>();
        if (j.contains("phases")) {
            r.phases.parse_ms = j["phases"].at("parse_ms").get<double>();
            r.phases.moments_ms = j["phases"].at("moments_ms").get<double>();
            r.phases.bounds_ms = j["phases"].at("bounds_ms").get<double>();
            r.phases.rules_ms = j["phases"].at("rules_ms").get<double>();
        }
        return r;
    }

    std::string human(bool include_timing = true) const {
        std::ostringstream os;
        os << "== " << program << "\n";
        os << "PAST: " << past << "\n";
        os << "AST: " << ast << "\n";
        for (const auto& w : witnesses) {
            os << "witness [" << w.rule << "] applicable=" << w.applicable
               << " certified=" << w.certified << "\n";
            for (const auto& [k, v] : w.details) os << "    " << k << ": " << v << "\n";
            if (!w.note.empty()) os << "    note: " << w.note << "\n";
        }
        for (const auto& a : assumptions) os << "assumption: " << a << "\n";
        for (const auto& n : notes) os << "note: " << n << "\n";
        if (timed_out) os << "note: analysis timed out\n";
        if (include_timing) {
            os << "phases: parse " << phases.parse_ms << "ms, moments " << phases.moments_ms
               << "ms, bounds " << phases.bounds_ms << "ms, rules " << phases.rules_ms << "ms\n";
        }
        return os.str();
    }

    friend bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
        return a.program == b.program && a.past == b.past && a.ast == b.ast &&
               a.witnesses == b.witnesses && a.assumptions == b.assumptions &&
               a.notes == b.notes && a.timed_out == b.timed_out;
    }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Full pipeline for one program source, with per-phase wall-clock times.
inline AnalysisReport analyze_source(const std::string& name, const std::string& source,
                                     AnalysisOptions opts = {}) {
    using clock = std::chrono::steady_clock;
    PhaseTimes times;
    auto t0 = clock::now();
    ProgramSpec prog = load_program(source);
    times.parse_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    Verdict v = decide(prog, opts, &times);
    return AnalysisReport::from_verdict(name, v, times);
}

inline AnalysisReport analyze_file(const std::string& path, AnalysisOptions opts = {}) {
    return analyze_source(path, read_file(path), opts);
}

} // namespace probterm
