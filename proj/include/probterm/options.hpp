// Tunables shared across the analysis pipeline.
#pragma once

#include "probterm/diagnostics.hpp"

#include <chrono>
#include <optional>

namespace probterm {

struct AnalysisOptions {
    unsigned max_moment_order = 8;  // distribution moments above this order degrade to Maybe
    size_t basis_cap = 1000;        // monomial basis size limit
    size_t branch_product_cap = 64; // pure-branch enumeration limit
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_deadline() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline) throw AnalysisTimeout();
    }
};

struct PhaseTimes {
    double parse_ms = 0.0;
    double moments_ms = 0.0;
    double bounds_ms = 0.0;
    double rules_ms = 0.0;
};

} // namespace probterm
