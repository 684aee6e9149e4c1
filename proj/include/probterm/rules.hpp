// The four termination proof-rule relaxations over the guard polynomial G
// (loop iterates while G > 0), and the orchestrator combining them into a
// PAST/AST verdict with witnesses.
//
//   ranking supermartingale  certifies PAST:     MEXP <= -eps eventually
//   supermartingale          certifies AST:      MEXP <= 0 eventually and some
//                                                fixed-probability branch
//                                                decreases G by a constant
//   repulsing (AST)          certifies non-AST:  MEXP >= eps eventually with
//                                                kappa-bounded differences
//   repulsing (PAST)         certifies non-PAST: MEXP >= 0 eventually with
//                                                kappa-bounded differences
// where MEXP is the expected one-iteration change of G as a polynomial in
// the current state, evaluated over the guard-refined bounding functions.
// The repulsing rules additionally need the guard to hold initially with
// positive probability; without that, a loop that never iterates (so is
// trivially PAST) could be "certified" nonterminating.
//
// All answers are three-valued; every unresolved comparison degrades to
// Unknown, never to a wrong certificate.
#pragma once

#include "probterm/bounds.hpp"
#include "probterm/moments.hpp"

#include <string>
#include <utility>
#include <vector>

namespace probterm {

struct PureBranch {
    SymExpr prob;           // product of the chosen branch probabilities
    Polynomial delta;       // G(next) - G(current), per-iteration draws kept symbolic
    Polynomial delta_avg;   // same with draw powers averaged out
};

struct MartingaleExpression {
    Polynomial mexp; // E[G(next) - G(current) | current state]
    std::vector<PureBranch> branches;
    bool branches_complete = true; // false once the product cap is hit
};

struct RuleResult {
    std::string rule;
    Trilean applicable = Trilean::Unknown;
    Trilean certified = Trilean::Unknown;
    std::vector<std::pair<std::string, std::string>> details;
    std::string note;
};

struct Verdict {
    Trilean past = Trilean::Unknown;
    Trilean ast = Trilean::Unknown;
    std::vector<RuleResult> witnesses;
    std::vector<Assumption> assumptions;
    std::vector<std::string> notes;
    bool timed_out = false;
};

inline MartingaleExpression martingale_expression(MomentEngine& engine) {
    const ProgramSpec& prog = engine.program();
    const Polynomial& guard = prog.guard.normalized;
    MartingaleExpression out;
    out.mexp = engine.expected_update_poly(guard) - guard;

    size_t combos = 1;
    for (const auto& [v, upd] : prog.body_updates) {
        combos *= upd.branches.size();
        if (combos > engine.options().branch_product_cap) {
            out.branches_complete = false;
            return out;
        }
    }
    std::vector<size_t> choice(prog.body_updates.size(), 0);
    for (size_t iter = 0; iter < combos; ++iter) {
        engine.options().check_deadline();
        Polynomial composed = guard;
        SymExpr prob = SymExpr::one();
        for (size_t i = prog.body_updates.size(); i-- > 0;) {
            const auto& [v, upd] = prog.body_updates[i];
            const auto& [poly, p] = upd.branches[choice[i]];
            composed = composed.substituted(v, poly);
            prob = prob * p;
        }
        PureBranch b;
        b.delta = composed - guard;
        b.delta_avg = engine.average_rv_powers(b.delta);
        b.prob = std::move(prob);
        out.branches.push_back(std::move(b));
        for (size_t i = 0; i < choice.size(); ++i) { // odometer
            if (++choice[i] < prog.body_updates[i].second.branches.size()) break;
            choice[i] = 0;
        }
    }
    return out;
}

namespace detail {

// Witness constant for a certificate "f <= -eps eventually": the negated
// leading coefficient when f tops out at the constant level, halved when
// lower-order terms still decay toward it.
inline SymExpr separation_constant(const ExpPoly& f) {
    auto lead = f.leading_term();
    if (!lead) return SymExpr::one();
    if (compare_bases(lead->base, SymExpr::one()) == BaseOrder::Equal && lead->degree == 0) {
        SymExpr mag = -lead->coeff;
        return f.terms().size() == 1 ? mag : mag / SymExpr(2);
    }
    return SymExpr::one();
}

// Can the guard be positive initially with positive probability? Evaluates
// G over the initialization supports; the supremum being certified positive
// (or unbounded above) is the sound criterion: finite-support endpoints are
// atoms and continuous supports place mass near their supremum.
inline Trilean initial_guard_positive(const ProgramSpec& prog) {
    std::map<std::string, FnInterval> env;
    for (const auto& v : prog.guard.normalized.vars()) {
        const InitValue* iv = prog.init_value(v);
        if (!iv) return Trilean::Unknown; // validator guarantees this is dead
        if (iv->is_draw)
            env.emplace(v, BoundStore::support_interval(iv->draw));
        else
            env.emplace(v, FnInterval::exact(ExpPoly::constant(iv->constant)));
    }
    FnInterval g0 = poly_eval_bounds(prog.guard.normalized, env);
    if (g0.hi.is_pos_inf()) return Trilean::True;
    if (!g0.hi.is_finite() || !g0.hi.value.is_constant()) return Trilean::Unknown;
    return sym_sign(g0.hi.value.constant_value());
}

// Is the loop provably never entered (G <= 0 over every initial state)?
inline Trilean initial_guard_nonpositive(const ProgramSpec& prog) {
    Trilean pos = initial_guard_positive(prog);
    // positive_initial is the supremum test, so its False reading is exactly
    // "G0 <= 0 everywhere"
    return tri_not(pos);
}

struct DiffBound {
    Trilean bounded = Trilean::Unknown;
    SymExpr kappa;
};

// kappa with |G(next) - G(current)| <= kappa over iterating states, for
// every pure branch, with draws replaced by their support envelopes.
inline DiffBound bounded_differences(const MartingaleExpression& mexp, BoundStore& store) {
    DiffBound out;
    if (!mexp.branches_complete) return out;
    std::vector<SymExpr> ends;
    for (const auto& b : mexp.branches) {
        FnInterval iv = poly_eval_bounds(b.delta, store.poly_env(b.delta, true));
        if (!iv.lo.is_finite() || !iv.hi.is_finite()) return out; // unbounded: not applicable
        auto hi_mag = constant_magnitude_bound(iv.hi.value);
        auto lo_mag = constant_magnitude_bound(iv.lo.value);
        if (!hi_mag || !lo_mag) return out;
        ends.push_back(*hi_mag);
        ends.push_back(*lo_mag);
    }
    auto kappa = sym_max(ends);
    if (!kappa) { // pairwise order unresolved: the sum still dominates
        SymExpr total = SymExpr::zero();
        for (const auto& e : ends) total = total + e;
        kappa = total;
    }
    out.bounded = Trilean::True;
    out.kappa = *kappa;
    return out;
}

} // namespace detail

// --- PAST via the relaxed ranking-supermartingale condition -----------------
inline RuleResult rsm_rule(const MartingaleExpression& mexp, BoundStore& store) {
    RuleResult r;
    r.rule = "ranking-supermartingale";
    FnInterval iv = poly_eval_bounds(mexp.mexp, store.poly_env(mexp.mexp, true));
    r.details.emplace_back("mexp", mexp.mexp.str());
    r.details.emplace_back("mexp_upper_bound", iv.hi.str());
    if (!iv.hi.is_finite()) {
        r.note = "no finite upper bound for the martingale expression";
        return r;
    }
    r.applicable = Trilean::True;
    switch (eventual_sign(iv.hi.value)) {
        case Sign::Negative: {
            r.certified = Trilean::True;
            r.details.emplace_back("epsilon", detail::separation_constant(iv.hi.value).str());
            break;
        }
        case Sign::Positive:
        case Sign::Zero: r.certified = Trilean::False; break;
        default: r.certified = Trilean::Unknown; break;
    }
    return r;
}

// --- AST via the supermartingale rule ---------------------------------------
inline RuleResult sm_rule(const MartingaleExpression& mexp, BoundStore& store) {
    RuleResult r;
    r.rule = "supermartingale";
    FnInterval iv = poly_eval_bounds(mexp.mexp, store.poly_env(mexp.mexp, true));
    r.details.emplace_back("mexp", mexp.mexp.str());
    r.details.emplace_back("mexp_upper_bound", iv.hi.str());

    Trilean cond_a = Trilean::Unknown;
    if (iv.hi.is_finite()) {
        switch (eventual_sign(iv.hi.value)) {
            case Sign::Negative:
            case Sign::Zero: cond_a = Trilean::True; break;
            case Sign::Positive: cond_a = Trilean::False; break;
            default: break;
        }
    }

    Trilean cond_b = Trilean::Unknown;
    if (!mexp.branches_complete) {
        r.note = "pure-branch enumeration exceeded the cap";
    } else {
        bool any_unknown = false;
        for (size_t i = 0; i < mexp.branches.size(); ++i) {
            const PureBranch& b = mexp.branches[i];
            Trilean p_pos = sym_sign(b.prob);
            if (p_pos == Trilean::False) continue;
            FnInterval di = poly_eval_bounds(b.delta, store.poly_env(b.delta, true));
            if (!di.hi.is_finite()) {
                any_unknown = true;
                continue;
            }
            Sign es = eventual_sign(di.hi.value);
            if (es == Sign::Negative && p_pos == Trilean::True) {
                cond_b = Trilean::True;
                r.details.emplace_back("descending_branch", b.delta.str());
                r.details.emplace_back("branch_probability", b.prob.str());
                r.details.emplace_back("decrease", detail::separation_constant(di.hi.value).str());
                break;
            }
            if (es == Sign::Unknown || p_pos == Trilean::Unknown) any_unknown = true;
        }
        if (cond_b != Trilean::True && !any_unknown) cond_b = Trilean::False;
    }

    r.applicable = tri_and(iv.hi.is_finite() ? Trilean::True : Trilean::Unknown,
                           mexp.branches_complete ? Trilean::True : Trilean::Unknown);
    r.certified = tri_and(cond_a, cond_b);
    return r;
}

// --- non-AST via the repulsing rule ------------------------------------------
inline RuleResult rast_rule(const ProgramSpec& prog, const MartingaleExpression& mexp,
                            BoundStore& store) {
    RuleResult r;
    r.rule = "repulsing-ast";
    FnInterval iv = poly_eval_bounds(mexp.mexp, store.poly_env(mexp.mexp, true));
    r.details.emplace_back("mexp", mexp.mexp.str());
    r.details.emplace_back("mexp_lower_bound", iv.lo.str());

    detail::DiffBound diffs = detail::bounded_differences(mexp, store);
    r.applicable = diffs.bounded;
    if (diffs.bounded == Trilean::True) r.details.emplace_back("kappa", diffs.kappa.str());

    Trilean cond_a = Trilean::Unknown;
    if (iv.lo.is_finite()) {
        switch (eventual_sign(iv.lo.value)) {
            case Sign::Positive: cond_a = Trilean::True; break;
            case Sign::Negative:
            case Sign::Zero: cond_a = Trilean::False; break;
            default: break;
        }
    }
    if (cond_a == Trilean::True)
        r.details.emplace_back("epsilon", detail::separation_constant(-iv.lo.value).str());

    Trilean cond_c = detail::initial_guard_positive(prog);
    r.certified = tri_and(cond_a, tri_and(diffs.bounded, cond_c));
    return r;
}

// --- non-PAST via the weakened repulsing rule --------------------------------
inline RuleResult rpast_rule(const ProgramSpec& prog, const MartingaleExpression& mexp,
                             BoundStore& store) {
    RuleResult r;
    r.rule = "repulsing-past";
    FnInterval iv = poly_eval_bounds(mexp.mexp, store.poly_env(mexp.mexp, true));
    r.details.emplace_back("mexp", mexp.mexp.str());
    r.details.emplace_back("mexp_lower_bound", iv.lo.str());

    detail::DiffBound diffs = detail::bounded_differences(mexp, store);
    r.applicable = diffs.bounded;
    if (diffs.bounded == Trilean::True) r.details.emplace_back("kappa", diffs.kappa.str());

    // MEXP >= 0 eventually: strictly repulsing, or identically nonnegative
    Trilean cond_a = Trilean::Unknown;
    if (iv.lo.is_finite()) {
        if (iv.lo.value.is_zero()) {
            cond_a = Trilean::True;
        } else {
            switch (eventual_sign(iv.lo.value)) {
                case Sign::Positive: cond_a = Trilean::True; break;
                case Sign::Negative: cond_a = Trilean::False; break;
                default: break;
            }
        }
    }

    Trilean cond_c = detail::initial_guard_positive(prog);
    if (cond_c == Trilean::True) r.details.emplace_back("initial_guard", "positive");
    r.certified = tri_and(cond_a, tri_and(diffs.bounded, cond_c));
    return r;
}

// --- orchestrator ------------------------------------------------------------
inline Verdict decide(const ProgramSpec& prog, AnalysisOptions opts = {},
                      PhaseTimes* times = nullptr) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    Verdict v;
    v.assumptions = prog.assumptions;
    MomentEngine engine(prog, opts);
    BoundStore store(prog, opts);

    Trilean never_enters = Trilean::Unknown;
    try {
        never_enters = detail::initial_guard_nonpositive(prog);
        auto t0 = clock::now();
        MartingaleExpression mexp = martingale_expression(engine);
        if (times) times->moments_ms = ms_since(t0);
        t0 = clock::now();
        store.guard_refined_bounds(); // populate the store
        if (times) times->bounds_ms = ms_since(t0);
        t0 = clock::now();
        v.witnesses.push_back(rsm_rule(mexp, store));
        v.witnesses.push_back(sm_rule(mexp, store));
        v.witnesses.push_back(rast_rule(prog, mexp, store));
        v.witnesses.push_back(rpast_rule(prog, mexp, store));
        if (times) times->rules_ms = ms_since(t0);
    } catch (const AnalysisTimeout&) {
        v.timed_out = true;
        v.notes.push_back("analysis timed out; remaining checks degraded to Maybe");
        return v;
    } catch (const AnalysisDegraded& e) {
        v.notes.push_back(std::string("analysis degraded: ") + e.what());
        return v;
    }

    auto certified = [&](const std::string& rule) {
        for (const auto& w : v.witnesses)
            if (w.rule == rule) return w.certified == Trilean::True;
        return false;
    };
    bool rsm = certified("ranking-supermartingale");
    bool sm = certified("supermartingale");
    bool rast = certified("repulsing-ast");
    bool rpast = certified("repulsing-past");

    if (never_enters == Trilean::True) {
        RuleResult trivial;
        trivial.rule = "vacuous-guard";
        trivial.applicable = trivial.certified = Trilean::True;
        trivial.details.emplace_back("initial_guard", "never positive; the loop does not iterate");
        v.witnesses.push_back(std::move(trivial));
    }

    if ((rsm || never_enters == Trilean::True) && (rast || rpast))
        throw InternalSoundnessError("PAST and non-PAST certified simultaneously");
    if ((sm || never_enters == Trilean::True) && rast)
        throw InternalSoundnessError("AST and non-AST certified simultaneously");

    if (rsm || never_enters == Trilean::True)
        v.past = Trilean::True;
    else if (rast || rpast)
        v.past = Trilean::False;

    if (v.past == Trilean::True || sm || never_enters == Trilean::True)
        v.ast = Trilean::True;
    else if (rast)
        v.ast = Trilean::False;

    return v;
}

} // namespace probterm
