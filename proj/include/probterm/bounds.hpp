// Bound store: asymptotic lower/upper bounding functions for program
// variables as exponential polynomials of the loop counter.
//
// Validity contract (load-bearing): a bound pair [lo, hi] promises that on
// almost every run of the unconditioned loop-body process there are a
// per-run constant c > 0 and an index n0 with
//     c * lo(n) - c  <=  v(n)  <=  c * hi(n) + c      for all n >= n0.
// Only growth order and eventual sign survive such constants, and that is
// all the proof rules consume. Per-run constants are unavoidable: an
// initialization draw from an unbounded distribution rules out uniform
// ones. Initialization endpoints that are infinite enter the recurrences
// through the proxies +-1, which the per-run factor absorbs.
//
// Candidate recurrences are solved per branch family:
//   - a single branch (or all branches sharing one self-coefficient a >= 0)
//     is exact: b(n+1) = a b(n) + extreme(n);
//   - differing nonnegative self-coefficients use the envelope
//     U(n+1) = max_j(a_j) U(n) + max(extreme(n), 0) anchored at a
//     nonnegative start (taking the per-branch maximum of solutions instead
//     would be unsound: from x = 0, the pair {x = 2x, x + 1} grows like 2^n
//     while both per-branch solutions stay linear);
//   - certified negative coefficients fall back to a magnitude envelope
//     M(n+1) = max_j|a_j| M(n) + max|extreme|(n), giving [-M, M];
//   - anything with an uncertifiable sign degrades to the whole line.
#pragma once

#include "probterm/distributions.hpp"
#include "probterm/intervals.hpp"
#include "probterm/options.hpp"
#include "probterm/program.hpp"
#include "probterm/recurrence.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace probterm {

struct BoundPair {
    FnBound lo = FnBound::neg_inf();
    FnBound hi = FnBound::pos_inf();

    FnInterval interval() const { return FnInterval::of(lo, hi); }
    std::string str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }
};

namespace detail {

inline std::optional<SymExpr> sym_max(const std::vector<SymExpr>& xs) {
    if (xs.empty()) return std::nullopt;
    SymExpr best = xs[0];
    for (size_t i = 1; i < xs.size(); ++i) {
        Sign s = (xs[i] - best).definite_sign();
        if (s == Sign::Positive) best = xs[i];
        else if (s == Sign::Unknown) return std::nullopt;
    }
    return best;
}

inline std::optional<SymExpr> sym_min(const std::vector<SymExpr>& xs) {
    std::vector<SymExpr> neg;
    neg.reserve(xs.size());
    for (const auto& x : xs) neg.push_back(-x);
    auto m = sym_max(neg);
    if (!m) return std::nullopt;
    return -*m;
}

inline FnBound shift_back(const FnBound& b) {
    if (!b.is_finite()) return b;
    return FnBound::finite(b.value.shifted(-1));
}

// solve b(n+1) = a b(n) + r(n) with the given anchor; infinities pass through.
inline FnBound solve_bound(const SymExpr& a, const FnBound& r, const SymExpr& anchor) {
    if (!r.is_finite()) return r;
    try {
        return FnBound::finite(solve_linear_recurrence(a, r.value, anchor));
    } catch (const AnalysisDegraded&) {
        return pointwise_eventual_sign(r.value) == Sign::Negative ? FnBound::neg_inf()
                                                                  : FnBound::pos_inf();
    }
}

} // namespace detail

class BoundStore {
  public:
    BoundStore(const ProgramSpec& prog, AnalysisOptions opts = {}) : prog_(prog), opts_(opts) {}

    // Raw (guard-agnostic) bounds of a state variable.
    const BoundPair& var_bounds(const std::string& v) {
        auto it = memo_.find(v);
        if (it != memo_.end()) return it->second;
        opts_.check_deadline();
        memo_.emplace(v, BoundPair{}); // pre-mark: cycles would mean a validator bug
        BoundPair computed = compute(v);
        return memo_[v] = computed;
    }

    // Bounds of all state variables, intersected with the half-line the
    // guard implies when it is univariate linear (iterating states satisfy
    // G > 0, and that intersection is exact, not slackened).
    std::map<std::string, BoundPair> guard_refined_bounds() {
        std::map<std::string, BoundPair> out;
        for (const auto& v : prog_.state_variables()) out.emplace(v, var_bounds(v));
        const Polynomial& g = prog_.guard.normalized;
        auto vars = g.vars();
        if (vars.size() != 1) return out;
        const std::string& w = *vars.begin();
        if (g.degree_in(w) != 1) return out;
        Polynomial alpha_p = g.coefficient_poly(w, 1);
        Polynomial beta_p = g.coefficient_poly(w, 0);
        if (!alpha_p.is_constant() || !beta_p.is_constant()) return out;
        SymExpr alpha = alpha_p.constant_value();
        Sign s = alpha.definite_sign();
        if (s != Sign::Positive && s != Sign::Negative) return out;
        SymExpr threshold = -beta_p.constant_value() / alpha;
        BoundPair& bp = out[w];
        ExpPoly thr = ExpPoly::constant(threshold);
        if (s == Sign::Positive) {
            // iterating states have w > threshold
            if (!bp.lo.is_finite() || ev_ge(thr, bp.lo.value) == Trilean::True)
                bp.lo = FnBound::finite(thr);
        } else {
            if (!bp.hi.is_finite() || ev_le(thr, bp.hi.value) == Trilean::True)
                bp.hi = FnBound::finite(thr);
        }
        return out;
    }

    // Envelope environment for interval-evaluating a polynomial over state
    // variables and per-iteration draws.
    std::map<std::string, FnInterval> poly_env(const Polynomial& p, bool refined) {
        std::map<std::string, FnInterval> env;
        std::map<std::string, BoundPair> state;
        if (refined) state = guard_refined_bounds();
        for (const auto& v : p.vars()) {
            if (const DistSpec* d = prog_.rv_dist(v)) {
                env.emplace(v, support_interval(*d));
                continue;
            }
            if (refined) {
                auto it = state.find(v);
                if (it != state.end()) {
                    env.emplace(v, it->second.interval());
                    continue;
                }
            }
            env.emplace(v, var_bounds(v).interval());
        }
        return env;
    }

    static FnInterval support_interval(const DistSpec& d) {
        SupportInterval s = support(d);
        FnInterval out = FnInterval::whole();
        if (s.lo_finite) out.lo = FnBound::finite(ExpPoly::constant(s.lo));
        if (s.hi_finite) out.hi = FnBound::finite(ExpPoly::constant(s.hi));
        return out;
    }

  private:
    struct InitInfo {
        FnBound lo = FnBound::neg_inf();
        FnBound hi = FnBound::pos_inf();
        SymExpr lo_proxy = SymExpr(-1); // finite stand-ins for the recurrence anchor
        SymExpr hi_proxy = SymExpr(1);
    };

    InitInfo init_info(const std::string& v) const {
        InitInfo info;
        const InitValue* iv = prog_.init_value(v);
        if (!iv) { // never read before its body assignment; anchor is unused
            info.lo = FnBound::finite(ExpPoly());
            info.hi = FnBound::finite(ExpPoly());
            info.lo_proxy = SymExpr::zero();
            info.hi_proxy = SymExpr::zero();
            return info;
        }
        if (!iv->is_draw) {
            info.lo = info.hi = FnBound::finite(ExpPoly::constant(iv->constant));
            info.lo_proxy = info.hi_proxy = iv->constant;
            return info;
        }
        SupportInterval s = support(iv->draw);
        if (s.lo_finite) {
            info.lo = FnBound::finite(ExpPoly::constant(s.lo));
            info.lo_proxy = s.lo;
        }
        if (s.hi_finite) {
            info.hi = FnBound::finite(ExpPoly::constant(s.hi));
            info.hi_proxy = s.hi;
        }
        return info;
    }

    BoundPair compute(const std::string& v) {
        InitInfo init = init_info(v);
        const BranchUpdate* upd = prog_.update_of(v);
        if (!upd) { // constant during the loop
            return BoundPair{init.lo, init.hi};
        }

        // split every branch u_j = a_j * v + r_j with a_j a symbolic constant
        std::vector<SymExpr> coeffs;
        std::vector<FnInterval> rests;
        for (const auto& [u, prob] : upd->branches) {
            Polynomial a_poly = u.coefficient_poly(v, 1);
            if (!a_poly.is_constant()) return BoundPair{}; // state-dependent self-coefficient
            coeffs.push_back(a_poly.constant_value());
            Polynomial rest = u.coefficient_poly(v, 0);
            rests.push_back(poly_eval_bounds(rest, poly_env(rest, false)));
        }

        bool all_equal = true;
        for (size_t i = 1; i < coeffs.size(); ++i) all_equal = all_equal && coeffs[i] == coeffs[0];

        std::vector<FnBound> rhis, rlos;
        for (const auto& r : rests) {
            rhis.push_back(r.hi);
            rlos.push_back(r.lo);
        }
        FnBound rhi = bound_max(rhis);
        FnBound rlo = bound_min(rlos);

        if (all_equal) return common_coefficient(coeffs[0], rlo, rhi, init);

        bool all_nonneg = true, any_unknown = false;
        for (const auto& a : coeffs) {
            Sign s = a.definite_sign();
            if (s == Sign::Unknown) any_unknown = true;
            if (s == Sign::Negative) all_nonneg = false;
        }
        if (any_unknown) return BoundPair{};
        if (all_nonneg) return nonneg_envelope(coeffs, rlo, rhi, init);
        return magnitude_envelope(coeffs, rlo, rhi, init);
    }

    BoundPair common_coefficient(const SymExpr& a, const FnBound& rlo, const FnBound& rhi,
                                 const InitInfo& init) {
        Sign s = a.definite_sign();
        if (s == Sign::Zero)
            return BoundPair{detail::shift_back(rlo), detail::shift_back(rhi)};
        if (s == Sign::Positive) {
            // a >= 0 makes x <= U imply a x <= a U regardless of signs, so
            // the one-sided recurrences are sound envelopes on their own.
            BoundPair out;
            out.hi = detail::solve_bound(a, rhi, init.hi_proxy);
            out.lo = detail::solve_bound(a, rlo, init.lo_proxy);
            return out;
        }
        if (s == Sign::Negative) return magnitude_envelope({a}, rlo, rhi, init);
        return BoundPair{};
    }

    BoundPair nonneg_envelope(const std::vector<SymExpr>& coeffs, const FnBound& rlo,
                              const FnBound& rhi, const InitInfo& init) {
        BoundPair out;
        auto amax = detail::sym_max(coeffs);
        auto amin = detail::sym_min(coeffs);
        if (!amax || !amin) return out;

        // upper: U(n+1) = amax U(n) + max(rhi, 0), anchored >= 0
        if (rhi.is_finite()) {
            FnBound rhi_plus = bound_max({rhi, FnBound::finite(ExpPoly())});
            Sign hs = init.hi_proxy.definite_sign();
            if (rhi_plus.is_finite() && hs != Sign::Unknown) {
                SymExpr anchor = hs == Sign::Negative ? SymExpr::zero() : init.hi_proxy;
                if (amax->definite_sign() == Sign::Positive)
                    out.hi = detail::solve_bound(*amax, rhi_plus, anchor);
                else if (amax->is_zero())
                    out.hi = detail::shift_back(rhi_plus);
            }
        }

        // lower: sound with nonnegative coefficients only while the bound
        // itself stays nonnegative, which needs rlo >= 0 and a nonnegative
        // anchor; otherwise fall back to the magnitude envelope.
        bool lower_ok = false;
        if (rlo.is_finite() && ev_ge(rlo.value, ExpPoly()) == Trilean::True) {
            Sign ls = init.lo_proxy.definite_sign();
            if (init.lo.is_finite() && (ls == Sign::Positive || ls == Sign::Zero)) {
                if (amin->definite_sign() == Sign::Positive) {
                    out.lo = detail::solve_bound(*amin, rlo, init.lo_proxy);
                    lower_ok = out.lo.is_finite();
                } else if (amin->is_zero()) {
                    out.lo = detail::shift_back(rlo);
                    lower_ok = out.lo.is_finite();
                }
            }
        }
        if (!lower_ok) {
            BoundPair mag = magnitude_envelope(coeffs, rlo, rhi, init);
            out.lo = mag.lo;
        }
        return out;
    }

    // |x(n+1)| <= max_j |a_j| |x(n)| + max(rhi, -rlo) gives [-M, M].
    BoundPair magnitude_envelope(const std::vector<SymExpr>& coeffs, const FnBound& rlo,
                                 const FnBound& rhi, const InitInfo& init) {
        if (!rlo.is_finite() || !rhi.is_finite()) return BoundPair{};
        std::vector<SymExpr> mags;
        for (const auto& a : coeffs) {
            auto m = certified_abs(a);
            if (!m) return BoundPair{};
            mags.push_back(*m);
        }
        auto amag = detail::sym_max(mags);
        if (!amag) return BoundPair{};
        FnBound rmag = bound_max({rhi, -rlo});
        if (!rmag.is_finite()) return BoundPair{};
        auto lo_abs = certified_abs(init.lo_proxy);
        auto hi_abs = certified_abs(init.hi_proxy);
        if (!lo_abs || !hi_abs) return BoundPair{};
        auto anchor = detail::sym_max({*lo_abs, *hi_abs});
        if (!anchor) return BoundPair{};
        FnBound m;
        if (amag->is_zero())
            m = detail::shift_back(rmag);
        else if (amag->definite_sign() == Sign::Positive)
            m = detail::solve_bound(*amag, rmag, *anchor);
        else
            return BoundPair{};
        if (!m.is_finite()) return BoundPair{};
        return BoundPair{FnBound::finite(-m.value), m};
    }

    const ProgramSpec& prog_;
    AnalysisOptions opts_;
    std::map<std::string, BoundPair> memo_;
};

} // namespace probterm
