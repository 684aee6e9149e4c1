// Moment engine: exponential-polynomial closed forms for expected values of
// monomials over the program variables, as functions of the loop counter.
// The loop body is modeled as an unconditional stochastic recurrence (the
// expectation is not conditioned on the guard still holding), which is the
// standard martingale-analysis convention.
//
// One engine instance is an analysis session: expected updates and solved
// closed forms are memoized, so the engine is single-owner; distinct
// programs get distinct engines.
#pragma once

#include "probterm/distributions.hpp"
#include "probterm/options.hpp"
#include "probterm/polynomial.hpp"
#include "probterm/program.hpp"
#include "probterm/recurrence.hpp"

#include <map>
#include <set>
#include <vector>

namespace probterm {

struct MonomialClosedForm {
    ExpPoly form;       // exact for n >= valid_from
    SymExpr initial;    // E[monomial] at n = 0
    unsigned valid_from = 0;
};

class MomentEngine {
  public:
    MomentEngine(const ProgramSpec& prog, AnalysisOptions opts = {})
        : prog_(prog), opts_(opts) {}

    const ProgramSpec& program() const { return prog_; }
    const AnalysisOptions& options() const { return opts_; }

    // One-step expectation E[m(next state) | current state], as a polynomial
    // in the current state: branch mixtures are substituted in reverse body
    // order, then powers of per-iteration draws are averaged out.
    const Polynomial& expected_update(const VarMonomial& m) {
        auto it = update_memo_.find(m);
        if (it != update_memo_.end()) return it->second;
        opts_.check_deadline();
        Polynomial poly = Polynomial::monomial(m);
        for (auto u = prog_.body_updates.rbegin(); u != prog_.body_updates.rend(); ++u) {
            const auto& [v, upd] = *u;
            if (!poly.vars().count(v)) continue;
            Polynomial mixed;
            for (const auto& [branch_poly, prob] : upd.branches)
                mixed = mixed + poly.substituted(v, branch_poly).scaled(prob);
            poly = std::move(mixed);
        }
        poly = average_rv_powers(poly);
        return update_memo_.emplace(m, std::move(poly)).first->second;
    }

    // Replaces every power of a per-iteration draw variable by the matching
    // raw moment (draws are independent of the state and of each other).
    Polynomial average_rv_powers(const Polynomial& p) {
        Polynomial out = p;
        for (const auto& [r, dist] : prog_.body_rv) {
            if (!out.vars().count(r)) continue;
            out = out.powers_replaced(r, [&](unsigned k) { return dist_moment(dist, k, r); });
        }
        return out;
    }

    Polynomial expected_update_poly(const Polynomial& p) {
        Polynomial out;
        for (const auto& [m, c] : p.terms()) {
            if (m.empty()) {
                out.add_term(m, c);
                continue;
            }
            out = out + expected_update(m).scaled(c);
        }
        return out;
    }

    // Worklist closure of the seeds under the expected-update map.
    std::set<VarMonomial> build_basis(const std::vector<VarMonomial>& seeds) {
        std::set<VarMonomial> basis;
        std::vector<VarMonomial> work;
        for (const auto& s : seeds) {
            if (s.empty()) continue;
            if (basis.insert(s).second) work.push_back(s);
        }
        while (!work.empty()) {
            opts_.check_deadline();
            VarMonomial m = work.back();
            work.pop_back();
            for (const auto& [mono, coeff] : expected_update(m).terms()) {
                if (mono.empty() || basis.count(mono)) continue;
                if (basis.size() >= opts_.basis_cap) throw BasisExplosion(opts_.basis_cap);
                basis.insert(mono);
                work.push_back(mono);
            }
        }
        return basis;
    }

    // E[m] at n = 0, from the initialization section. Distinct init draws
    // are independent, so mixed monomials factor.
    SymExpr initial_moment(const VarMonomial& m) {
        SymExpr out = SymExpr::one();
        for (const auto& [v, e] : m) {
            const InitValue* iv = prog_.init_value(v);
            if (!iv)
                throw MomentUnavailable("variable '" + v + "' has no initial value");
            if (iv->is_draw)
                out = out * dist_moment(iv->draw, e, v);
            else
                out = out * iv->constant.pow(e);
        }
        return out;
    }

    // Closed form of E[m] as a function of the loop counter, solving the
    // dependency chain of first-order recurrences in topological order.
    const MonomialClosedForm& closed_form(const VarMonomial& m) {
        auto it = closed_memo_.find(m);
        if (it != closed_memo_.end()) return it->second;
        if (in_progress_.count(m))
            throw ClosedFormUnrepresentable("cyclic moment dependency at monomial " +
                                            var_mono_str(m));
        in_progress_.insert(m);
        opts_.check_deadline();

        const Polynomial& eu = expected_update(m);
        SymExpr self = SymExpr::zero();
        ExpPoly g;
        unsigned start = 0;
        for (const auto& [mono, coeff] : eu.terms()) {
            if (mono == m) {
                self = coeff;
                continue;
            }
            if (mono.empty()) {
                g = g + ExpPoly::constant(coeff);
                continue;
            }
            const MonomialClosedForm& dep = closed_form(mono);
            g = g + dep.form.scaled(coeff);
            start = std::max(start, dep.valid_from);
        }

        MonomialClosedForm out;
        out.initial = initial_moment(m);
        if (self.is_zero()) {
            // E[m](n) = g(n-1) for n >= start+1; no single exponential
            // polynomial also matches the initial value in general.
            out.valid_from = start + 1;
            out.form = g.shifted(-1);
            if (out.valid_from == 1 && exp_poly_value_at_zero(out.form) == out.initial)
                out.valid_from = 0;
        } else {
            out.valid_from = start;
            SymExpr anchor = exact_moment(m, start);
            out.form = solve_linear_recurrence(self, g, anchor, start);
        }
        in_progress_.erase(m);
        return closed_memo_.emplace(m, std::move(out)).first->second;
    }

    // E[m] at a concrete step, by exact iteration of the one-step map.
    // Reference route for small n; agrees with closed_form(m) wherever the
    // latter is valid.
    SymExpr exact_moment(const VarMonomial& m, unsigned n) {
        if (m.empty()) return SymExpr::one();
        if (n == 0) return initial_moment(m);
        auto key = std::make_pair(m, n);
        auto it = exact_memo_.find(key);
        if (it != exact_memo_.end()) return it->second;
        opts_.check_deadline();
        SymExpr total = SymExpr::zero();
        for (const auto& [mono, coeff] : expected_update(m).terms())
            total = total + coeff * exact_moment(mono, n - 1);
        return exact_memo_.emplace(key, std::move(total)).first->second;
    }

    // Moment of E[m] at n via the closed form when valid, else exactly.
    SymExpr moment_at(const VarMonomial& m, unsigned n) {
        const MonomialClosedForm& cf = closed_form(m);
        if (n >= cf.valid_from) return eval_exp_poly_symbolic(cf.form, n);
        return exact_moment(m, n);
    }

  private:
    SymExpr dist_moment(const DistSpec& d, unsigned k, const std::string& var) {
        if (k > opts_.max_moment_order)
            throw MomentUnavailable("moment of order " + std::to_string(k) + " of '" + var +
                                    "' exceeds the configured maximum of " +
                                    std::to_string(opts_.max_moment_order));
        auto m = raw_moment(d, k);
        if (!m)
            throw MomentUnavailable("the " + std::to_string(k) + "-th moment of " +
                                    std::string(dist_name(d.kind)) + " is not available");
        return *m;
    }

    static SymExpr eval_exp_poly_symbolic(const ExpPoly& f, unsigned n) {
        SymExpr total = SymExpr::zero();
        for (const auto& t : f.terms()) {
            SymExpr v = t.coeff;
            for (unsigned i = 0; i < t.degree; ++i) v = v * SymExpr(Int(n));
            v = v * t.base.pow(n);
            total = total + v;
        }
        return total;
    }

    const ProgramSpec& prog_;
    AnalysisOptions opts_;
    std::map<VarMonomial, Polynomial> update_memo_;
    std::map<VarMonomial, MonomialClosedForm> closed_memo_;
    std::map<std::pair<VarMonomial, unsigned>, SymExpr> exact_memo_;
    std::set<VarMonomial> in_progress_;
};

} // namespace probterm
