// Validated program representation. Converts raw syntax trees into exact
// polynomials, classifies names (a name assigned anywhere is a program
// variable, every other name denotes a positive symbolic constant), checks
// the structural constraints that make moment recurrences solvable, and
// normalizes the guard so the loop iterates while G > 0.
#pragma once

#include "probterm/ast.hpp"
#include "probterm/diagnostics.hpp"
#include "probterm/parser.hpp"
#include "probterm/polynomial.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace probterm {

enum class DistKind {
    Uniform, Gauss, Laplace, Bernoulli, Binomial, Geometric,
    Hypergeometric, Exponential, Beta, ChiSquared, Rayleigh
};

inline const char* dist_name(DistKind k) {
    switch (k) {
        case DistKind::Uniform: return "uniform";
        case DistKind::Gauss: return "gauss";
        case DistKind::Laplace: return "laplace";
        case DistKind::Bernoulli: return "bernoulli";
        case DistKind::Binomial: return "binomial";
        case DistKind::Geometric: return "geometric";
        case DistKind::Hypergeometric: return "hypergeometric";
        case DistKind::Exponential: return "exponential";
        case DistKind::Beta: return "beta";
        case DistKind::ChiSquared: return "chi-squared";
        default: return "rayleigh";
    }
}

inline unsigned dist_arity(DistKind k) {
    switch (k) {
        case DistKind::Uniform:
        case DistKind::Gauss:
        case DistKind::Laplace:
        case DistKind::Binomial:
        case DistKind::Beta: return 2;
        case DistKind::Hypergeometric: return 3;
        default: return 1;
    }
}

struct DistSpec {
    DistKind kind;
    std::vector<SymExpr> params;

    friend bool operator==(const DistSpec& a, const DistSpec& b) {
        return a.kind == b.kind && a.params == b.params;
    }

    std::string str() const {
        std::string out = std::string("RV(") + dist_name(kind);
        for (const auto& p : params) out += ", " + p.str();
        return out + ")";
    }
};

struct InitValue {
    bool is_draw = false;
    SymExpr constant; // when !is_draw
    DistSpec draw;    // when is_draw

    friend bool operator==(const InitValue& a, const InitValue& b) {
        if (a.is_draw != b.is_draw) return false;
        return a.is_draw ? a.draw == b.draw : a.constant == b.constant;
    }
};

struct BranchUpdate {
    // (update polynomial, probability); probabilities sum to exactly 1,
    // the trailing branch received the remainder.
    std::vector<std::pair<Polynomial, SymExpr>> branches;

    friend bool operator==(const BranchUpdate& a, const BranchUpdate& b) {
        return a.branches == b.branches;
    }
};

struct GuardSpec {
    Polynomial lhs;
    char cop = '>';
    Polynomial rhs;
    Polynomial normalized; // iterate while normalized > 0

    friend bool operator==(const GuardSpec& a, const GuardSpec& b) {
        return a.cop == b.cop && a.lhs == b.lhs && a.rhs == b.rhs &&
               a.normalized == b.normalized;
    }
};

// A constraint the analysis relies on but cannot verify from positivity of
// the symbols alone; echoed verbatim in every report.
struct Assumption {
    SymExpr expr;
    std::string relation; // "> 0" or ">= 0"
    std::string context;

    std::string str() const { return expr.str() + " " + relation + "  (" + context + ")"; }

    friend bool operator==(const Assumption& a, const Assumption& b) {
        return a.relation == b.relation && a.expr == b.expr;
    }
};

struct ProgramSpec {
    std::vector<std::pair<std::string, InitValue>> init;
    GuardSpec guard;
    std::vector<std::pair<std::string, DistSpec>> body_rv; // hoisted, draw order kept
    std::vector<std::pair<std::string, BranchUpdate>> body_updates;
    std::set<std::string> symbols;
    std::vector<Assumption> assumptions;

    bool is_rv(const std::string& name) const {
        for (const auto& [v, d] : body_rv)
            if (v == name) return true;
        return false;
    }
    bool is_body_updated(const std::string& name) const {
        for (const auto& [v, u] : body_updates)
            if (v == name) return true;
        return false;
    }
    const DistSpec* rv_dist(const std::string& name) const {
        for (const auto& [v, d] : body_rv)
            if (v == name) return &d;
        return nullptr;
    }
    const InitValue* init_value(const std::string& name) const {
        for (const auto& [v, iv] : init)
            if (v == name) return &iv;
        return nullptr;
    }
    const BranchUpdate* update_of(const std::string& name) const {
        for (const auto& [v, u] : body_updates)
            if (v == name) return &u;
        return nullptr;
    }

    std::set<std::string> state_variables() const {
        std::set<std::string> out;
        for (const auto& [v, iv] : init) out.insert(v);
        for (const auto& [v, u] : body_updates) out.insert(v);
        return out;
    }

    friend bool operator==(const ProgramSpec& a, const ProgramSpec& b) {
        return a.init == b.init && a.guard == b.guard && a.body_rv == b.body_rv &&
               a.body_updates == b.body_updates && a.symbols == b.symbols;
    }
};

namespace detail {

class Validator {
  public:
    explicit Validator(const RawProgram& raw) : raw_(raw) {
        for (const auto& a : raw.init) assigned_.insert(a.target);
        for (const auto& a : raw.body) {
            assigned_.insert(a.target);
            (a.is_draw ? rv_targets_ : update_targets_).insert(a.target);
        }
        for (const auto& a : raw.init) init_targets_.insert(a.target);
    }

    ProgramSpec run() {
        ProgramSpec prog;
        validate_init(prog);
        validate_guard(prog);
        validate_body(prog);
        collect_symbols(prog);
        return prog;
    }

  private:
    Polynomial to_polynomial(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Kind::Nat: return Polynomial(SymExpr(e->nat));
            case Expr::Kind::Name:
                if (assigned_.count(e->name)) return Polynomial::variable(e->name);
                return Polynomial(SymExpr::symbol(e->name));
            case Expr::Kind::Neg: return -to_polynomial(e->lhs);
            case Expr::Kind::Add: return to_polynomial(e->lhs) + to_polynomial(e->rhs);
            case Expr::Kind::Sub: return to_polynomial(e->lhs) - to_polynomial(e->rhs);
            case Expr::Kind::Mul: return to_polynomial(e->lhs) * to_polynomial(e->rhs);
            case Expr::Kind::Div: {
                Polynomial den = to_polynomial(e->rhs);
                if (!den.is_constant()) {
                    std::string v = *den.vars().begin();
                    throw StructureError(v, "division by a program variable is not supported",
                                         e->pos);
                }
                try {
                    SymExpr inv = SymExpr::one() / den.constant_value();
                    return to_polynomial(e->lhs).scaled(inv);
                } catch (const SymDomainError& err) {
                    throw StructureError("", std::string("invalid divisor: ") + err.what(),
                                         e->pos);
                }
            }
            case Expr::Kind::Pow: {
                Polynomial exp = to_polynomial(e->rhs);
                if (!exp.is_constant() || !exp.constant_value().is_rational())
                    throw StructureError("", "exponent must be a nonnegative integer", e->pos);
                Rat r = exp.constant_value().rational_value();
                if (rat_den(r) != 1 || r < 0 || r > 32)
                    throw StructureError("", "exponent must be a nonnegative integer (at most 32)",
                                         e->pos);
                return to_polynomial(e->lhs).pow(static_cast<unsigned>(rat_num(r).convert_to<long>()));
            }
        }
        throw std::logic_error("unreachable expression kind");
    }

    SymExpr to_constant(const ExprPtr& e, const std::string& what) {
        Polynomial p = to_polynomial(e);
        if (!p.is_constant()) {
            std::string v = *p.vars().begin();
            throw StructureError(v, what + " must be a constant expression (found variable '" +
                                        v + "')",
                                 e->pos);
        }
        return p.constant_value();
    }

    // Proves the constraint from positivity, or records it as an assumption.
    void require_or_assume(ProgramSpec& prog, const SymExpr& e, bool strict,
                           const std::string& context, SourcePos pos) {
        Sign s = e.definite_sign();
        if (s == Sign::Positive) return;
        if (!strict && s == Sign::Zero) return;
        if (s == Sign::Negative || (strict && s == Sign::Zero))
            throw StructureError("", context + ": requires " + e.str() + (strict ? " > 0" : " >= 0"),
                                 pos);
        Assumption a{e, strict ? "> 0" : ">= 0", context};
        for (const auto& prev : prog.assumptions)
            if (prev == a) return;
        prog.assumptions.push_back(std::move(a));
    }

    void require_numeric_nat(const SymExpr& e, const std::string& context, SourcePos pos) {
        if (!e.is_rational()) return; // symbolic: covered by the assumptions
        Rat r = e.rational_value();
        if (rat_den(r) != 1 || r < 0)
            throw StructureError("", context + ": expected a nonnegative integer, found " + e.str(),
                                 pos);
    }

    DistSpec to_dist(const RawDraw& d, ProgramSpec& prog, const std::string& target,
                     SourcePos pos) {
        DistSpec spec;
        bool found = false;
        static const std::pair<const char*, DistKind> table[] = {
            {"uniform", DistKind::Uniform},   {"gauss", DistKind::Gauss},
            {"laplace", DistKind::Laplace},   {"bernoulli", DistKind::Bernoulli},
            {"binomial", DistKind::Binomial}, {"geometric", DistKind::Geometric},
            {"hypergeometric", DistKind::Hypergeometric},
            {"exponential", DistKind::Exponential}, {"beta", DistKind::Beta},
            {"chi-squared", DistKind::ChiSquared},  {"rayleigh", DistKind::Rayleigh}};
        for (const auto& [n, k] : table)
            if (d.dist_name == n) {
                spec.kind = k;
                found = true;
            }
        if (!found) throw UnknownDistribution(d.dist_pos, d.dist_name);
        for (const auto& p : d.params) {
            Polynomial pp = to_polynomial(p);
            if (!pp.is_constant()) {
                std::string v = *pp.vars().begin();
                throw StructureError(target,
                                     "distribution parameters may not depend on program "
                                     "variables (found '" + v + "')",
                                     p->pos);
            }
            spec.params.push_back(pp.constant_value());
        }
        if (spec.params.size() != dist_arity(spec.kind))
            throw StructureError(target, std::string(dist_name(spec.kind)) + " takes " +
                                             std::to_string(dist_arity(spec.kind)) +
                                             " parameter(s), got " +
                                             std::to_string(spec.params.size()),
                                 d.dist_pos);
        check_dist_constraints(spec, prog, target, d.dist_pos);
        return spec;
    }

    void check_dist_constraints(const DistSpec& d, ProgramSpec& prog, const std::string& target,
                                SourcePos pos) {
        const auto& p = d.params;
        std::string ctx = std::string(dist_name(d.kind)) + " parameters of '" + target + "'";
        switch (d.kind) {
            case DistKind::Uniform:
                require_or_assume(prog, p[1] - p[0], true, ctx, pos);
                break;
            case DistKind::Gauss:
            case DistKind::Laplace:
                require_or_assume(prog, p[1], true, ctx, pos);
                break;
            case DistKind::Bernoulli:
                require_or_assume(prog, p[0], false, ctx, pos);
                require_or_assume(prog, SymExpr::one() - p[0], false, ctx, pos);
                break;
            case DistKind::Binomial:
                require_numeric_nat(p[0], ctx, pos);
                require_or_assume(prog, p[0], false, ctx, pos);
                require_or_assume(prog, p[1], false, ctx, pos);
                require_or_assume(prog, SymExpr::one() - p[1], false, ctx, pos);
                break;
            case DistKind::Geometric:
                require_or_assume(prog, p[0], true, ctx, pos);
                require_or_assume(prog, SymExpr::one() - p[0], false, ctx, pos);
                break;
            case DistKind::Hypergeometric:
                for (int i = 0; i < 3; ++i) {
                    require_numeric_nat(p[i], ctx, pos);
                    require_or_assume(prog, p[i], false, ctx, pos);
                }
                require_or_assume(prog, p[0] - p[1], false, ctx, pos);
                require_or_assume(prog, p[0] - p[2], false, ctx, pos);
                break;
            case DistKind::Exponential:
            case DistKind::ChiSquared:
            case DistKind::Rayleigh:
                require_or_assume(prog, p[0], true, ctx, pos);
                break;
            case DistKind::Beta:
                require_or_assume(prog, p[0], true, ctx, pos);
                require_or_assume(prog, p[1], true, ctx, pos);
                break;
        }
    }

    void validate_init(ProgramSpec& prog) {
        std::set<std::string> seen;
        for (const auto& a : raw_.init) {
            if (!seen.insert(a.target).second)
                throw StructureError(a.target, "initialized more than once", a.pos);
            InitValue iv;
            if (a.is_draw) {
                iv.is_draw = true;
                iv.draw = to_dist(a.draw, prog, a.target, a.pos);
            } else {
                if (a.branches.size() != 1)
                    throw StructureError(a.target,
                                         "probabilistic branching is only allowed in the loop body",
                                         a.pos);
                iv.constant = to_constant(a.branches[0].value, "initializer of '" + a.target + "'");
            }
            prog.init.emplace_back(a.target, std::move(iv));
        }
    }

    void validate_guard(ProgramSpec& prog) {
        prog.guard.lhs = to_polynomial(raw_.guard.lhs);
        prog.guard.rhs = to_polynomial(raw_.guard.rhs);
        prog.guard.cop = raw_.guard.cop;
        prog.guard.normalized = raw_.guard.cop == '>' ? prog.guard.lhs - prog.guard.rhs
                                                      : prog.guard.rhs - prog.guard.lhs;
        for (const auto& v : prog.guard.normalized.vars())
            if (!init_targets_.count(v))
                throw StructureError(v, "read in the loop guard but never initialized",
                                     raw_.guard.pos);
    }

    void validate_body(ProgramSpec& prog) {
        std::set<std::string> drawn, updated;
        for (const auto& a : raw_.body) {
            if (a.is_draw) {
                if (init_targets_.count(a.target))
                    throw StructureError(a.target,
                                         "per-iteration draw target may not also be initialized",
                                         a.pos);
                if (update_targets_.count(a.target))
                    throw StructureError(a.target, "both drawn from a distribution and updated",
                                         a.pos);
                if (!drawn.insert(a.target).second)
                    throw StructureError(a.target, "drawn more than once per iteration", a.pos);
                prog.body_rv.emplace_back(a.target, to_dist(a.draw, prog, a.target, a.pos));
                continue;
            }
            if (!updated.insert(a.target).second)
                throw StructureError(a.target, "updated more than once per iteration", a.pos);
            BranchUpdate upd;
            SymExpr prob_sum = SymExpr::zero();
            bool all_numeric = true;
            for (size_t i = 0; i < a.branches.size(); ++i) {
                const RawBranch& b = a.branches[i];
                Polynomial u = to_polynomial(b.value);
                check_reads(a.target, u, drawn, updated, a.pos);
                SymExpr prob;
                if (b.prob) {
                    prob = to_constant(b.prob, "branch probability of '" + a.target + "'");
                } else {
                    // trailing alternative receives the remainder
                    prob = SymExpr::one() - prob_sum;
                }
                all_numeric = all_numeric && prob.is_rational();
                check_probability(prog, a.target, prob, a.pos);
                prob_sum = prob_sum + prob;
                upd.branches.emplace_back(std::move(u), std::move(prob));
            }
            if (!(prob_sum == SymExpr::one()))
                throw std::logic_error("branch probabilities do not sum to 1");
            (void)all_numeric;
            prog.body_updates.emplace_back(a.target, std::move(upd));
        }
        if (prog.body_updates.empty())
            throw StructureError("", "loop body must contain at least one variable update",
                                 raw_.guard.pos);
    }

    void check_probability(ProgramSpec& prog, const std::string& target, const SymExpr& p,
                           SourcePos pos) {
        std::string ctx = "branch probability of '" + target + "'";
        if (p.is_rational()) {
            Rat r = p.rational_value();
            if (r < 0 || r > 1)
                throw StructureError(target, "branch probability " + p.str() + " lies outside [0,1]",
                                     pos);
            return;
        }
        require_or_assume(prog, p, false, ctx, pos);
        require_or_assume(prog, SymExpr::one() - p, false, ctx, pos);
    }

    void check_reads(const std::string& target, const Polynomial& u,
                     const std::set<std::string>& drawn, const std::set<std::string>& updated,
                     SourcePos pos) {
        unsigned self_deg = u.degree_in(target);
        if (self_deg > 1)
            throw StructureError(target,
                                 "depends on itself with degree " + std::to_string(self_deg) +
                                     " (only linear self-dependence is supported)",
                                 pos);
        if (self_deg == 1 && !init_targets_.count(target))
            throw StructureError(target, "reads its previous value but is never initialized", pos);
        for (const auto& w : u.vars()) {
            if (w == target) continue;
            if (rv_targets_.count(w)) {
                if (!drawn.count(w))
                    throw StructureError(target, "uses '" + w + "' before it is drawn", pos);
                continue;
            }
            if (update_targets_.count(w)) {
                if (!updated.count(w))
                    throw StructureError(target, "reads '" + w + "' before its assignment", pos);
                continue;
            }
            // initialized, never updated in the body: constant during the loop
        }
    }

    void collect_symbols(ProgramSpec& prog) {
        auto absorb = [&prog](const SymExpr& e) {
            for (const auto& s : e.symbols()) prog.symbols.insert(s);
        };
        for (const auto& [v, iv] : prog.init) {
            if (iv.is_draw)
                for (const auto& p : iv.draw.params) absorb(p);
            else
                absorb(iv.constant);
        }
        for (const auto& s : prog.guard.lhs.symbols()) prog.symbols.insert(s);
        for (const auto& s : prog.guard.rhs.symbols()) prog.symbols.insert(s);
        for (const auto& [v, d] : prog.body_rv)
            for (const auto& p : d.params) absorb(p);
        for (const auto& [v, u] : prog.body_updates)
            for (const auto& [poly, prob] : u.branches) {
                for (const auto& s : poly.symbols()) prog.symbols.insert(s);
                absorb(prob);
            }
    }

    const RawProgram& raw_;
    std::set<std::string> assigned_, init_targets_, rv_targets_, update_targets_;
};

} // namespace detail

inline ProgramSpec validate(const RawProgram& raw) { return detail::Validator(raw).run(); }

inline ProgramSpec load_program(std::string_view source) { return validate(parse_program(source)); }

// --- grammar-conform pretty printing ---------------------------------------
// The grammar has no parentheses, so coefficients are distributed over the
// monomials and denominators are emitted as division chains; this is always
// possible for accepted programs because parsed constants have single-term
// denominators.

namespace detail {

inline void emit_grammar_terms(std::ostringstream& os, const Polynomial& p, bool& first) {
    for (const auto& [vm, coeff] : p.terms()) {
        const SymPoly& den = coeff.den();
        if (den.terms().size() != 1)
            throw std::logic_error("cannot render sum denominator in grammar form: " + coeff.str());
        const auto& [den_mono, den_int_signed] = *den.terms().begin();
        Int den_int = den_int_signed; // positive by construction
        for (const auto& [sm, num_int] : coeff.num().terms()) {
            Int a = boost::multiprecision::abs(num_int);
            bool neg = num_int < 0;
            Int g = boost::multiprecision::gcd(a, den_int);
            a /= g;
            Int d = den_int / g;
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            first = false;
            std::vector<std::string> factors;
            if (a != 1) factors.push_back(a.str());
            for (const auto& [s, e] : sm)
                for (unsigned i = 0; i < e; ++i) factors.push_back(s);
            for (const auto& [v, e] : vm) {
                if (e > 1)
                    factors.push_back(v + "**" + std::to_string(e));
                else
                    factors.push_back(v);
            }
            if (factors.empty()) factors.push_back(a.str() == "1" ? "1" : a.str());
            for (size_t i = 0; i < factors.size(); ++i) {
                if (i) os << "*";
                os << factors[i];
            }
            if (d != 1) os << "/" << d.str();
            for (const auto& [s, e] : den_mono) {
                os << "/" << s;
                if (e > 1) os << "**" << e;
            }
        }
    }
}

inline std::string poly_to_grammar(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    emit_grammar_terms(os, p, first);
    return os.str();
}

inline std::string symexpr_to_grammar(const SymExpr& c) {
    return poly_to_grammar(Polynomial(c));
}

} // namespace detail

inline std::string pretty_print(const ProgramSpec& prog) {
    std::ostringstream os;
    for (const auto& [v, iv] : prog.init) {
        os << v << " = ";
        if (iv.is_draw) {
            os << "RV(" << dist_name(iv.draw.kind);
            for (const auto& p : iv.draw.params) os << ", " << detail::symexpr_to_grammar(p);
            os << ")";
        } else {
            os << detail::symexpr_to_grammar(iv.constant);
        }
        os << "\n";
    }
    os << "while " << detail::poly_to_grammar(prog.guard.lhs) << " " << prog.guard.cop << " "
       << detail::poly_to_grammar(prog.guard.rhs) << ":\n";
    for (const auto& [v, d] : prog.body_rv) {
        os << "    " << v << " = RV(" << dist_name(d.kind);
        for (const auto& p : d.params) os << ", " << detail::symexpr_to_grammar(p);
        os << ")\n";
    }
    for (const auto& [v, u] : prog.body_updates) {
        os << "    " << v << " = ";
        for (size_t i = 0; i < u.branches.size(); ++i) {
            if (i) os << "; ";
            os << detail::poly_to_grammar(u.branches[i].first);
            if (i + 1 < u.branches.size())
                os << " @" << detail::symexpr_to_grammar(u.branches[i].second);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace probterm
