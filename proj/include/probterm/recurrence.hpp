// Closed forms of first-order linear recurrences f(n+1) = a f(n) + g(n)
// with exponential-polynomial inhomogeneous part. For a g-term c n^k rho^n
// the particular solution has degree k and base rho when rho != a, and
// degree k+1 with base a when rho == a (resonance). Whether rho equals a is
// decided exactly; when the two cannot be separated (their difference has
// no certified sign) the solution is ambiguous and we refuse.
#pragma once

#include "probterm/diagnostics.hpp"
#include "probterm/exppoly.hpp"

#include <vector>

namespace probterm {

inline SymExpr exp_poly_value_at_zero(const ExpPoly& f) {
    SymExpr v = SymExpr::zero();
    for (const auto& t : f.terms())
        if (t.degree == 0) v = v + t.coeff; // n^k = 0 at n=0 for k>0; rho^0 = 1
    return v;
}

namespace detail {

inline Int binom_int(unsigned n, unsigned k) {
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) r = r * Int(n - i) / Int(i + 1);
    return r;
}

// Particular solution for a single inhomogeneous term c n^k rho^n.
inline ExpPoly particular_for_term(const SymExpr& a, const SymExpr& c, unsigned k,
                                   const SymExpr& rho) {
    BaseOrder cmp = compare_bases(rho, a);
    if (cmp == BaseOrder::Unknown)
        throw ResonanceAmbiguity("cannot separate base " + rho.str() +
                                 " from recurrence coefficient " + a.str());
    if (cmp == BaseOrder::Equal) {
        // p(n) = sum_j d_j n^(j+1) a^n; triangular solve from j = k down
        std::vector<SymExpr> d(k + 1, SymExpr::zero());
        d[k] = c / (a * SymExpr(Int(k + 1)));
        for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
            SymExpr acc = SymExpr::zero();
            for (unsigned j = i + 1; j <= k; ++j)
                acc = acc + d[j] * SymExpr(binom_int(j + 1, i));
            d[i] = -acc / SymExpr(Int(i + 1));
        }
        ExpPoly p;
        for (unsigned j = 0; j <= k; ++j) p.add_term(d[j], j + 1, a);
        return p;
    }
    // p(n) = sum_j d_j n^j rho^n with rho - a certifiably nonzero
    SymExpr gap = rho - a;
    std::vector<SymExpr> d(k + 1, SymExpr::zero());
    d[k] = c / gap;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
        SymExpr acc = SymExpr::zero();
        for (unsigned j = i + 1; j <= k; ++j) acc = acc + d[j] * SymExpr(binom_int(j, i));
        d[i] = -(rho * acc) / gap;
    }
    ExpPoly p;
    for (unsigned j = 0; j <= k; ++j) p.add_term(d[j], j, rho);
    return p;
}

} // namespace detail

// Solves f(n+1) = a f(n) + g(n) with f(start) = anchor; the result is exact
// for all n >= start. Requires a certified positive (the homogeneous base).
inline ExpPoly solve_linear_recurrence(const SymExpr& a, const ExpPoly& g, const SymExpr& anchor,
                                       unsigned start = 0) {
    if (a.definite_sign() != Sign::Positive)
        throw ClosedFormUnrepresentable(
            "recurrence coefficient " + a.str() +
            " is not certified positive; closed form not representable");
    ExpPoly particular;
    for (const auto& t : g.terms())
        particular = particular + detail::particular_for_term(a, t.coeff, t.degree, t.base);
    // homogeneous adjustment pinned at n = start
    SymExpr p_at_start = exp_poly_value_at_zero(particular.shifted(static_cast<long>(start)));
    SymExpr h = (anchor - p_at_start) / a.pow(static_cast<long>(start));
    ExpPoly out = particular;
    out.add_term(h, 0, a);
    return out;
}

} // namespace probterm
