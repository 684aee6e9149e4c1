// Function intervals: lower/upper envelopes of n-indexed quantities, with
// exponential-polynomial endpoints extended by -inf/+inf. All orderings are
// "pointwise eventually" (they hold for all large n); an endpoint that cannot
// be compared soundly degrades to the infinite bound on its side.
#pragma once

#include "probterm/exppoly.hpp"
#include "probterm/polynomial.hpp"

#include <map>
#include <string>
#include <vector>

namespace probterm {

struct FnBound {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::Finite;
    ExpPoly value; // meaningful only when finite

    static FnBound neg_inf() { return {Kind::NegInf, {}}; }
    static FnBound pos_inf() { return {Kind::PosInf, {}}; }
    static FnBound finite(ExpPoly f) { return {Kind::Finite, std::move(f)}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_neg_inf() const { return kind == Kind::NegInf; }
    bool is_pos_inf() const { return kind == Kind::PosInf; }

    FnBound operator-() const {
        if (kind == Kind::NegInf) return pos_inf();
        if (kind == Kind::PosInf) return neg_inf();
        return finite(-value);
    }

    std::string str() const {
        if (kind == Kind::NegInf) return "-inf";
        if (kind == Kind::PosInf) return "+inf";
        return value.str();
    }
};

inline FnBound bound_add(const FnBound& a, const FnBound& b) {
    // Mixed infinities cannot arise: sums are built per side (lo with lo,
    // hi with hi), so we only need the absorbing cases.
    if (a.is_neg_inf() || b.is_neg_inf()) return FnBound::neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return FnBound::pos_inf();
    return FnBound::finite(a.value + b.value);
}

// Product of two endpoint candidates. Returns false when a factor's sign is
// needed but cannot be resolved (the caller widens to the whole line).
inline bool bound_mul(const FnBound& a, const FnBound& b, FnBound& out) {
    if (a.is_finite() && b.is_finite()) {
        out = FnBound::finite(a.value * b.value);
        return true;
    }
    const FnBound& inf = a.is_finite() ? b : a;
    const FnBound& other = a.is_finite() ? a : b;
    int inf_sign = inf.is_pos_inf() ? 1 : -1;
    Sign s;
    if (other.is_finite()) {
        s = pointwise_eventual_sign(other.value);
        if (s == Sign::Zero) {
            // An endpoint identically 0 annihilates the product.
            out = FnBound::finite(ExpPoly());
            return true;
        }
    } else {
        s = other.is_pos_inf() ? Sign::Positive : Sign::Negative;
    }
    if (s == Sign::Unknown) return false;
    out = (s == Sign::Positive) == (inf_sign == 1) ? FnBound::pos_inf() : FnBound::neg_inf();
    return true;
}

// Eventual order between extended bounds; Unknown when not resolvable.
inline Trilean bound_le(const FnBound& a, const FnBound& b) {
    if (a.is_neg_inf() || b.is_pos_inf()) return Trilean::True;
    if (a.is_pos_inf()) return b.is_pos_inf() ? Trilean::True : Trilean::False;
    if (b.is_neg_inf()) return a.is_neg_inf() ? Trilean::True : Trilean::False;
    return ev_le(a.value, b.value);
}

// Least upper candidate; degrades to +inf when the order does not resolve.
inline FnBound bound_max(const std::vector<FnBound>& candidates) {
    FnBound best = FnBound::neg_inf();
    for (const auto& c : candidates) {
        if (c.is_pos_inf()) return FnBound::pos_inf();
        if (c.is_neg_inf()) continue;
        if (best.is_neg_inf()) {
            best = c;
            continue;
        }
        Trilean le = bound_le(c, best);
        if (le == Trilean::True) continue;
        if (bound_le(best, c) == Trilean::True) {
            best = c;
            continue;
        }
        return FnBound::pos_inf();
    }
    return best;
}

inline FnBound bound_min(const std::vector<FnBound>& candidates) {
    std::vector<FnBound> flipped;
    flipped.reserve(candidates.size());
    for (const auto& c : candidates) flipped.push_back(-c);
    return -bound_max(flipped);
}

struct FnInterval {
    FnBound lo = FnBound::neg_inf();
    FnBound hi = FnBound::pos_inf();

    static FnInterval whole() { return {FnBound::neg_inf(), FnBound::pos_inf()}; }
    static FnInterval exact(const ExpPoly& f) { return {FnBound::finite(f), FnBound::finite(f)}; }
    static FnInterval of(FnBound lo, FnBound hi) { return {std::move(lo), std::move(hi)}; }

    bool is_point() const {
        return lo.is_finite() && hi.is_finite() && lo.value == hi.value;
    }

    std::string str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }
};

inline FnInterval interval_add(const FnInterval& a, const FnInterval& b) {
    return {bound_add(a.lo, b.lo), bound_add(a.hi, b.hi)};
}

inline FnInterval interval_mul(const FnInterval& a, const FnInterval& b) {
    FnBound prods[4];
    const FnBound* pa[2] = {&a.lo, &a.hi};
    const FnBound* pb[2] = {&b.lo, &b.hi};
    std::vector<FnBound> cands;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            FnBound& out = prods[i * 2 + j];
            if (!bound_mul(*pa[i], *pb[j], out)) return FnInterval::whole();
            cands.push_back(out);
        }
    return {bound_min(cands), bound_max(cands)};
}

inline FnInterval interval_pow(const FnInterval& a, unsigned e) {
    FnInterval r = FnInterval::exact(ExpPoly::constant(SymExpr::one()));
    for (unsigned i = 0; i < e; ++i) r = interval_mul(r, a);
    return r;
}

inline FnInterval interval_scale(const FnInterval& a, const SymExpr& c) {
    Sign s = c.definite_sign();
    if (s == Sign::Zero) return FnInterval::exact(ExpPoly());
    auto scale_bound = [&](const FnBound& b, bool flip) -> FnBound {
        if (b.is_finite()) return FnBound::finite(b.value.scaled(c));
        bool pos = b.is_pos_inf();
        if (flip) pos = !pos;
        return pos ? FnBound::pos_inf() : FnBound::neg_inf();
    };
    if (s == Sign::Positive) return {scale_bound(a.lo, false), scale_bound(a.hi, false)};
    if (s == Sign::Negative) return {scale_bound(a.hi, true), scale_bound(a.lo, true)};
    // Unknown sign: a point interval stays exact, anything else widens.
    if (a.is_point()) return FnInterval::exact(a.lo.value.scaled(c));
    return FnInterval::whole();
}

// Sound interval extension of a polynomial: monomial-wise products of the
// variables' envelopes, coefficient-scaled and summed.
inline FnInterval poly_eval_bounds(const Polynomial& p,
                                   const std::map<std::string, FnInterval>& env) {
    FnInterval total = FnInterval::exact(ExpPoly());
    for (const auto& [mono, coeff] : p.terms()) {
        FnInterval term = FnInterval::exact(ExpPoly::constant(SymExpr::one()));
        for (const auto& [v, e] : mono) {
            auto it = env.find(v);
            if (it == env.end())
                throw SymDomainError("poly_eval_bounds: no envelope for variable '" + v + "'");
            term = interval_mul(term, interval_pow(it->second, e));
        }
        total = interval_add(total, interval_scale(term, coeff));
    }
    return total;
}

} // namespace probterm
