// Exponential polynomials in the loop counter n: finite sums of
// coeff * n^k * base^n with symbolic coefficients and positive symbolic
// bases. This is the closed-form class of the moment recurrences and the
// value domain of all asymptotic bounding functions.
//
// Two comparison notions live here and must not be confused:
//  - ev_le/ev_ge: pointwise eventual order (f(n) <= g(n) for all large n),
//    used to select among bound candidates;
//  - eventual_sign: sign *bounded away from zero* (Positive means f >= eps
//    eventually for some eps > 0). The proof rules need the bounded-away
//    reading, so a function decaying to 0 has eventual_sign Unknown even
//    though its pointwise sign may be clear.
#pragma once

#include "probterm/symexpr.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

namespace probterm {

enum class BaseOrder { Less, Equal, Greater, Unknown };

// Compares two positive bases by value, via the positivity certificates.
inline BaseOrder compare_bases(const SymExpr& a, const SymExpr& b) {
    if (a == b) return BaseOrder::Equal;
    switch ((a - b).definite_sign()) {
        case Sign::Positive: return BaseOrder::Greater;
        case Sign::Negative: return BaseOrder::Less;
        case Sign::Zero: return BaseOrder::Equal;
        default: return BaseOrder::Unknown;
    }
}

class ExpPoly {
  public:
    struct Term {
        SymExpr coeff;
        unsigned degree = 0; // power of n
        SymExpr base;        // certified positive
    };

    ExpPoly() = default;

    static ExpPoly constant(const SymExpr& c) {
        ExpPoly f;
        f.add_term(c, 0, SymExpr::one());
        return f;
    }
    // c * n^k * base^n
    static ExpPoly term(const SymExpr& c, unsigned k, const SymExpr& base) {
        ExpPoly f;
        f.add_term(c, k, base);
        return f;
    }
    static ExpPoly n() { return term(SymExpr::one(), 1, SymExpr::one()); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_[0].degree == 0 && terms_[0].base == SymExpr::one());
    }
    SymExpr constant_value() const {
        if (terms_.empty()) return SymExpr::zero();
        return terms_[0].coeff;
    }

    void add_term(const SymExpr& c, unsigned k, const SymExpr& base) {
        if (c.is_zero()) return;
        if (base.definite_sign() != Sign::Positive)
            throw SymDomainError("exponential base '" + base.str() + "' is not certified positive");
        for (auto& t : terms_) {
            if (t.degree == k && t.base == base) {
                t.coeff = t.coeff + c;
                if (t.coeff.is_zero())
                    terms_.erase(terms_.begin() + (&t - terms_.data()));
                return;
            }
        }
        terms_.push_back(Term{c, k, base});
        sort_terms();
    }

    friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
        ExpPoly out = a;
        for (const auto& t : b.terms_) out.add_term(t.coeff, t.degree, t.base);
        return out;
    }
    friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) {
        ExpPoly out = a;
        for (const auto& t : b.terms_) out.add_term(-t.coeff, t.degree, t.base);
        return out;
    }
    ExpPoly operator-() const {
        ExpPoly out;
        for (const auto& t : terms_) out.terms_.push_back(Term{-t.coeff, t.degree, t.base});
        return out;
    }
    ExpPoly scaled(const SymExpr& c) const {
        ExpPoly out;
        if (c.is_zero()) return out;
        for (const auto& t : terms_) out.terms_.push_back(Term{t.coeff * c, t.degree, t.base});
        return out;
    }
    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
        ExpPoly out;
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_)
                out.add_term(ta.coeff * tb.coeff, ta.degree + tb.degree, ta.base * tb.base);
        return out;
    }

    // f(n + delta); delta may be negative (bases are positive, so invertible).
    ExpPoly shifted(long delta) const {
        ExpPoly out;
        for (const auto& t : terms_) {
            SymExpr scale = t.base.pow(delta);
            // (n + delta)^k expanded binomially
            Int binom = 1;
            std::vector<Int> coeffs(t.degree + 1);
            for (unsigned j = 0; j <= t.degree; ++j) {
                // C(k, j) * delta^(k-j)
                Int c = binomial(t.degree, j);
                Int p = int_pow(delta, t.degree - j);
                coeffs[j] = c * p;
            }
            for (unsigned j = 0; j <= t.degree; ++j) {
                if (coeffs[j] == 0) continue;
                out.add_term(t.coeff * scale * SymExpr(coeffs[j]), j, t.base);
            }
        }
        return out;
    }

    friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return (a - b).is_zero(); }

    Rat eval(unsigned long n, const std::map<std::string, Rat>& bindings) const {
        Rat total = 0;
        for (const auto& t : terms_) {
            Rat v = t.coeff.eval(bindings);
            for (unsigned long i = 0; i < t.degree; ++i) v *= Rat(Int(n));
            v *= rat_pow(t.base.eval(bindings), static_cast<long>(n));
            total += v;
        }
        return total;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            std::string c = t.coeff.str();
            bool neg = !c.empty() && c[0] == '-';
            if (neg) c = c.substr(1);
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            first = false;
            bool has_factor = t.degree > 0 || !(t.base == SymExpr::one());
            bool coeff_shown = !(has_factor && c == "1");
            bool wrap = coeff_shown && has_factor &&
                        (c.find(" + ") != std::string::npos || c.find(" - ") != std::string::npos);
            if (coeff_shown) os << (wrap ? "(" + c + ")" : c);
            if (t.degree > 0) {
                if (coeff_shown) os << "*";
                os << "n";
                if (t.degree > 1) os << "**" << t.degree;
            }
            if (!(t.base == SymExpr::one())) {
                if (coeff_shown || t.degree > 0) os << "*";
                std::string b = t.base.str();
                bool atom = b.find_first_of("+-*/ ") == std::string::npos;
                os << (atom ? b : "(" + b + ")") << "^n";
            }
        }
        return os.str();
    }

    // The term of (asymptotically) greatest growth order, when every pairwise
    // comparison it participates in is resolvable; nullopt otherwise.
    std::optional<Term> leading_term() const {
        if (terms_.empty()) return std::nullopt;
        Term lead = terms_[0];
        for (size_t i = 1; i < terms_.size(); ++i) {
            BaseOrder bo = compare_bases(terms_[i].base, lead.base);
            if (bo == BaseOrder::Unknown) return std::nullopt;
            if (bo == BaseOrder::Greater ||
                (bo == BaseOrder::Equal && terms_[i].degree > lead.degree))
                lead = terms_[i];
        }
        return lead;
    }

  private:
    static Int binomial(unsigned nn, unsigned kk) {
        Int r = 1;
        for (unsigned i = 0; i < kk; ++i) r = r * Int(nn - i) / Int(i + 1);
        return r;
    }
    static Int int_pow(long b, unsigned e) {
        Int r = 1;
        for (unsigned i = 0; i < e; ++i) r *= Int(b);
        return r;
    }

    void sort_terms() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            std::string sa = a.base.str(), sb = b.base.str();
            if (sa != sb) return sa < sb;
            return a.degree > b.degree;
        });
    }

    std::vector<Term> terms_;
};

// Growth comparison: True iff |g(n)| / |f(n)| stays bounded as n grows,
// i.e. f grows at least as fast as g.
inline Trilean dominates(const ExpPoly& f, const ExpPoly& g) {
    if (g.is_zero()) return Trilean::True;
    if (f.is_zero()) return Trilean::False;
    auto lf = f.leading_term();
    auto lg = g.leading_term();
    if (!lf || !lg) return Trilean::Unknown;
    switch (compare_bases(lf->base, lg->base)) {
        case BaseOrder::Greater: return Trilean::True;
        case BaseOrder::Less: return Trilean::False;
        case BaseOrder::Unknown: return Trilean::Unknown;
        case BaseOrder::Equal: break;
    }
    if (lf->degree != lg->degree)
        return lf->degree > lg->degree ? Trilean::True : Trilean::False;
    // Same growth class; resolved when both coefficient signs are certified.
    Sign sf = lf->coeff.definite_sign(), sg = lg->coeff.definite_sign();
    if (sf == Sign::Unknown || sg == Sign::Unknown) return Trilean::Unknown;
    return Trilean::True;
}

// Sign of f, eventually and bounded away from zero:
//   Positive: exists eps > 0 with f(n) >= eps for all large n;
//   Negative: exists eps > 0 with f(n) <= -eps for all large n;
//   Zero: f is identically zero.
// Requires the leading term to be resolvable and not below the constant
// level (a function decaying to 0 admits no eps), else Unknown.
inline Sign eventual_sign(const ExpPoly& f) {
    if (f.is_zero()) return Sign::Zero;
    auto lead = f.leading_term();
    if (!lead) return Sign::Unknown;
    BaseOrder vs_one = compare_bases(lead->base, SymExpr::one());
    if (vs_one == BaseOrder::Unknown || vs_one == BaseOrder::Less) return Sign::Unknown;
    Sign s = lead->coeff.definite_sign();
    if (s == Sign::Positive || s == Sign::Negative) return s;
    return Sign::Unknown;
}

// Pointwise eventual sign (no bounded-away requirement); for ordering only.
inline Sign pointwise_eventual_sign(const ExpPoly& f) {
    if (f.is_zero()) return Sign::Zero;
    auto lead = f.leading_term();
    if (!lead) return Sign::Unknown;
    Sign s = lead->coeff.definite_sign();
    if (s == Sign::Positive || s == Sign::Negative) return s;
    return Sign::Unknown;
}

// f(n) <= g(n) for all large n?
inline Trilean ev_le(const ExpPoly& f, const ExpPoly& g) {
    switch (pointwise_eventual_sign(g - f)) {
        case Sign::Zero:
        case Sign::Positive: return Trilean::True;
        case Sign::Negative: return Trilean::False;
        default: return Trilean::Unknown;
    }
}

inline Trilean ev_ge(const ExpPoly& f, const ExpPoly& g) { return ev_le(g, f); }

inline std::optional<SymExpr> certified_abs(const SymExpr& e) {
    switch (e.definite_sign()) {
        case Sign::Positive: return e;
        case Sign::Negative: return -e;
        case Sign::Zero: return SymExpr::zero();
        default: return std::nullopt;
    }
}

// A symbolic constant K with |f(n)| <= K for all n >= 0, when f is dominated
// by a constant. Terms n^k * rho^n with rho < 1 are bounded via
// sup n^k rho^n <= (k / ln(1/rho))^k <= (k / (1-rho))^k.
inline std::optional<SymExpr> constant_magnitude_bound(const ExpPoly& f) {
    SymExpr total = SymExpr::zero();
    for (const auto& t : f.terms()) {
        auto mag = certified_abs(t.coeff);
        if (!mag) return std::nullopt;
        BaseOrder vs_one = compare_bases(t.base, SymExpr::one());
        if (vs_one == BaseOrder::Equal) {
            if (t.degree > 0) return std::nullopt;
            total = total + *mag;
        } else if (vs_one == BaseOrder::Less) {
            if (t.degree == 0) {
                total = total + *mag;
            } else {
                SymExpr gap = SymExpr::one() - t.base; // certified positive here
                total = total + *mag * (SymExpr(Int(t.degree)) / gap).pow(t.degree);
            }
        } else {
            return std::nullopt;
        }
    }
    return total;
}

} // namespace probterm
