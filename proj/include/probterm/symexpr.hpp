// Exact symbolic constants: rationals extended with named symbols that are
// assumed to denote arbitrary positive reals. Values are kept as a ratio of
// integer-coefficient polynomials in the symbols; the denominator always has
// all-positive coefficients, so the sign of an expression is the sign of its
// numerator. Equality is semantic (cross multiplication), hence independent
// of the particular representation.
#pragma once

#include "probterm/rational.hpp"
#include "probterm/trilean.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace probterm {

// Sign of a symbolic constant under every positive assignment of its symbols.
enum class Sign { Positive, Negative, Zero, Unknown };

// Raised when an operation would leave the representable domain, e.g.
// division by an expression whose sign cannot be certified.
class SymDomainError : public std::runtime_error {
  public:
    explicit SymDomainError(const std::string& what) : std::runtime_error(what) {}
};

// Monomial over symbols: symbol name -> positive exponent.
using SymMonomial = std::map<std::string, unsigned>;

inline SymMonomial mono_mul(const SymMonomial& a, const SymMonomial& b) {
    SymMonomial out = a;
    for (const auto& [s, e] : b) out[s] += e;
    return out;
}

// Multivariate polynomial over symbols with integer coefficients.
class SymPoly {
  public:
    SymPoly() = default;
    explicit SymPoly(Int constant) {
        if (constant != 0) terms_[SymMonomial{}] = std::move(constant);
    }
    static SymPoly symbol(const std::string& name) {
        SymPoly p;
        p.terms_[SymMonomial{{name, 1}}] = 1;
        return p;
    }

    const std::map<SymMonomial, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Int constant_value() const {
        if (terms_.empty()) return 0;
        return terms_.begin()->second;
    }

    void add_term(const SymMonomial& m, const Int& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend SymPoly operator+(const SymPoly& a, const SymPoly& b) {
        SymPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend SymPoly operator-(const SymPoly& a, const SymPoly& b) {
        SymPoly out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
        SymPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
        return out;
    }
    SymPoly operator-() const {
        SymPoly out;
        for (const auto& [m, c] : terms_) out.terms_[m] = -c;
        return out;
    }
    friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }

    // Sign certificate: all coefficients share a sign. Sound, incomplete.
    Sign coefficient_sign() const {
        if (terms_.empty()) return Sign::Zero;
        bool any_pos = false, any_neg = false;
        for (const auto& [m, c] : terms_) (c > 0 ? any_pos : any_neg) = true;
        if (any_pos && !any_neg) return Sign::Positive;
        if (any_neg && !any_pos) return Sign::Negative;
        return Sign::Unknown;
    }

    Int content() const {
        Int g = 0;
        for (const auto& [m, c] : terms_) {
            g = boost::multiprecision::gcd(g, boost::multiprecision::abs(c));
            if (g == 1) break;
        }
        return g;
    }

    // Componentwise minimum of all exponent vectors (the common monomial factor).
    SymMonomial monomial_content() const {
        if (terms_.empty()) return {};
        SymMonomial common = terms_.begin()->first;
        for (const auto& [m, c] : terms_) {
            for (auto it = common.begin(); it != common.end();) {
                auto found = m.find(it->first);
                if (found == m.end()) {
                    it = common.erase(it);
                } else {
                    it->second = std::min(it->second, found->second);
                    ++it;
                }
            }
            if (common.empty()) break;
        }
        return common;
    }

    void divide_content(const Int& g, const SymMonomial& m) {
        if (g == 1 && m.empty()) return;
        std::map<SymMonomial, Int> out;
        for (const auto& [mono, c] : terms_) {
            SymMonomial reduced = mono;
            for (const auto& [s, e] : m) {
                auto it = reduced.find(s);
                it->second -= e;
                if (it->second == 0) reduced.erase(it);
            }
            out[std::move(reduced)] = c / g;
        }
        terms_ = std::move(out);
    }

    Rat eval(const std::map<std::string, Rat>& bindings) const {
        Rat total = 0;
        for (const auto& [m, c] : terms_) {
            Rat term = Rat(c);
            for (const auto& [s, e] : m) {
                auto it = bindings.find(s);
                if (it == bindings.end())
                    throw SymDomainError("unbound symbol '" + s + "'");
                term *= rat_pow(it->second, e);
            }
            total += term;
        }
        return total;
    }

    void collect_symbols(std::set<std::string>& out) const {
        for (const auto& [m, c] : terms_)
            for (const auto& [s, e] : m) out.insert(s);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Int a = boost::multiprecision::abs(c);
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            bool coeff_shown = (a != 1) || m.empty();
            if (coeff_shown) os << a.str();
            bool need_star = coeff_shown;
            for (const auto& [s, e] : m) {
                if (need_star) os << "*";
                need_star = true;
                os << s;
                if (e > 1) os << "**" << e;
            }
        }
        return os.str();
    }

  private:
    std::map<SymMonomial, Int> terms_;
};

// A symbolic constant: ratio num/den of SymPoly with den certified positive.
class SymExpr {
  public:
    SymExpr() : num_(), den_(Int(1)) {}
    SymExpr(int v) : num_(Int(v)), den_(Int(1)) {}
    SymExpr(const Int& v) : num_(v), den_(Int(1)) {}
    SymExpr(const Rat& v) : num_(rat_num(v)), den_(rat_den(v)) {}

    static SymExpr symbol(const std::string& name) {
        SymExpr e;
        e.num_ = SymPoly::symbol(name);
        return e;
    }
    static SymExpr zero() { return SymExpr(); }
    static SymExpr one() { return SymExpr(1); }

    const SymPoly& num() const { return num_; }
    const SymPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    Rat rational_value() const {
        if (!is_rational()) throw SymDomainError("not a rational constant: " + str());
        return Rat(num_.constant_value(), den_.constant_value());
    }

    friend SymExpr operator+(const SymExpr& a, const SymExpr& b) {
        return make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend SymExpr operator-(const SymExpr& a, const SymExpr& b) {
        return make(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend SymExpr operator*(const SymExpr& a, const SymExpr& b) {
        return make(a.num_ * b.num_, a.den_ * b.den_);
    }
    SymExpr operator-() const { return make(-num_, den_); }

    // Division requires the divisor's sign to be certified; construction of
    // a value whose denominator could vanish under positivity must fail.
    friend SymExpr operator/(const SymExpr& a, const SymExpr& b) {
        Sign s = b.definite_sign();
        if (s == Sign::Zero) throw SymDomainError("division by zero");
        if (s == Sign::Unknown)
            throw SymDomainError("division by '" + b.str() + "' whose sign cannot be certified");
        if (s == Sign::Negative) return make(-(a.num_ * b.den_), a.den_ * (-b.num_));
        return make(a.num_ * b.den_, a.den_ * b.num_);
    }

    SymExpr pow(long e) const {
        if (e < 0) return SymExpr::one() / pow(-e);
        SymExpr result = SymExpr::one();
        SymExpr acc = *this;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) result = result * acc;
            acc = acc * acc;
        }
        return result;
    }

    friend bool operator==(const SymExpr& a, const SymExpr& b) {
        return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
    }
    friend bool operator!=(const SymExpr& a, const SymExpr& b) { return !(a == b); }

    // Sign under every positive symbol assignment. The denominator is
    // positive by construction, so only the numerator's certificate matters.
    Sign definite_sign() const { return num_.coefficient_sign(); }

    Rat eval(const std::map<std::string, Rat>& bindings) const {
        Rat d = den_.eval(bindings);
        if (d == 0) throw SymDomainError("denominator vanished at evaluation point");
        return num_.eval(bindings) / d;
    }

    std::set<std::string> symbols() const {
        std::set<std::string> out;
        num_.collect_symbols(out);
        den_.collect_symbols(out);
        return out;
    }

    std::string str() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.str();
        std::string n = num_.str();
        std::string d = den_.str();
        bool n_atom = num_.terms().size() <= 1;
        bool d_atom = den_.is_constant() ||
                      (den_.terms().size() == 1 && d.find('*') == std::string::npos &&
                       d.find("**") == std::string::npos);
        std::string out = n_atom ? n : "(" + n + ")";
        out += "/";
        out += d_atom ? d : "(" + d + ")";
        return out;
    }

  private:
    static SymExpr make(SymPoly n, SymPoly d) {
        SymExpr e;
        if (n.is_zero()) {
            e.num_ = SymPoly();
            e.den_ = SymPoly(Int(1));
            return e;
        }
        Int gc = boost::multiprecision::gcd(n.content(), d.content());
        SymMonomial common;
        {
            SymMonomial mn = n.monomial_content();
            SymMonomial md = d.monomial_content();
            for (const auto& [s, exp] : mn) {
                auto it = md.find(s);
                if (it != md.end()) common[s] = std::min(exp, it->second);
            }
        }
        if (gc != 1 || !common.empty()) {
            n.divide_content(gc, common);
            d.divide_content(gc, common);
        }
        e.num_ = std::move(n);
        e.den_ = std::move(d);
        return e;
    }

    SymPoly num_;
    SymPoly den_;
};

// "Is e > 0 for every positive assignment of the symbols?"
// True/False answers are sound; Unknown is the honest fallback.
inline Trilean sym_sign(const SymExpr& e) {
    switch (e.definite_sign()) {
        case Sign::Positive: return Trilean::True;
        case Sign::Negative:
        case Sign::Zero: return Trilean::False;
        default: return Trilean::Unknown;
    }
}

} // namespace probterm
