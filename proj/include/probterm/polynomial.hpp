// Multivariate polynomials over program variables with symbolic-constant
// coefficients: the representation of guards, update right-hand sides and
// martingale expressions.
#pragma once

#include "probterm/symexpr.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace probterm {

using VarMonomial = std::map<std::string, unsigned>;

inline VarMonomial var_mono_mul(const VarMonomial& a, const VarMonomial& b) {
    VarMonomial out = a;
    for (const auto& [v, e] : b) out[v] += e;
    return out;
}

inline unsigned var_mono_total_degree(const VarMonomial& m) {
    unsigned d = 0;
    for (const auto& [v, e] : m) d += e;
    return d;
}

inline std::string var_mono_str(const VarMonomial& m) {
    if (m.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : m) {
        if (!first) os << "*";
        first = false;
        os << v;
        if (e > 1) os << "**" << e;
    }
    return os.str();
}

class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(const SymExpr& c) {
        if (!c.is_zero()) terms_[VarMonomial{}] = c;
    }
    static Polynomial variable(const std::string& name) {
        Polynomial p;
        p.terms_[VarMonomial{{name, 1}}] = SymExpr::one();
        return p;
    }
    static Polynomial monomial(const VarMonomial& m, const SymExpr& c = SymExpr::one()) {
        Polynomial p;
        if (!c.is_zero()) p.terms_[m] = c;
        return p;
    }

    const std::map<VarMonomial, SymExpr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    SymExpr constant_value() const {
        if (terms_.empty()) return SymExpr::zero();
        return terms_.begin()->second;
    }

    void add_term(const VarMonomial& m, const SymExpr& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(var_mono_mul(ma, mb), ca * cb);
        return out;
    }
    Polynomial operator-() const {
        Polynomial out;
        for (const auto& [m, c] : terms_) out.terms_[m] = -c;
        return out;
    }
    Polynomial scaled(const SymExpr& c) const {
        Polynomial out;
        if (c.is_zero()) return out;
        for (const auto& [m, co] : terms_) out.terms_[m] = co * c;
        return out;
    }
    Polynomial pow(unsigned e) const {
        Polynomial r(SymExpr::one());
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return (a - b).is_zero();
    }

    std::set<std::string> vars() const {
        std::set<std::string> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m) out.insert(v);
        return out;
    }

    unsigned degree_in(const std::string& v) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(v);
            if (it != m.end()) d = std::max(d, it->second);
        }
        return d;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, var_mono_total_degree(m));
        return d;
    }

    // Sum of coeff * (monomial / v^d) over monomials where v has exponent d.
    Polynomial coefficient_poly(const std::string& v, unsigned d) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(v);
            unsigned e = it == m.end() ? 0 : it->second;
            if (e != d) continue;
            VarMonomial rest = m;
            rest.erase(v);
            out.add_term(rest, c);
        }
        return out;
    }

    Polynomial substituted(const std::string& v, const Polynomial& replacement) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(v);
            if (it == m.end()) {
                out.add_term(m, c);
                continue;
            }
            VarMonomial rest = m;
            rest.erase(v);
            Polynomial piece = Polynomial::monomial(rest, c) * replacement.pow(it->second);
            out = out + piece;
        }
        return out;
    }

    // Replaces every power v^k with the scalar moment(k); used to average
    // out per-iteration random draws, which are independent of the state.
    Polynomial powers_replaced(const std::string& v,
                               const std::function<SymExpr(unsigned)>& moment) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            auto it = m.find(v);
            if (it == m.end()) {
                out.add_term(m, c);
                continue;
            }
            VarMonomial rest = m;
            rest.erase(v);
            out.add_term(rest, c * moment(it->second));
        }
        return out;
    }

    Rat eval(const std::map<std::string, Rat>& var_values,
             const std::map<std::string, Rat>& symbol_bindings) const {
        Rat total = 0;
        for (const auto& [m, c] : terms_) {
            Rat t = c.eval(symbol_bindings);
            for (const auto& [v, e] : m) {
                auto it = var_values.find(v);
                if (it == var_values.end())
                    throw SymDomainError("unbound variable '" + v + "'");
                t *= rat_pow(it->second, e);
            }
            total += t;
        }
        return total;
    }

    std::set<std::string> symbols() const {
        std::set<std::string> out;
        for (const auto& [m, c] : terms_)
            for (const auto& s : c.symbols()) out.insert(s);
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            std::string cs = c.str();
            bool neg = !cs.empty() && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
            first = false;
            if (m.empty()) {
                os << cs;
                continue;
            }
            if (cs != "1") {
                bool wrap = cs.find(" + ") != std::string::npos ||
                            cs.find(" - ") != std::string::npos;
                os << (wrap ? "(" + cs + ")" : cs) << "*";
            }
            os << var_mono_str(m);
        }
        return os.str();
    }

  private:
    std::map<VarMonomial, SymExpr> terms_;
};

} // namespace probterm
