// Raw moments and supports of the grammar distributions, with symbolic
// parameters. A moment that is not an exact rational function of the
// parameters (odd rayleigh moments need sqrt(pi), hypergeometric moments of
// order > 2 are not implemented) is reported as Unavailable (nullopt); the
// callers degrade to Maybe, never crash.
//
// Parameter conventions: uniform(a, b) endpoints; gauss(mu, variance);
// laplace(mu, scale); bernoulli(p); binomial(n, p); geometric(p) counting
// failures before the first success on {0, 1, ...}; hypergeometric(N, K, n);
// exponential(rate); beta(alpha, beta); chi-squared(k); rayleigh(sigma).
#pragma once

#include "probterm/program.hpp"
#include "probterm/symexpr.hpp"

#include <optional>

namespace probterm {

namespace detail {

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int double_factorial(unsigned n) { // n!! with (-1)!! = 1
    Int r = 1;
    for (unsigned i = n; i > 1; i -= 2) r *= i;
    return r;
}

inline Int binom_coeff(unsigned n, unsigned k) {
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) r = r * Int(n - i) / Int(i + 1);
    return r;
}

inline Int stirling2(unsigned n, unsigned k) {
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0 || k > n) return 0;
    return Int(k) * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

// x (x-1) ... (x-j+1)
inline SymExpr falling_factorial(const SymExpr& x, unsigned j) {
    SymExpr r = SymExpr::one();
    for (unsigned i = 0; i < j; ++i) r = r * (x - SymExpr(Int(i)));
    return r;
}

} // namespace detail

// Exact k-th raw moment of d, when it is a rational function of the
// parameters; nullopt otherwise.
inline std::optional<SymExpr> raw_moment(const DistSpec& d, unsigned k) {
    using detail::binom_coeff;
    using detail::double_factorial;
    using detail::factorial;
    using detail::stirling2;
    if (k == 0) return SymExpr::one();
    const auto& p = d.params;
    try {
        switch (d.kind) {
            case DistKind::Uniform: {
                // (b^(k+1) - a^(k+1)) / ((k+1)(b-a)), in the factored form
                // sum_{i+j=k} a^i b^j / (k+1) that needs no division by b-a.
                SymExpr sum = SymExpr::zero();
                for (unsigned i = 0; i <= k; ++i) sum = sum + p[0].pow(i) * p[1].pow(k - i);
                return sum / SymExpr(Int(k + 1));
            }
            case DistKind::Gauss: {
                // X = mu + sigma Z; E[Z^j] = (j-1)!! for even j, 0 for odd.
                SymExpr sum = SymExpr::zero();
                for (unsigned j = 0; j <= k; j += 2)
                    sum = sum + SymExpr(binom_coeff(k, j) * double_factorial(j > 0 ? j - 1 : 0)) *
                                    p[0].pow(k - j) * p[1].pow(j / 2);
                return sum;
            }
            case DistKind::Laplace: {
                // E[L^j] = j! for even j (standard Laplace), 0 for odd.
                SymExpr sum = SymExpr::zero();
                for (unsigned j = 0; j <= k; j += 2)
                    sum = sum + SymExpr(binom_coeff(k, j) * factorial(j)) * p[0].pow(k - j) *
                                    p[1].pow(j);
                return sum;
            }
            case DistKind::Bernoulli:
                return p[0]; // X^k = X on {0,1}
            case DistKind::Binomial: {
                SymExpr sum = SymExpr::zero();
                for (unsigned j = 1; j <= k; ++j)
                    sum = sum + SymExpr(stirling2(k, j)) * detail::falling_factorial(p[0], j) *
                                    p[1].pow(j);
                return sum;
            }
            case DistKind::Geometric: {
                // sum_i i! S(k,i) ((1-p)/p)^i, failures before first success
                SymExpr q_over_p = (SymExpr::one() - p[0]) / p[0];
                SymExpr sum = SymExpr::zero();
                for (unsigned i = 1; i <= k; ++i)
                    sum = sum + SymExpr(factorial(i) * stirling2(k, i)) * q_over_p.pow(i);
                return sum;
            }
            case DistKind::Hypergeometric: {
                const SymExpr &N = p[0], &K = p[1], &n = p[2];
                if (k == 1) return n * K / N;
                if (k == 2) {
                    SymExpr mean = n * K / N;
                    SymExpr second = mean + n * (n - SymExpr::one()) * K * (K - SymExpr::one()) /
                                                (N * (N - SymExpr::one()));
                    return second;
                }
                return std::nullopt;
            }
            case DistKind::Exponential:
                return SymExpr(factorial(k)) / p[0].pow(k);
            case DistKind::Beta: {
                SymExpr r = SymExpr::one();
                for (unsigned i = 0; i < k; ++i)
                    r = r * (p[0] + SymExpr(Int(i))) / (p[0] + p[1] + SymExpr(Int(i)));
                return r;
            }
            case DistKind::ChiSquared: {
                SymExpr r = SymExpr::one();
                for (unsigned i = 0; i < k; ++i) r = r * (p[0] + SymExpr(Int(2 * i)));
                return r;
            }
            case DistKind::Rayleigh: {
                if (k % 2 != 0) return std::nullopt; // odd moments involve sqrt(pi)
                // X^2 / (2 sigma^2) ~ Exp(1), so E[X^(2m)] = (2 sigma^2)^m m!
                unsigned m = k / 2;
                return (SymExpr(2) * p[0] * p[0]).pow(m) * SymExpr(factorial(m));
            }
        }
    } catch (const SymDomainError&) {
        // a division whose sign could not be certified (e.g. symbolic N-1)
        return std::nullopt;
    }
    return std::nullopt;
}

struct SupportInterval {
    bool lo_finite = false;
    bool hi_finite = false;
    SymExpr lo, hi; // meaningful when the side is finite

    std::string str() const {
        std::string out = lo_finite ? "[" + lo.str() : "(-inf";
        out += ", ";
        out += hi_finite ? hi.str() + "]" : "+inf)";
        return out;
    }
};

inline SupportInterval support(const DistSpec& d) {
    const auto& p = d.params;
    SupportInterval s;
    auto finite = [](const SymExpr& lo, const SymExpr& hi) {
        return SupportInterval{true, true, lo, hi};
    };
    switch (d.kind) {
        case DistKind::Uniform: return finite(p[0], p[1]);
        case DistKind::Bernoulli:
        case DistKind::Beta: return finite(SymExpr::zero(), SymExpr::one());
        case DistKind::Binomial: return finite(SymExpr::zero(), p[0]);
        case DistKind::Gauss:
        case DistKind::Laplace: return s; // whole line
        case DistKind::Exponential:
        case DistKind::ChiSquared:
        case DistKind::Rayleigh:
        case DistKind::Geometric:
            s.lo_finite = true;
            s.lo = SymExpr::zero();
            return s;
        case DistKind::Hypergeometric: {
            const SymExpr &N = p[0], &K = p[1], &n = p[2];
            SymExpr lo = SymExpr::zero();
            SymExpr slack = n + K - N; // true lower end is max(0, n+K-N)
            if (slack.definite_sign() == Sign::Positive) lo = slack;
            SymExpr hi = n; // true upper end is min(n, K); either is a sound outer choice
            if ((n - K).definite_sign() == Sign::Positive) hi = K;
            return finite(lo, hi);
        }
    }
    return s;
}

} // namespace probterm
