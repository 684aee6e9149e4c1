// Deterministic generator of random finite-support programs (Bernoulli-style
// branching, concrete rational constants) whose moment closure stays small:
// x is affine in itself, y is affine in itself and polynomial in x and the
// draws. Used for oracle-equivalence and robustness tests.
#pragma once

#include "probterm/program.hpp"

#include <random>
#include <sstream>
#include <string>

namespace probterm::testing {

inline std::string random_program_source(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> small(0, 3), coin(0, 1), num(1, 5), den(1, 3);
    auto rational = [&](bool allow_neg) {
        std::ostringstream os;
        if (allow_neg && coin(rng)) os << "-";
        os << num(rng);
        int d = den(rng);
        if (d > 1) os << "/" << d;
        return os.str();
    };

    std::ostringstream os;
    os << "x = " << rational(true) << "\n";
    bool two_vars = coin(rng);
    bool with_draw = coin(rng);
    if (two_vars) os << "y = " << rational(true) << "\n";
    os << "while x > 0:\n";
    if (with_draw) {
        if (coin(rng))
            os << "    r = RV(bernoulli, 1/" << den(rng) + 1 << ")\n";
        else
            os << "    r = RV(binomial, " << num(rng) << ", 1/" << den(rng) + 1 << ")\n";
    }
    auto affine_self = [&](const std::string& v) {
        std::ostringstream u;
        int a = small(rng); // self coefficient in {0..3}
        bool first = true;
        if (a) {
            if (a > 1) u << a << "*";
            u << v;
            first = false;
        }
        if (with_draw && coin(rng)) {
            u << (first ? "" : " + ") << "r";
            first = false;
        }
        if (first || coin(rng)) u << (first ? "" : " + ") << rational(false);
        return u.str();
    };
    // x update: one or two branches
    os << "    x = " << affine_self("x");
    if (coin(rng)) os << " @1/2; " << affine_self("x");
    os << "\n";
    if (two_vars) {
        std::ostringstream u;
        int b = small(rng);
        if (b) u << b << "*y + ";
        u << (coin(rng) ? "x*x" : "x");
        if (with_draw && coin(rng)) u << " + r";
        if (coin(rng)) u << " - " << rational(false);
        os << "    y = " << u.str();
        if (coin(rng)) os << " @1/3; " << (b ? "y" : "0");
        os << "\n";
    }
    return os.str();
}

} // namespace probterm::testing
