#include "probterm/exppoly.hpp"

#include "support/generators.hpp"

#include <catch_amalgamated.hpp>

using namespace probterm;

namespace {

ExpPoly n_pow(unsigned k) { return ExpPoly::term(SymExpr::one(), k, SymExpr::one()); }
ExpPoly exp_base(const Rat& r) { return ExpPoly::term(SymExpr::one(), 0, SymExpr(r)); }

} // namespace

TEST_CASE("term merging and arithmetic") {
    ExpPoly f = n_pow(1) + n_pow(1);
    REQUIRE(f.terms().size() == 1);
    CHECK(f.terms()[0].coeff == SymExpr(2));
    CHECK((f - f).is_zero());
    ExpPoly g = exp_base(Rat(2)) * exp_base(Rat(3));
    REQUIRE(g.terms().size() == 1);
    CHECK(g.terms()[0].base == SymExpr(6));
    CHECK_THROWS_AS(ExpPoly::term(SymExpr::one(), 0, SymExpr(0)), SymDomainError);
}

TEST_CASE("shift is exact") {
    // f(n) = n^2 2^n; f(n+1) = (n^2 + 2n + 1) 2^(n+1)
    ExpPoly f = ExpPoly::term(SymExpr::one(), 2, SymExpr(2));
    ExpPoly shifted = f.shifted(1);
    std::map<std::string, Rat> env;
    for (unsigned long n = 0; n < 6; ++n) CHECK(shifted.eval(n, env) == f.eval(n + 1, env));
    ExpPoly back = shifted.shifted(-1);
    CHECK(back == f);
}

TEST_CASE("dominates on growth classes") {
    CHECK(dominates(exp_base(Rat(2)), n_pow(5)) == Trilean::True); // 2^n vs n^5
    CHECK(dominates(n_pow(5), exp_base(Rat(2))) == Trilean::False);
    // decaying exponential is dominated by a constant
    ExpPoly g = ExpPoly::term(SymExpr::one(), 2, SymExpr(Rat(1, 2)));
    CHECK(dominates(ExpPoly::constant(SymExpr::one()), g) == Trilean::True);
    // (1/2 + e)^n vs constant: undecidable from positivity alone
    SymExpr base = SymExpr(Rat(1, 2)) + SymExpr::symbol("e");
    CHECK(dominates(ExpPoly::constant(SymExpr::one()), ExpPoly::term(SymExpr::one(), 0, base)) ==
          Trilean::Unknown);
    CHECK(dominates(ExpPoly(), ExpPoly()) == Trilean::True);
    CHECK(dominates(ExpPoly(), n_pow(1)) == Trilean::False);
}

TEST_CASE("eventual_sign needs separation from zero") {
    SymExpr c = SymExpr::symbol("c"), e = SymExpr::symbol("e"), x0 = SymExpr::symbol("x0");
    // c - n is eventually negative regardless of c
    ExpPoly f = ExpPoly::constant(c) - n_pow(1);
    CHECK(eventual_sign(f) == Sign::Negative);
    CHECK(eventual_sign(ExpPoly::constant(SymExpr(2) * e * c)) == Sign::Positive);
    // -x0 (1/2)^n + e (1/2+e)^n: the lead resolves between the two terms but
    // not against the constant level, so no eps separates it from zero
    ExpPoly g = ExpPoly::term(-x0, 0, SymExpr(Rat(1, 2))) +
                ExpPoly::term(e, 0, SymExpr(Rat(1, 2)) + e);
    CHECK(eventual_sign(g) == Sign::Unknown);
    CHECK(eventual_sign(ExpPoly()) == Sign::Zero);
    // a pure decay has clear pointwise sign but no separation
    ExpPoly decay = ExpPoly::term(SymExpr::one(), 2, SymExpr(Rat(1, 2)));
    CHECK(eventual_sign(decay) == Sign::Unknown);
    CHECK(pointwise_eventual_sign(decay) == Sign::Positive);
}

TEST_CASE("eventual order") {
    CHECK(ev_le(n_pow(1), n_pow(2)) == Trilean::True);
    CHECK(ev_le(n_pow(2), n_pow(1)) == Trilean::False);
    CHECK(ev_le(exp_base(Rat(1, 2)), ExpPoly::constant(SymExpr::zero())) == Trilean::False);
    CHECK(ev_ge(ExpPoly::constant(SymExpr::zero()), exp_base(Rat(1, 2))) == Trilean::False);
    SymExpr e = SymExpr::symbol("e");
    CHECK(ev_le(ExpPoly::constant(e), ExpPoly::constant(SymExpr::one())) == Trilean::Unknown);
}

TEST_CASE("constant magnitude bounds") {
    SymExpr c = SymExpr::symbol("c");
    ExpPoly f = ExpPoly::constant(-c) + ExpPoly::term(SymExpr(Rat(1, 3)), 0, SymExpr(Rat(1, 2)));
    auto k = constant_magnitude_bound(f);
    REQUIRE(k.has_value());
    CHECK((*k - (c + SymExpr(Rat(1, 3)))).is_zero());
    CHECK(!constant_magnitude_bound(n_pow(1)).has_value());
    // n^k rho^n with rho < 1: bounded by |c| (k/(1-rho))^k
    ExpPoly g = ExpPoly::term(SymExpr(1), 3, SymExpr(Rat(1, 2)));
    auto kg = constant_magnitude_bound(g);
    REQUIRE(kg.has_value());
    std::map<std::string, Rat> env;
    for (unsigned long n = 0; n < 40; ++n)
        CHECK(g.eval(n, env) <= kg->eval(env));
}

TEST_CASE("property: certificates validated numerically") {
    testing::Rng rng(7151);
    std::vector<std::string> syms = {"a", "b"};
    int checked_neg = 0, checked_dom = 0;
    for (int i = 0; i < 1000; ++i) {
        ExpPoly f = testing::random_exp_poly(rng, syms);
        ExpPoly g = testing::random_exp_poly(rng, syms);
        std::set<std::string> all;
        auto absorb = [&all](const ExpPoly& p) {
            for (const auto& t : p.terms()) {
                for (const auto& s : t.coeff.symbols()) all.insert(s);
                for (const auto& s : t.base.symbols()) all.insert(s);
            }
        };
        absorb(f);
        absorb(g);
        auto bindings = testing::random_positive_bindings(rng, all);

        if (eventual_sign(f) == Sign::Negative) {
            ++checked_neg;
            for (unsigned long n : {1000ul, 10000ul, 100000ul}) CHECK(f.eval(n, bindings) < 0);
        }
        if (!f.is_zero() && !g.is_zero() && dominates(f, g) == Trilean::True) {
            ++checked_dom;
            // |g/f| at n=10^4 is within 10^6 of its value at n=10^2
            Rat f2 = f.eval(100, bindings), f4 = f.eval(10000, bindings);
            Rat g2 = g.eval(100, bindings), g4 = g.eval(10000, bindings);
            if (f2 != 0 && f4 != 0) {
                Rat r2 = boost::multiprecision::abs(g2 / f2);
                Rat r4 = boost::multiprecision::abs(g4 / f4);
                CHECK(r4 <= Rat(1000000) * r2 + Rat(1, 1000000));
            }
        }
    }
    CHECK(checked_neg > 10);
    CHECK(checked_dom > 10);
}
