#include "probterm/intervals.hpp"

#include "support/generators.hpp"

#include <catch_amalgamated.hpp>

using namespace probterm;

namespace {

ExpPoly lin(const Rat& a, const Rat& b) { // a*n + b
    ExpPoly f = ExpPoly::term(SymExpr(a), 1, SymExpr::one());
    return f + ExpPoly::constant(SymExpr(b));
}

} // namespace

TEST_CASE("identity monomial passes the envelope through") {
    SymExpr x0 = SymExpr::symbol("x0"), c = SymExpr::symbol("c");
    ExpPoly lo = ExpPoly::constant(x0) - ExpPoly::term(c, 1, SymExpr::one());
    ExpPoly hi = ExpPoly::constant(x0) + ExpPoly::term(c, 1, SymExpr::one());
    std::map<std::string, FnInterval> env{
        {"x", FnInterval::of(FnBound::finite(lo), FnBound::finite(hi))}};
    FnInterval out = poly_eval_bounds(Polynomial::variable("x"), env);
    REQUIRE(out.lo.is_finite());
    REQUIRE(out.hi.is_finite());
    CHECK(out.lo.value == lo);
    CHECK(out.hi.value == hi);
}

TEST_CASE("negated square over [n, 2n]") {
    std::map<std::string, FnInterval> env{
        {"x", FnInterval::of(FnBound::finite(lin(1, 0)), FnBound::finite(lin(2, 0)))}};
    Polynomial p = -(Polynomial::variable("x") * Polynomial::variable("x"));
    FnInterval out = poly_eval_bounds(p, env);
    REQUIRE(out.lo.is_finite());
    REQUIRE(out.hi.is_finite());
    // (-4n^2, -n^2)
    CHECK(out.lo.value == ExpPoly::term(SymExpr(-4), 2, SymExpr::one()));
    CHECK(out.hi.value == ExpPoly::term(SymExpr(-1), 2, SymExpr::one()));
}

TEST_CASE("sign propagation with infinities") {
    std::map<std::string, FnInterval> env{
        {"x", FnInterval::of(FnBound::neg_inf(), FnBound::finite(ExpPoly()))},
        {"y", FnInterval::of(FnBound::finite(ExpPoly::constant(SymExpr(1))),
                             FnBound::finite(ExpPoly::constant(SymExpr(2))))}};
    Polynomial p = Polynomial::variable("x") * Polynomial::variable("y");
    FnInterval out = poly_eval_bounds(p, env);
    CHECK(out.lo.is_neg_inf());
    REQUIRE(out.hi.is_finite());
    CHECK(out.hi.value.is_zero());
}

TEST_CASE("unknown coefficient sign widens the affected side") {
    SymExpr u = SymExpr(Rat(1, 2)) - SymExpr::symbol("e"); // sign unknown
    std::map<std::string, FnInterval> env{
        {"x", FnInterval::of(FnBound::finite(ExpPoly()), FnBound::finite(lin(1, 0)))}};
    FnInterval out = poly_eval_bounds(Polynomial::variable("x").scaled(u), env);
    CHECK(out.lo.is_neg_inf());
    CHECK(out.hi.is_pos_inf());
    // but a point interval stays exact under an unknown-sign scale
    std::map<std::string, FnInterval> point{{"x", FnInterval::exact(lin(1, 0))}};
    FnInterval pout = poly_eval_bounds(Polynomial::variable("x").scaled(u), point);
    REQUIRE(pout.is_point());
    CHECK(pout.lo.value == ExpPoly::term(u, 1, SymExpr::one()));
}

TEST_CASE("bound selection degrades to infinity when unresolved") {
    SymExpr e = SymExpr::symbol("e");
    std::vector<FnBound> cands = {FnBound::finite(ExpPoly::constant(e)),
                                  FnBound::finite(ExpPoly::constant(SymExpr::one()))};
    CHECK(bound_max(cands).is_pos_inf());
    CHECK(bound_min(cands).is_neg_inf());
    cands.push_back(FnBound::pos_inf());
    CHECK(bound_max(cands).is_pos_inf());
}

TEST_CASE("property: interval extension is sound pointwise once orders settle") {
    testing::Rng rng(4242);
    std::uniform_int_distribution<int> degree(0, 2), coeff(-3, 3);
    // endpoint selection is by eventual order; n = 10^6 is past every
    // crossing the small generated coefficients can produce
    const unsigned long n = 1000000;
    std::map<std::string, Rat> none;
    for (int iter = 0; iter < 300; ++iter) {
        std::map<std::string, FnInterval> env;
        std::map<std::string, std::pair<ExpPoly, ExpPoly>> raw;
        for (const char* v : {"x", "y"}) {
            ExpPoly a = lin(coeff(rng), coeff(rng));
            ExpPoly b = a + ExpPoly::term(SymExpr(Rat(std::abs(coeff(rng)) + 1, 2)),
                                          degree(rng), SymExpr::one());
            raw.emplace(v, std::make_pair(a, b)); // a <= b for n >= 0 by construction
            env.emplace(v, FnInterval::of(FnBound::finite(a), FnBound::finite(b)));
        }
        // random polynomial of total degree <= 3
        Polynomial p;
        for (int t = 0; t < 3; ++t) {
            VarMonomial m;
            if (int dx = degree(rng)) m["x"] = dx;
            if (int dy = degree(rng) / 2) m["y"] = dy;
            p.add_term(m, SymExpr(Rat(coeff(rng), 1)));
        }
        FnInterval out = poly_eval_bounds(p, env);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int s = 0; s < 20; ++s) {
            std::map<std::string, Rat> point;
            for (const auto& [v, ab] : raw) {
                Rat lo = ab.first.eval(n, none), hi = ab.second.eval(n, none);
                Rat t(Int(std::lround(unit(rng) * 1000)), Int(1000));
                point[v] = lo + t * (hi - lo);
            }
            Rat value = p.eval(point, none);
            if (out.lo.is_finite()) CHECK(value >= out.lo.value.eval(n, none));
            if (out.hi.is_finite()) CHECK(value <= out.hi.value.eval(n, none));
        }
    }
}
