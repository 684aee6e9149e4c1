#include "probterm/bounds.hpp"
#include "probterm/simulator.hpp"

#include "support/generators.hpp"

#include <catch_amalgamated.hpp>

using namespace probterm;

namespace {

ExpPoly lin(const SymExpr& slope, const SymExpr& icept) {
    return ExpPoly::term(slope, 1, SymExpr::one()) + ExpPoly::constant(icept);
}

} // namespace

TEST_CASE("symmetric walk: linear cone, refined at the guard") {
    ProgramSpec prog = load_program("x = x0\nwhile x > 0:\n    x = x+c @1/2; x-c\n");
    BoundStore store(prog);
    SymExpr x0 = SymExpr::symbol("x0"), c = SymExpr::symbol("c");
    const BoundPair& raw = store.var_bounds("x");
    REQUIRE(raw.lo.is_finite());
    REQUIRE(raw.hi.is_finite());
    CHECK(raw.lo.value == lin(-c, x0));
    CHECK(raw.hi.value == lin(c, x0));
    auto refined = store.guard_refined_bounds();
    CHECK(refined.at("x").lo.value.is_zero()); // iterating states satisfy x > 0
    CHECK(refined.at("x").hi.value == lin(c, x0));
}

TEST_CASE("upper refinement for a decreasing guard") {
    ProgramSpec prog = load_program("x = 1\nwhile 5 - x > 0:\n    x = x + 1 @1/2; x\n");
    BoundStore store(prog);
    auto refined = store.guard_refined_bounds();
    REQUIRE(refined.at("x").hi.is_finite());
    CHECK(refined.at("x").hi.value == ExpPoly::constant(SymExpr(5)));
    CHECK(refined.at("x").lo.value == ExpPoly::constant(SymExpr(1)));
}

TEST_CASE("multivariate guards refine nothing") {
    ProgramSpec prog = load_program(
        "x = 1\ny = 1\nwhile x + y > 0:\n    x = x - 1 @1/2; x\n    y = y - 1\n");
    BoundStore store(prog);
    auto refined = store.guard_refined_bounds();
    CHECK(refined.at("x").lo.value == store.var_bounds("x").lo.value);
    CHECK(refined.at("y").hi.value == store.var_bounds("y").hi.value);
}

TEST_CASE("exponential growth base enters the bound") {
    // x = 2x + s with s in [1,2]: upper recurrence b(n+1) = 2 b(n) + 2
    // from b(0) = 1 solves to 3 * 2^n - 2
    ProgramSpec prog =
        load_program("x = 1\nwhile x > 0:\n    s = RV(uniform, 1, 2)\n    x = 2*x + s\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("x");
    REQUIRE(bp.hi.is_finite());
    ExpPoly expect = ExpPoly::term(SymExpr(3), 0, SymExpr(2)) + ExpPoly::constant(SymExpr(-2));
    CHECK(bp.hi.value == expect);
    // lower recurrence b(n+1) = 2 b(n) + 1 from 1: 2 * 2^n - 1
    ExpPoly expect_lo = ExpPoly::term(SymExpr(2), 0, SymExpr(2)) + ExpPoly::constant(SymExpr(-1));
    CHECK(bp.lo.value == expect_lo);
}

TEST_CASE("unbounded draws force the whole line") {
    ProgramSpec prog =
        load_program("v = 0\nwhile v > 0:\n    g = RV(gauss, 0, 1)\n    v = v + g\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("v");
    CHECK(bp.lo.is_neg_inf());
    CHECK(bp.hi.is_pos_inf());
}

TEST_CASE("differing self-coefficients use the envelope, not the candidate max") {
    // from 0, the pair {x = 2x, x + 1} can reach 2^(n-1), so any sound upper
    // bound must grow at base 2; the per-branch solutions are 0 and n
    ProgramSpec prog = load_program("x = 0\nwhile x < 100:\n    x = 2*x @1/2; x + 1\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("x");
    REQUIRE(bp.hi.is_finite());
    ExpPoly expect = ExpPoly::term(SymExpr(1), 0, SymExpr(2)) + ExpPoly::constant(SymExpr(-1));
    CHECK(bp.hi.value == expect); // 2^n - 1
    CHECK(dominates(bp.hi.value, ExpPoly::term(SymExpr(1), 0, SymExpr(2))) == Trilean::True);
    // simulate the worst-case policy: alternate +1 then double
    double x = 0;
    for (int n = 0; n < 20; ++n) {
        x = n % 2 ? 2 * x : x + 1;
        CHECK(x <= to_double(bp.hi.value.eval(n + 1, {})));
    }
}

TEST_CASE("absorbing zero branch keeps bounds tight") {
    ProgramSpec prog = load_program("alive = 1\nwhile alive > 0:\n    alive = 0 @1/3; alive\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("alive");
    REQUIRE(bp.lo.is_finite());
    REQUIRE(bp.hi.is_finite());
    CHECK(bp.lo.value.is_zero());
    CHECK(bp.hi.value == ExpPoly::constant(SymExpr::one()));
}

TEST_CASE("negative self-coefficient falls back to the magnitude envelope") {
    ProgramSpec prog = load_program("t = 0\nx = 1\nwhile x > 0:\n    t = 1 - t\n    x = x - 1\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("t");
    REQUIRE(bp.lo.is_finite());
    REQUIRE(bp.hi.is_finite());
    CHECK(bp.hi.value == lin(SymExpr::one(), SymExpr::zero()));
    CHECK(bp.lo.value == lin(-SymExpr::one(), SymExpr::zero()));
}

TEST_CASE("init-only variables are constant envelopes") {
    ProgramSpec prog = load_program("k = RV(uniform, 1, 2)\nx = 5\nwhile x > 0:\n    x = x - k\n");
    BoundStore store(prog);
    const BoundPair& bp = store.var_bounds("k");
    CHECK(bp.lo.value == ExpPoly::constant(SymExpr(1)));
    CHECK(bp.hi.value == ExpPoly::constant(SymExpr(2)));
}

TEST_CASE("monotonicity: adding a branch never shrinks the envelope") {
    testing::Rng rng(2468);
    std::uniform_int_distribution<int> coeff(0, 2), add(-3, 3);
    for (int iter = 0; iter < 60; ++iter) {
        int a1 = coeff(rng), a2 = coeff(rng);
        int b1 = add(rng), b2 = add(rng), b3 = add(rng);
        auto source = [&](bool extra) {
            std::ostringstream os;
            os << "x = 1\nwhile x > 0:\n    x = " << a1 << "*x + " << b1 << " @1/2; " << a2
               << "*x + " << b2;
            if (extra) os << " @1/4; x + " << b3;
            os << "\n";
            return os.str();
        };
        ProgramSpec narrow = load_program(source(false));
        ProgramSpec wide = load_program(source(true));
        BoundStore s1(narrow), s2(wide);
        const BoundPair& n1 = s1.var_bounds("x");
        const BoundPair& n2 = s2.var_bounds("x");
        INFO(source(true));
        CHECK(bound_le(n2.lo, n1.lo) != Trilean::False);
        CHECK(bound_le(n1.hi, n2.hi) != Trilean::False);
    }
}

TEST_CASE("simulation soundness of the envelopes (eventual, per-run slack)") {
    // concrete-constant benchmark-style programs; every pre-termination
    // state at n >= 50 must lie in the K-slackened envelope, K = 10
    const char* sources[] = {
        "x = 10\nwhile x > 0:\n    x = x + 1 @1/2; x - 1\n",
        "c = 0\nwhile c < 10:\n    c = c + 1 @1/2; 0\n",
        "alive = 1\nt = 0\nwhile alive > 0:\n    alive = 0 @1/3; alive\n    t = 1 - t\n",
        "x = 20\nh = 0\nwhile x - h > 0:\n    x = x + 1\n    h = h + 3 @1/2; h\n",
    };
    const double K = 10.0;
    for (const char* src : sources) {
        ProgramSpec prog = load_program(src);
        BoundStore store(prog);
        auto refined = store.guard_refined_bounds();
        detail::CompiledProgram compiled = detail::Compiler(prog, SimConfig{}).run();
        // precompute envelope values on the checked range
        const uint64_t steps = 1000;
        std::map<size_t, std::pair<std::vector<double>, std::vector<double>>> envelopes;
        for (size_t slot = 0; slot < compiled.var_names.size(); ++slot) {
            auto it = refined.find(compiled.var_names[slot]);
            if (it == refined.end()) continue;
            std::vector<double> los(steps + 1, -1e308), his(steps + 1, 1e308);
            for (uint64_t n = 50; n <= steps; ++n) {
                if (it->second.lo.is_finite()) {
                    double l = to_double(it->second.lo.value.eval(n, {}));
                    los[n] = l >= 0 ? l / K - K : K * l - K;
                }
                if (it->second.hi.is_finite()) {
                    double h = to_double(it->second.hi.value.eval(n, {}));
                    his[n] = h >= 0 ? K * h + K : h / K + K;
                }
            }
            envelopes.emplace(slot, std::make_pair(std::move(los), std::move(his)));
        }
        long violations = 0;
        for (uint64_t trial = 0; trial < 1000; ++trial) {
            simulate_trial(compiled, 99, trial, steps,
                           [&](uint64_t n, const std::vector<double>& state) {
                               if (n < 50) return;
                               for (const auto& [slot, env] : envelopes) {
                                   if (state[slot] < env.first[n]) ++violations;
                                   if (state[slot] > env.second[n]) ++violations;
                               }
                           });
        }
        INFO(src);
        CHECK(violations == 0);
    }
}
