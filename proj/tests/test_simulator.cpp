#include "probterm/simulator.hpp"

#include "probterm/distributions.hpp"

#include <catch_amalgamated.hpp>

using namespace probterm;

TEST_CASE("deterministic countdown terminates in exactly five steps") {
    ProgramSpec prog = load_program("x = 5\nwhile x > 0:\n    x = x - 1\n");
    SimConfig cfg;
    cfg.runs = 100;
    cfg.max_steps = 50;
    cfg.seed = 1;
    SimReport r = simulate(prog, cfg);
    CHECK(r.terminated == 100);
    CHECK(r.termination_rate() == Rat(1));
    CHECK(r.total_steps_terminated == 500);
    CHECK(r.mean_steps_terminated() == 5.0);
    CHECK(r.histogram[std::bit_width(uint64_t(5))] == 100);
}

TEST_CASE("reports are bit-for-bit reproducible for a fixed config") {
    ProgramSpec prog = load_program("x = x0\nwhile x > 0:\n    x = x+c @1/2; x-c\n");
    SimConfig cfg;
    cfg.bindings = {{"x0", Rat(3)}, {"c", Rat(1)}};
    cfg.runs = 20000; // wide enough to exercise the threaded path
    cfg.max_steps = 500;
    cfg.seed = 42;
    SimReport a = simulate(prog, cfg);
    SimReport b = simulate(prog, cfg);
    CHECK(a == b);
    cfg.seed = 43;
    SimReport c = simulate(prog, cfg);
    CHECK(!(a == c));
}

TEST_CASE("unbound or invalid bindings are rejected") {
    ProgramSpec prog = load_program("x = x0\nwhile x > 0:\n    x = x - 1\n");
    SimConfig cfg;
    cfg.runs = 10;
    CHECK_THROWS_AS(simulate(prog, cfg), UnboundSymbol);
    cfg.bindings = {{"x0", Rat(-1)}};
    CHECK_THROWS_AS(simulate(prog, cfg), SimulationError);
    cfg.bindings = {{"x0", Rat(2)}};
    cfg.runs = 0;
    CHECK_THROWS_AS(simulate(prog, cfg), SimulationError);
}

TEST_CASE("gambler's ruin with upward drift terminates at the analytic rate") {
    ProgramSpec prog = load_program("x = x0\nwhile x > 0:\n    x = x+c @1/2+e; x-c\n");
    SimConfig cfg;
    cfg.bindings = {{"x0", Rat(1)}, {"c", Rat(1)}, {"e", Rat(1, 10)}};
    cfg.runs = 20000;
    cfg.max_steps = 2000;
    cfg.seed = 7;
    SimReport r = simulate(prog, cfg);
    // ruin probability from 1 is (q/p) = (2/5)/(3/5) = 2/3
    double rate = to_double(r.termination_rate());
    CHECK(rate > 0.65);
    CHECK(rate < 0.685);
}

TEST_CASE("sampled moments track raw_moment for every grammar distribution") {
    // k <= 2, five standard errors; the moment module is the reference
    struct Case {
        const char* src;
        const char* var;
    };
    const Case cases[] = {
        {"u = RV(uniform, 1, 2)\nwhile u > 0:\n    u = u - 1\n", "u"},
        {"g = RV(gauss, 1, 4)\nwhile g > 0:\n    g = g - 1\n", "g"},
        {"l = RV(laplace, 2, 1/2)\nwhile l > 0:\n    l = l - 1\n", "l"},
        {"b = RV(bernoulli, 1/3)\nwhile b > 0:\n    b = b - 1\n", "b"},
        {"m = RV(binomial, 5, 1/4)\nwhile m > 0:\n    m = m - 1\n", "m"},
        {"q = RV(geometric, 1/3)\nwhile q > 0:\n    q = q - 1\n", "q"},
        {"h = RV(hypergeometric, 10, 4, 3)\nwhile h > 0:\n    h = h - 1\n", "h"},
        {"x = RV(exponential, 2)\nwhile x > 0:\n    x = x - 1\n", "x"},
        {"z = RV(beta, 2, 3)\nwhile z > 0:\n    z = z - 1\n", "z"},
        {"k = RV(chi-squared, 3)\nwhile k > 0:\n    k = k - 1\n", "k"},
        {"r = RV(rayleigh, 2)\nwhile r > 0:\n    r = r - 1\n", "r"},
    };
    const uint64_t N = 100000;
    for (const auto& c : cases) {
        ProgramSpec prog = load_program(c.src);
        const InitValue* iv = prog.init_value(c.var);
        REQUIRE(iv);
        REQUIRE(iv->is_draw);
        detail::CompiledProgram compiled = detail::Compiler(prog, SimConfig{}).run();
        size_t slot = 0;
        for (size_t i = 0; i < compiled.var_names.size(); ++i)
            if (compiled.var_names[i] == c.var) slot = i;
        for (unsigned k = 1; k <= 2; ++k) {
            auto expect = raw_moment(iv->draw, k);
            REQUIRE(expect.has_value());
            double sum = 0, sumsq = 0;
            CounterRng rng(2024, 555 + k);
            std::vector<double> state(compiled.var_names.size(), 0.0);
            for (uint64_t i = 0; i < N; ++i) {
                for (const auto& u : compiled.init_steps) detail::run_step(u, state, rng);
                double xk = std::pow(state[slot], k);
                sum += xk;
                sumsq += xk * xk;
            }
            double mean = sum / N;
            double se = std::sqrt(std::max(sumsq / N - mean * mean, 1e-12) / N);
            INFO(c.src << " k=" << k);
            CHECK(std::fabs(mean - to_double(expect->eval({}))) <= 5 * se + 1e-9);
        }
    }
}

TEST_CASE("histogram counts only terminated runs and matches totals") {
    ProgramSpec prog = load_program("x = 3\nwhile x > 0:\n    x = x - 1 @1/2; x\n");
    SimConfig cfg;
    cfg.runs = 5000;
    cfg.max_steps = 64;
    cfg.seed = 11;
    SimReport r = simulate(prog, cfg);
    uint64_t hist_total = 0;
    for (auto c : r.histogram) hist_total += c;
    CHECK(hist_total == r.terminated);
    CHECK(r.terminated + r.censored + r.censored_overflow == r.runs);
}

TEST_CASE("overflow censoring flags the run") {
    ProgramSpec prog = load_program("x = 2\nwhile x > 0:\n    x = 2*x\n");
    SimConfig cfg;
    cfg.runs = 4;
    cfg.max_steps = 100000;
    cfg.seed = 3;
    SimReport r = simulate(prog, cfg);
    CHECK(r.censored_overflow == 4);
    CHECK(r.terminated == 0);
}
