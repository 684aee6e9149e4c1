// Concrete-execution Monte Carlo oracle. Every symbolic constant is bound
// to a positive rational, states evolve in doubles, and the generator is
// counter-based: trial t of seed s draws from the splitmix64 stream keyed by
// (s, t), so trials are independent of execution order and a report is
// bit-for-bit reproducible for a fixed SimConfig. All aggregation is
// integer-valued, which keeps the merge associative and exact.
#pragma once

#include "probterm/diagnostics.hpp"
#include "probterm/program.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace probterm {

class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    std::map<std::string, Rat> bindings; // must cover all symbols, all positive
    uint64_t runs = 1000;
    uint64_t max_steps = 10000;
    uint64_t seed = 0;
};

struct SimReport {
    uint64_t runs = 0;
    uint64_t terminated = 0;
    uint64_t censored = 0;          // hit the step cap
    uint64_t censored_overflow = 0; // state left the floating-point range
    uint64_t total_steps_terminated = 0;
    std::array<uint64_t, 64> histogram{}; // bucket b: terminated runs with bit_width(steps) == b

    Rat termination_rate() const { return runs ? Rat(Int(terminated), Int(runs)) : Rat(0); }
    double rate_stderr() const {
        if (runs == 0) return 0.0;
        double r = to_double(termination_rate());
        return std::sqrt(r * (1.0 - r) / static_cast<double>(runs));
    }
    double mean_steps_terminated() const {
        return terminated ? static_cast<double>(total_steps_terminated) /
                                static_cast<double>(terminated)
                          : 0.0;
    }

    friend bool operator==(const SimReport& a, const SimReport& b) {
        return a.runs == b.runs && a.terminated == b.terminated && a.censored == b.censored &&
               a.censored_overflow == b.censored_overflow &&
               a.total_steps_terminated == b.total_steps_terminated && a.histogram == b.histogram;
    }
};

class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t trial) : key_(mix(seed ^ mix(trial + 0x51ED2701))) {}

    uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }
    double next_unit() { // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    static uint64_t mix(uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t key_;
    uint64_t counter_ = 0;
};

namespace detail {

inline double sample_gauss01(CounterRng& rng) {
    double u1 = 1.0 - rng.next_unit(); // (0, 1]
    double u2 = rng.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline double sample_gamma(CounterRng& rng, double shape) {
    if (shape < 1.0) {
        double u = 1.0 - rng.next_unit();
        return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_gauss01(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = 1.0 - rng.next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

struct CompiledDist {
    DistKind kind;
    std::array<double, 3> p{};
    long n = 0; // integral count parameter where applicable

    double sample(CounterRng& rng) const {
        switch (kind) {
            case DistKind::Uniform: return p[0] + rng.next_unit() * (p[1] - p[0]);
            case DistKind::Gauss: return p[0] + std::sqrt(p[1]) * sample_gauss01(rng);
            case DistKind::Laplace: {
                double u = rng.next_unit() - 0.5;
                return p[0] - p[1] * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::fabs(u));
            }
            case DistKind::Bernoulli: return rng.next_unit() < p[0] ? 1.0 : 0.0;
            case DistKind::Binomial: {
                long hits = 0;
                for (long i = 0; i < n; ++i) hits += rng.next_unit() < p[1] ? 1 : 0;
                return static_cast<double>(hits);
            }
            case DistKind::Geometric: {
                if (p[0] >= 1.0) return 0.0;
                double u = 1.0 - rng.next_unit(); // (0, 1]
                return std::floor(std::log(u) / std::log(1.0 - p[0]));
            }
            case DistKind::Hypergeometric: {
                double rem_n = p[0], rem_k = p[1];
                long draws = n, hits = 0;
                for (long i = 0; i < draws; ++i) {
                    if (rng.next_unit() * rem_n < rem_k) {
                        ++hits;
                        rem_k -= 1.0;
                    }
                    rem_n -= 1.0;
                }
                return static_cast<double>(hits);
            }
            case DistKind::Exponential: return -std::log(1.0 - rng.next_unit()) / p[0];
            case DistKind::Beta: {
                double a = sample_gamma(rng, p[0]);
                double b = sample_gamma(rng, p[1]);
                return a / (a + b);
            }
            case DistKind::ChiSquared: return 2.0 * sample_gamma(rng, p[0] / 2.0);
            default: // Rayleigh
                return p[0] * std::sqrt(-2.0 * std::log(1.0 - rng.next_unit()));
        }
    }
};

struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<size_t, unsigned>> powers; // (variable slot, exponent)
    };
    std::vector<Term> terms;

    double eval(const std::vector<double>& state) const {
        double total = 0.0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (const auto& [slot, e] : t.powers) {
                double x = state[slot];
                for (unsigned i = 0; i < e; ++i) v *= x;
            }
            total += v;
        }
        return total;
    }
};

struct CompiledUpdate {
    size_t slot;
    bool is_draw = false;
    CompiledDist draw;
    std::vector<double> cum_prob; // branch selection thresholds
    std::vector<CompiledPoly> branch;
};

struct CompiledProgram {
    std::vector<std::string> var_names;
    std::vector<CompiledUpdate> init_steps;
    CompiledPoly guard;
    std::vector<CompiledUpdate> body_steps;
};

class Compiler {
  public:
    Compiler(const ProgramSpec& prog, const SimConfig& cfg) : prog_(prog), cfg_(cfg) {
        for (const auto& s : prog.symbols)
            if (!cfg.bindings.count(s)) throw UnboundSymbol(s);
        for (const auto& [s, v] : cfg.bindings)
            if (v <= 0)
                throw SimulationError("binding for '" + s + "' must be positive (got " +
                                      v.str() + ")");
    }

    CompiledProgram run() {
        CompiledProgram out;
        for (const auto& v : prog_.state_variables()) slot(out, v);
        for (const auto& [v, d] : prog_.body_rv) slot(out, v);

        for (const auto& [v, iv] : prog_.init) {
            CompiledUpdate u;
            u.slot = slot(out, v);
            if (iv.is_draw) {
                u.is_draw = true;
                u.draw = compile_dist(iv.draw);
            } else {
                CompiledPoly c;
                c.terms.push_back({to_double(eval(iv.constant)), {}});
                u.cum_prob.push_back(1.0);
                u.branch.push_back(std::move(c));
            }
            out.init_steps.push_back(std::move(u));
        }

        out.guard = compile_poly(out, prog_.guard.normalized);

        // hoisted draws happen before the updates that read them
        for (const auto& [v, d] : prog_.body_rv) {
            CompiledUpdate u;
            u.slot = slot(out, v);
            u.is_draw = true;
            u.draw = compile_dist(d);
            out.body_steps.push_back(std::move(u));
        }
        for (const auto& [v, upd] : prog_.body_updates) {
            CompiledUpdate u;
            u.slot = slot(out, v);
            double cum = 0.0;
            for (const auto& [poly, prob] : upd.branches) {
                double p = to_double(eval(prob));
                if (p < -1e-12 || p > 1.0 + 1e-12)
                    throw SimulationError("branch probability " + prob.str() +
                                          " is outside [0,1] under the given bindings");
                cum += p;
                u.cum_prob.push_back(cum);
                u.branch.push_back(compile_poly(out, poly));
            }
            u.cum_prob.back() = 1.0; // guard against rounding
            out.body_steps.push_back(std::move(u));
        }
        return out;
    }

  private:
    Rat eval(const SymExpr& e) const { return e.eval(cfg_.bindings); }

    size_t slot(CompiledProgram& out, const std::string& v) {
        for (size_t i = 0; i < out.var_names.size(); ++i)
            if (out.var_names[i] == v) return i;
        out.var_names.push_back(v);
        return out.var_names.size() - 1;
    }

    CompiledDist compile_dist(const DistSpec& d) const {
        CompiledDist out;
        out.kind = d.kind;
        for (size_t i = 0; i < d.params.size() && i < 3; ++i)
            out.p[i] = to_double(eval(d.params[i]));
        auto integral = [&](size_t i, const char* what) {
            Rat v = eval(d.params[i]);
            if (rat_den(v) != 1 || v < 0)
                throw SimulationError(std::string(what) + " parameter of " + dist_name(d.kind) +
                                      " must be a nonnegative integer under the bindings");
            return rat_num(v).convert_to<long>();
        };
        if (d.kind == DistKind::Binomial) out.n = integral(0, "count");
        if (d.kind == DistKind::Hypergeometric) {
            integral(0, "population");
            integral(1, "success-count");
            out.n = integral(2, "draw-count");
        }
        if (d.kind == DistKind::Uniform && !(out.p[0] < out.p[1]))
            throw SimulationError("uniform endpoints must satisfy a < b under the bindings");
        return out;
    }

    CompiledPoly compile_poly(CompiledProgram& out, const Polynomial& p) {
        CompiledPoly c;
        for (const auto& [m, coeff] : p.terms()) {
            CompiledPoly::Term t;
            t.coeff = to_double(eval(coeff));
            for (const auto& [v, e] : m) t.powers.emplace_back(slot(out, v), e);
            c.terms.push_back(std::move(t));
        }
        return c;
    }

    const ProgramSpec& prog_;
    const SimConfig& cfg_;
};

inline void run_step(const CompiledUpdate& u, std::vector<double>& state, CounterRng& rng) {
    if (u.is_draw) {
        state[u.slot] = u.draw.sample(rng);
        return;
    }
    size_t pick = u.branch.size() - 1;
    if (u.branch.size() > 1) {
        double x = rng.next_unit();
        for (size_t i = 0; i < u.cum_prob.size(); ++i)
            if (x < u.cum_prob[i]) {
                pick = i;
                break;
            }
    }
    state[u.slot] = u.branch[pick].eval(state);
}

} // namespace detail

// Runs one trial; returns (terminated, steps, overflowed). Exposed for the
// test harness, which wants per-step state visibility via the callback.
template <typename StepCallback>
inline std::tuple<bool, uint64_t, bool> simulate_trial(const detail::CompiledProgram& prog,
                                                       uint64_t seed, uint64_t trial,
                                                       uint64_t max_steps, StepCallback&& on_state) {
    CounterRng rng(seed, trial);
    std::vector<double> state(prog.var_names.size(), 0.0);
    for (const auto& u : prog.init_steps) detail::run_step(u, state, rng);
    uint64_t steps = 0;
    for (;;) {
        if (!(prog.guard.eval(state) > 0.0)) return {true, steps, false};
        if (steps >= max_steps) return {false, steps, false};
        on_state(steps, state);
        for (const auto& u : prog.body_steps) detail::run_step(u, state, rng);
        ++steps;
        for (double v : state)
            if (!std::isfinite(v)) return {false, steps, true};
    }
}

inline SimReport simulate(const ProgramSpec& prog, const SimConfig& cfg) {
    if (cfg.runs == 0) throw SimulationError("runs must be positive");
    if (cfg.max_steps == 0) throw SimulationError("max-steps must be positive");
    detail::CompiledProgram compiled = detail::Compiler(prog, cfg).run();

    SimReport total;
    total.runs = cfg.runs;
    auto worker = [&](uint64_t from, uint64_t to, SimReport& part) {
        for (uint64_t t = from; t < to; ++t) {
            auto [terminated, steps, overflow] =
                simulate_trial(compiled, cfg.seed, t, cfg.max_steps, [](uint64_t, const auto&) {});
            if (terminated) {
                part.terminated++;
                part.total_steps_terminated += steps;
                part.histogram[std::bit_width(steps)]++;
            } else if (overflow) {
                part.censored_overflow++;
            } else {
                part.censored++;
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    unsigned n_threads = cfg.runs >= 4096 && hw > 1 ? std::min(hw, 16u) : 1;
    if (n_threads == 1) {
        worker(0, cfg.runs, total);
        return total;
    }
    std::vector<SimReport> parts(n_threads);
    std::vector<std::thread> threads;
    uint64_t chunk = (cfg.runs + n_threads - 1) / n_threads;
    for (unsigned i = 0; i < n_threads; ++i) {
        uint64_t from = i * chunk, to = std::min<uint64_t>(cfg.runs, from + chunk);
        if (from >= to) break;
        threads.emplace_back(worker, from, to, std::ref(parts[i]));
    }
    for (auto& t : threads) t.join();
    // integer merges are exact, so the result is independent of scheduling
    for (const auto& p : parts) {
        total.terminated += p.terminated;
        total.censored += p.censored;
        total.censored_overflow += p.censored_overflow;
        total.total_steps_terminated += p.total_steps_terminated;
        for (size_t i = 0; i < total.histogram.size(); ++i) total.histogram[i] += p.histogram[i];
    }
    return total;
}

} // namespace probterm
