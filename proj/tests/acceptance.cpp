// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sqw/experiments.hpp"

using namespace sqw;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int k, bool ok, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", k, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

HypercubeSpec make_spec(std::size_t n, const std::vector<std::string>& sinks,
                        EquidistantRule rule = EquidistantRule::strict) {
    HypercubeSpec spec;
    spec.n = n;
    for (const auto& s : sinks) spec.sinks.push_back(Pattern::parse(s));
    spec.equidistant = rule;
    return spec;
}

WalkParams params(double kappa, double gamma, double t_max) {
    WalkParams p;
    p.kappa = kappa;
    p.gamma = gamma;
    p.t_max = t_max;
    return p;
}

std::size_t at(double t) { return static_cast<std::size_t>(std::llround(t / 0.05)); }

struct InvariantTally {
    double trace = 0.0;
    double herm = 0.0;
    double eig = 0.0;
    double mono = 0.0; // largest drop of the sink population
    std::size_t runs = 0;

    void add(const Trajectory& traj) {
        ++runs;
        for (std::size_t s = 0; s < traj.size(); ++s) {
            trace = std::max(trace, traj.trace_drift[s]);
            herm = std::max(herm, traj.anti_hermitian[s]);
            eig = std::min(eig, traj.min_eigenvalue[s]);
            if (s) mono = std::max(mono, traj.sink_population(s - 1) - traj.sink_population(s));
        }
    }
};

std::vector<std::string> random_sinks(std::size_t n, std::size_t max_count, std::mt19937_64& rng) {
    const unsigned dim = 1u << n;
    const std::size_t count = 1 + rng() % std::min<std::size_t>(max_count, dim - 1);
    std::vector<unsigned> all(dim);
    for (unsigned v = 0; v < dim; ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::string> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(oracle::bits_of(all[k], n));
    return out;
}

} // namespace

int main() {
    InvariantTally tally;

    {
        const auto t0 = Clock::now();
        const auto traj = evolve(DensityMatrix::basis_state(8, 0), make_spec(3, {"101", "111"}), params(1, 1, 10));
        tally.add(traj);
        const double near2 = traj.populations[at(2)][5], near10 = traj.populations[at(10)][5];
        const double far10 = traj.populations[at(10)][7];
        const double secs = since(t0);
        const bool ok = near2 > 0.5 && near10 > 0.9 && far10 < 0.1 && secs < 5.0;
        report(1, ok,
               "two sinks: P_101(2) = " + fmt("%.6f", near2) + " (> 0.5), P_101(10) = " + fmt("%.6f", near10) +
                   " (> 0.9), P_111(10) = " + fmt("%.6f", far10) + " (< 0.1)",
               secs);
    }

    {
        const auto t0 = Clock::now();
        const auto traj = evolve(DensityMatrix::basis_state(8, 0), make_spec(3, {"011", "101"}), params(1, 1, 10));
        tally.add(traj);
        double gap = 0.0;
        for (std::size_t s = 0; s < traj.size(); ++s) gap = std::max(gap, std::abs(traj.populations[s][3] - traj.populations[s][5]));
        const double p10 = traj.populations[at(10)][3], q10 = traj.populations[at(10)][5];
        const bool ok = gap < 1e-8 && std::abs(p10 - 0.5) < 0.05 && std::abs(q10 - 0.5) < 0.05;
        report(2, ok,
               "symmetric sinks: max |P_011 - P_101| = " + fmt("%.3g", gap) + " (< 1e-8), P(10) = " + fmt("%.6f", p10) +
                   " / " + fmt("%.6f", q10) + " (within 0.05 of 0.5)",
               since(t0));
    }

    {
        const auto t0 = Clock::now();
        ScenarioConfig cfg;
        cfg.n = 4;
        cfg.sinks = {Pattern::parse("1011"), Pattern::parse("1111")};
        cfg.initial = Pattern::parse("0000");
        const auto sweep = run_sweep(cfg);
        const double secs = since(t0);

        const auto& g = cfg.gamma_values;
        const auto& k = cfg.kappa_values;
        auto tm = [&](std::size_t gi, std::size_t ki) { return sweep.points[gi * k.size() + ki].mixing_time; };
        bool all_ok = true;
        for (const auto& p : sweep.points) all_ok = all_ok && p.status == "ok";
        double lo = 1e300, hi = 0.0;
        for (std::size_t ki = 0; ki < k.size(); ++ki) {
            lo = std::min(lo, tm(g.size() - 1, ki));
            hi = std::max(hi, tm(g.size() - 1, ki));
        }
        const bool part_a = lo > 0.0 && hi / lo < 1.5;
        const double base = tm(0, 0);
        double best = base;
        for (std::size_t ki = 1; ki < k.size(); ++ki) best = std::min(best, tm(0, ki));
        const bool part_b = best <= base - 0.5;
        std::string row_low, row_high;
        for (std::size_t ki = 0; ki < k.size(); ++ki) {
            row_low += (ki ? " " : "") + fmt("%.2f", tm(0, ki));
            row_high += (ki ? " " : "") + fmt("%.2f", tm(g.size() - 1, ki));
        }
        report(3, all_ok && part_a && part_b && secs < 300.0,
               std::string("mixing-time grid: (a) gamma=2.0 row [") + row_high + "] ratio " + fmt("%.3f", hi / lo) +
                   (part_a ? " < 1.5 ok" : " >= 1.5") + "; (b) gamma=0.2 row [" + row_low + "] best kappa>0.2 gains " +
                   fmt("%.2f", base - best) + (part_b ? " >= 0.5 ok" : " < 0.5"),
               secs);

        // re-run the grid for the invariant tally
        std::vector<Trajectory> trajs(sweep.points.size());
        std::atomic<std::size_t> next{0};
        const HypercubeSpec spec = cfg.hypercube();
        auto worker = [&] {
            for (std::size_t idx = next++; idx < trajs.size(); idx = next++) {
                trajs[idx] = evolve(DensityMatrix::basis_state(16, 0), spec,
                                    params(sweep.points[idx].kappa, sweep.points[idx].gamma, 50));
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::max(1u, std::thread::hardware_concurrency()); ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (const auto& t : trajs) tally.add(t);
    }

    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string bad;
        for (const auto& row : coin_check(default_coin_grid())) {
            const bool half = std::abs(row.p - 0.5) < 1e-12;
            const bool want = row.kind == "biased" || half;
            const bool got = row.kind == "biased" ? row.deviation < 1e-12 : row.deviation < 1e-10;
            if (got != want) {
                ok = false;
                bad += " " + row.kind + "@" + fmt("%g", row.p);
            }
        }
        report(4, ok, ok ? "neuron coin unitary only at p = 0.5, biased coin unitary on all 21 points" : "mismatch at" + bad,
               since(t0));
    }

    {
        const bool ok = tally.trace < 1e-9 && tally.herm < 1e-9 && tally.eig >= -1e-8 && tally.mono <= 1e-9;
        report(5, ok,
               std::to_string(tally.runs) + " runs: max trace drift " + fmt("%.3g", tally.trace) + ", max anti-Hermitian " +
                   fmt("%.3g", tally.herm) + ", min eigenvalue " + fmt("%.3g", tally.eig) + ", max sink drop " +
                   fmt("%.3g", tally.mono),
               0.0);
    }

    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        struct Case {
            std::size_t n;
            std::vector<std::string> sinks;
            std::vector<double> p0;
            double gamma;
        };
        std::vector<Case> cases;
        std::vector<double> delta0(8, 0.0);
        delta0[0] = 1.0;
        cases.push_back({3, {"101", "111"}, delta0, 1.0});
        cases.push_back({3, {"011", "101"}, delta0, 1.0});
        for (int r = 0; r < 10; ++r) {
            const std::size_t n = 1 + rng() % 4;
            std::vector<double> p0(std::size_t{1} << n);
            double s = 0.0;
            for (auto& x : p0) s += (x = u(rng));
            for (auto& x : p0) x /= s;
            cases.push_back({n, random_sinks(n, 3, rng), p0, 0.2 + 1.8 * u(rng)});
        }
        double worst = 0.0;
        for (const auto& c : cases) {
            const auto spec = make_spec(c.n, c.sinks);
            const auto traj = evolve(DensityMatrix::diagonal(c.p0), spec, params(0.0, c.gamma, 10));
            const auto jumps = oracle::brute_force_jumps(c.n, c.sinks);
            for (std::size_t s = 0; s < traj.size(); ++s) {
                const auto want = oracle::ctmc_populations(c.p0.size(), jumps, c.p0, traj.times[s]);
                for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(traj.populations[s][i] - want[i]));
            }
        }
        report(6, worst < 1e-6,
               std::to_string(cases.size()) + " specs with kappa = 0: max deviation from the rate-matrix exponential " +
                   fmt("%.3g", worst) + " (< 1e-6)",
               since(t0));
    }

    {
        const auto t0 = Clock::now();
        std::size_t runs = 0, misses = 0;
        bool monotone = true;
        std::string first_miss;
        for (std::size_t n = 1; n <= 5; ++n)
            for (unsigned v = 0; v < (1u << n); ++v) {
                const auto stored = Pattern::parse(oracle::bits_of(v, n));
                const auto w = hebbian_store({stored});
                for (std::size_t i = 0; i < n; ++i) {
                    const auto input = stored.flipped(i);
                    const auto run = run_async(input, w, Thresholds::zeros(n));
                    ++runs;
                    for (std::size_t e = 1; e < run.energies.size(); ++e) monotone = monotone && run.energies[e] <= run.energies[e - 1] + 1e-12;
                    if (!(run.final_state() == stored)) {
                        if (!misses) first_miss = "stored " + stored.str() + ", input " + input.str() + " -> " + run.final_state().str();
                        ++misses;
                    }
                }
            }
        report(7, misses == 0 && monotone,
               std::to_string(runs - misses) + "/" + std::to_string(runs) + " single-flip inputs retrieved, energy " +
                   (monotone ? "non-increasing on every run" : "INCREASED on some run") +
                   (misses ? "; first miss: " + first_miss : std::string{}),
               since(t0));
    }

    {
        const auto t0 = Clock::now();
        std::size_t specs = 0, mismatches = 0;
        auto check = [&](std::size_t n, const std::vector<std::string>& sinks) {
            for (bool lte : {false, true}) {
                const auto ops = build_jump_operators(make_spec(n, sinks, lte ? EquidistantRule::lte : EquidistantRule::strict));
                std::vector<std::pair<unsigned, unsigned>> got;
                for (const auto& op : ops) got.emplace_back(op.from, op.to);
                std::sort(got.begin(), got.end());
                ++specs;
                if (got != oracle::brute_force_jumps(n, sinks, lte)) ++mismatches;
            }
        };
        for (std::size_t n = 1; n <= 3; ++n) {
            const unsigned dim = 1u << n;
            for (unsigned mask = 1; mask < (1u << dim); ++mask) {
                const auto count = static_cast<std::size_t>(std::popcount(mask));
                if (count > 3 || count >= dim) continue;
                std::vector<std::string> sinks;
                for (unsigned v = 0; v < dim; ++v)
                    if (mask >> v & 1u) sinks.push_back(oracle::bits_of(v, n));
                check(n, sinks);
            }
        }
        std::mt19937_64 rng(8);
        for (int r = 0; r < 200; ++r) check(4, random_sinks(4, 3, rng));
        report(8, mismatches == 0,
               std::to_string(specs - mismatches) + "/" + std::to_string(specs) +
                   " specs (both equidistant rules) match the edge-by-edge brute force",
               since(t0));
    }

    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
