// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "spvar/bench.hpp"
#include "spvar/embedding.hpp"
#include "spvar/generators.hpp"
#include "spvar/ispvar.hpp"
#include "spvar/json_io.hpp"
#include "test_util.hpp"

using namespace spvar;
using namespace spvar::test;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("criterion %2d: %s — %s\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::vector<std::vector<int>> acceptance_sets() {
    return {{-2, -1, 0, 1, 2},
            {-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5},
            {-10, -8, -6, -4, -2, -1, 1, 2, 4, 6, 8, 10},
            {-28, -19, -13, -8, 8, 13, 19, 28}};
}

// 1. Optimum preservation: exact sampler + fixing_threshold 1.0 never loses
//    the optimum, 400/400.
void criterion_1() {
    std::size_t ok = 0, total = 0;
    auto sets = acceptance_sets();
    for (std::size_t set = 0; set < 4; ++set) {
        const auto& values = sets[set];
        for (std::uint64_t i = 0; i < 100; ++i) {
            IsingProblem p = random_instance(16, values, values, 11000 + set * 100 + i, 0.3);
            SamplerConfig sampler;
            sampler.kind = SamplerKind::Exact;
            SpvarParams params;   // fixing_threshold 1.0 default
            params.num_gauges = 1;
            SpvarOutcome out = spvar::spvar(p, sampler, params);
            ++total;
            if (fixing_success(p, out.assignment, {})) ++ok;
        }
    }
    report(1, ok == 400 && total == 400,
           "optimum preservation with exact sampler: " + std::to_string(ok) + "/400");
}

// 2. Roof-duality soundness on 500 random instances, sizes 8-20.
void criterion_2() {
    std::size_t violations = 0, fixes = 0;
    auto sets = acceptance_sets();
    for (std::uint64_t i = 0; i < 500; ++i) {
        int n = 8 + static_cast<int>(i % 13);
        const auto& values = sets[i % sets.size()];
        IsingProblem p = random_instance(n, values, values, 12000 + i, 0.35);
        PersistencyResult r = roof_duality_fix(p);
        fixes += r.fixed.size();
        if (r.fixed.empty()) continue;
        bool extendable = false;
        for (const SpinConfiguration& opt : brute_force_argmin(p)) {
            bool agrees = true;
            for (const auto& [v, s] : r.fixed) agrees = agrees && opt.at(v) == s;
            if (agrees) {
                extendable = true;
                break;
            }
        }
        if (!extendable) ++violations;
    }
    report(2, violations == 0 && fixes > 0,
           "roof-duality fixes extend to optima: " + std::to_string(violations) +
               " violations over 500 instances (" + std::to_string(fixes) + " fixes)");
}

// 3. Energy-fold identity over all completions, 1000 pairs.
void criterion_3() {
    bool ok = true;
    for (std::uint64_t i = 0; i < 1000 && ok; ++i) {
        int n = 6 + static_cast<int>(i % 9);   // 6..14 variables
        IsingProblem p = random_instance(n, {-5, -2, 2, 5}, {-5, 0, 5}, 13000 + i, 0.4);
        Rng rng(i);
        FixAssignment a;
        int to_fix = 1 + static_cast<int>(rng.below(n - 1));
        while (static_cast<int>(a.size()) < to_fix) {
            Var v = static_cast<Var>(rng.below(n));
            if (!a.contains(v)) a.set(v, rng.pm1(), FixSource::Persistence);
        }
        IsingProblem reduced = fix_variables(p, a);
        const auto& free = reduced.variables();
        for (std::uint64_t mask = 0; mask < (1ULL << free.size()) && ok; ++mask) {
            SpinConfiguration completion;
            for (std::size_t k = 0; k < free.size(); ++k)
                completion[free[k]] = (mask >> k) & 1 ? 1 : -1;
            SpinConfiguration full = completion;
            for (const auto& [v, s] : a.spins()) full[v] = s;
            ok = energy(reduced, completion) == energy(p, full);   // exact, integer inputs
        }
    }
    report(3, ok, "fix_variables energy identity exact over all completions, 1000 pairs");
}

// 4. Gauge invariance of the full spectrum, 200 instances.
void criterion_4() {
    bool ok = true;
    for (std::uint64_t i = 0; i < 200 && ok; ++i) {
        IsingProblem p = random_instance(12, {-5, -3, -1, 1, 3, 5}, {-5, 0, 5}, 14000 + i, 0.4);
        Rng rng(i);
        std::map<Var, int> gauge;
        for (Var v : p.variables()) gauge[v] = rng.pm1();
        std::vector<double> a = brute_force_spectrum(p);
        std::vector<double> b = brute_force_spectrum(apply_gauge(p, gauge));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        ok = a == b;
    }
    report(4, ok, "energy spectrum multiset invariant under random gauges, 200 instances");
}

// 5. Embedding identity and unembedder agreement on unbroken configurations.
void criterion_5() {
    HardwareGraph g = chimera_graph(2, 2, 4);
    Embedding e = clique_embedding(6, g);
    EmbeddedParams params;
    double constant = -params.chain_strength * intra_chain_edge_count(e, g);
    bool ok = true;
    for (std::uint64_t i = 0; i < 100 && ok; ++i) {
        IsingProblem raw = random_instance(6, {-5, -3, -1, 1, 3, 5}, {-5, 0, 5}, 15000 + i, 1.0);
        auto [logical, factor] = scale_to_range(raw, 0.5);
        IsingProblem physical = embed_problem(logical, e, g, params);
        Rng rng(i);
        SpinConfiguration config;
        SpinConfiguration phys;
        for (Var v : logical.variables()) config[v] = rng.pm1();
        for (const auto& [v, chain] : e.chains)
            for (int q : chain) phys[q] = config.at(v);
        ok = std::abs(energy(physical, phys) - (energy(logical, config) + constant)) < 1e-12 &&
             unembed_majority(phys, e) == config &&
             unembed_energy_min(phys, e, logical) == config;
    }
    report(5, ok, "unbroken physical energy = logical energy + intra-chain constant; "
                  "unembedders agree");
}

// 6. End-to-end benchmark direction on C(4,4,4) U_10 at matched budgets.
void criterion_6() {
    HardwareGraph g = chimera_graph(4, 4, 4);
    ProblemSetSpec spec;
    spec.graph = g;
    spec.couplers = named_set("U_10");
    spec.biases = named_set("U_10");
    spec.count = 50;
    spec.base_seed = 16000;
    std::vector<IsingProblem> problems;
    for (int i = 0; i < spec.count; ++i) problems.push_back(instance(spec, i));

    BenchConfig config;
    config.sampler.sweeps = 100;
    config.baseline_reads = 3200;
    config.baseline_gauges = 5;
    config.ispvar.sample_size = 160;
    config.final_reads = 640;
    config.oracle.tabu_restarts = 400;
    config.threads = static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
    config.seed = 16;
    BenchReport r = run_benchmark(problems, config);
    bool budget = config.method_total_reads() < config.baseline_reads;
    bool better = r.method.better_rate >= 80.0;
    bool freq = r.method.mean_freq_on_success > r.baseline.mean_freq_on_success;
    std::ostringstream what;
    what << "50-instance benchmark: method reads " << config.method_total_reads() << " < baseline "
         << config.baseline_reads << "; better-or-equal " << r.method.better_rate
         << "%; mean freq " << r.baseline.mean_freq_on_success << " -> "
         << r.method.mean_freq_on_success;
    report(6, budget && better && freq, what.str());
}

// 7. Fixed-count vs. bias-range trend.
void criterion_7() {
    HardwareGraph g = chimera_graph(4, 4, 4);
    auto series = biasrange_series(g, 10, 5, 17000);
    SamplerConfig sampler;
    sampler.sweeps = 100;
    sampler.seed = 17;
    SpvarParams params;
    params.sample_size = 100;
    auto rows = fixedcount_vs_biasrange(series, sampler, params);
    std::vector<double> ns, fixed;
    for (const BiasRangeRow& row : rows) {
        ns.push_back(row.n);
        fixed.push_back(row.mean_fixed);
    }
    double rho = spearman_rho(ns, fixed);
    std::ostringstream what;
    what << "fixed count rises with bias range: Spearman rho = " << rho;
    report(7, rho > 0.8, what.str());
}

// 8. Correlation-vs-distance profile on h=0 instances.
void criterion_8() {
    HardwareGraph g = chimera_graph(4, 4, 4);
    std::map<int, double> sums;
    std::map<int, std::size_t> counts;
    bool zero_ok = true;
    for (std::uint64_t i = 0; i < 3; ++i) {
        IsingProblem p = random_ising(g, named_set("U_5"), named_set("{0}"), 18000 + i);
        SamplerConfig c;
        c.reads = 100;
        c.sweeps = 300;
        c.seed = 18 + i;
        SampleSet s = sample_sa(p, c);
        for (const DistanceRow& row : correlation_vs_distance(p, s)) {
            if (row.distance == 0) zero_ok = zero_ok && row.mean_correlation == 1.0;
            sums[row.distance] += row.mean_correlation * static_cast<double>(row.pair_count);
            counts[row.distance] += row.pair_count;
        }
    }
    bool monotone = true;
    double previous = 2.0;
    for (const auto& [d, sum] : sums) {
        double mean = sum / static_cast<double>(counts[d]);
        monotone = monotone && mean <= previous + 0.05;
        previous = mean;
    }
    report(8, zero_ok && monotone,
           "h=0 correlation profile: exactly 1 at distance 0, non-increasing within 0.05");
}

// 9. Sweep-grid monotonicity along the fixing-threshold axis.
void criterion_9() {
    std::vector<IsingProblem> problems;
    for (std::uint64_t i = 0; i < 20; ++i)
        problems.push_back(
            random_instance(16, {-5, -3, -1, 1, 3, 5}, {-5, -2, 0, 2, 5}, 19000 + i, 0.35));
    SamplerConfig sampler;
    sampler.sweeps = 60;
    sampler.seed = 19;
    SpvarParams params;
    params.sample_size = 80;
    std::vector<double> fixing = {0.80, 0.85, 0.90, 0.95, 1.0};
    std::vector<double> elite = {0.10, 0.20, 0.30, 0.50};
    SweepGrid grid = sweep_thresholds(problems, sampler, params, fixing, elite);
    bool monotone = true;
    for (std::size_t e = 0; e < elite.size(); ++e)
        for (std::size_t f = 1; f < fixing.size(); ++f)
            monotone = monotone && grid.mean_fixed[e][f] <= grid.mean_fixed[e][f - 1];
    report(9, monotone, "mean fixed count non-increasing in fixing_threshold for every elite row");
}

// 10. Zero-bias pipeline: canonicalization exactness and optimum preservation.
void criterion_10() {
    bool ok = true;
    for (std::uint64_t i = 0; i < 50 && ok; ++i) {
        IsingProblem p = random_instance(16, {-5, -3, -1, 1, 3, 5}, {0}, 20000 + i, 0.3);
        SamplerConfig c;
        c.reads = 40;
        c.sweeps = 60;
        c.seed = 20 + i;
        SampleSet s = sample_sa(p, c);
        Var ref = z2_reference(p);
        SampleSet once = canonicalize_z2(p, s, ref);
        SampleSet twice = canonicalize_z2(p, once, ref);
        for (std::size_t k = 0; k < s.size() && ok; ++k)
            ok = once.solutions[k].energy == s.solutions[k].energy &&
                 once.solutions[k].spins == twice.solutions[k].spins &&
                 once.solutions[k].energy == energy(p, once.solutions[k].spins);
        if (!ok) break;

        SamplerConfig exact;
        exact.kind = SamplerKind::Exact;
        IspvarParams params;   // fixing_threshold 1.0; zero-bias auto engages
        params.num_gauges = 1;
        IspvarOutcome out = ispvar(p, exact, params);
        ok = std::abs(brute_force_min(out.reduced) - brute_force_min(p)) < 1e-12;
    }
    report(10, ok, "canonicalize_z2 idempotent and exact; zero-bias pipeline preserves optima");
}

// 11. CLI determinism: identical config + seed gives byte-identical reports.
void criterion_11(const std::string& cli) {
    if (cli.empty()) {
        report(11, false, "CLI path not supplied");
        return;
    }
    namespace fs = std::filesystem;
    fs::path work = fs::temp_directory_path() / "spvar_acceptance_cli";
    fs::remove_all(work);
    fs::create_directories(work);
    auto run = [&](const std::string& args) {
        std::string command = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
        return std::system(command.c_str()) == 0;
    };
    auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    };
    std::string dir = work.string();
    bool ok = run("gen --chimera 2,2,4 --couplers U_10 --biases U_10 --count 3 --seed 9 --out " +
                  dir + "/problems");
    ok = ok && run("bench --problems " + dir + "/problems --baseline-reads 200 --step-reads 20 "
                   "--final-reads 40 --sweeps 50 --seed 4 --out-json " + dir + "/a.json");
    ok = ok && run("bench --problems " + dir + "/problems --baseline-reads 200 --step-reads 20 "
                   "--final-reads 40 --sweeps 50 --seed 4 --out-json " + dir + "/b.json");
    ok = ok && run("ispvar --problem " + dir + "/problems/problem_0000.json --reads 50 --seed 3 "
                   "--report " + dir + "/ra.json");
    ok = ok && run("ispvar --problem " + dir + "/problems/problem_0000.json --reads 50 --seed 3 "
                   "--report " + dir + "/rb.json");
    std::string a = slurp(work / "a.json"), b = slurp(work / "b.json");
    std::string ra = slurp(work / "ra.json"), rb = slurp(work / "rb.json");
    ok = ok && !a.empty() && a == b && !ra.empty() && ra == rb;
    fs::remove_all(work);
    report(11, ok, "repeated CLI runs with identical seeds emit byte-identical reports");
}

}  // namespace

int main(int argc, char** argv) {
    using clock = std::chrono::steady_clock;
    auto go = [](int n, auto&& fn) {
        auto start = clock::now();
        fn();
        std::fprintf(stderr, "  [criterion %d took %.1fs]\n", n,
                     std::chrono::duration<double>(clock::now() - start).count());
    };
    go(1, criterion_1);
    go(2, criterion_2);
    go(3, criterion_3);
    go(4, criterion_4);
    go(5, criterion_5);
    go(6, criterion_6);
    go(7, criterion_7);
    go(8, criterion_8);
    go(9, criterion_9);
    go(10, criterion_10);
    go(11, [&] { criterion_11(argc > 1 ? argv[1] : ""); });
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 11 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
