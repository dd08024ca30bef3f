#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "spvar/bench.hpp"
#include "test_util.hpp"

using namespace spvar;
using namespace spvar::test;

namespace {

std::vector<IsingProblem> small_set(int count, int n, std::uint64_t base, double density = 0.4) {
    std::vector<IsingProblem> out;
    for (int i = 0; i < count; ++i)
        out.push_back(random_instance(n, range_values(5, true), range_values(5), base + i, density));
    return out;
}

}  // namespace

TEST_CASE("best_known: proven optimum under the exact cap") {
    IsingProblem p = random_instance(14, range_values(5, true), range_values(5), 1);
    BestKnown b = best_known(p, {});
    CHECK(b.proven);
    CHECK(b.energy == brute_force_min(p));
    CHECK(energy(p, b.witness) == b.energy);
}

TEST_CASE("best_known: one-variable problem h = -3") {
    IsingProblem p({0}, {{0, -3.0}}, {});
    BestKnown b = best_known(p, {});
    CHECK(b.energy == -3.0);
    CHECK(b.witness.at(0) == 1);
    CHECK(b.proven);
}

TEST_CASE("best_known: tabu matches component-wise exact on 40 variables") {
    // four disjoint 10-variable blocks; force the tabu path with a tiny cap
    std::vector<Var> vars;
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    Rng rng(2);
    for (int block = 0; block < 4; ++block)
        for (int a = 0; a < 10; ++a) {
            Var va = block * 10 + a;
            vars.push_back(va);
            h[va] = static_cast<double>(rng.below(11)) - 5.0;
            for (int b = a + 1; b < 10; ++b) {
                int value = static_cast<int>(rng.below(10)) - 5;
                if (value != 0) j[{va, block * 10 + b}] = value;
            }
        }
    IsingProblem p(vars, h, j);
    OracleConfig tabu_oracle;
    tabu_oracle.exact_cap = 4;   // every block goes through tabu
    tabu_oracle.tabu_restarts = 500;
    OracleConfig exact_oracle;   // every block fits the default cap
    BestKnown heuristic = best_known(p, tabu_oracle);
    BestKnown exact = best_known(p, exact_oracle);
    CHECK(!heuristic.proven);
    CHECK(exact.proven);
    CHECK(heuristic.energy == exact.energy);
}

TEST_CASE("fixing_success: empty assignment always succeeds") {
    IsingProblem p = random_instance(10, range_values(5, true), range_values(5), 3);
    CHECK(fixing_success(p, {}, {}));
}

TEST_CASE("fixing_success: flipping a proven-optimal isolated spin fails") {
    IsingProblem p({0, 1}, {{0, -3.0}, {1, 1.0}}, {});   // optimum s_0 = +1
    FixAssignment bad;
    bad.set(0, -1, FixSource::Persistence);
    CHECK(!fixing_success(p, bad, {}));
}

TEST_CASE("fixing_success: exact-sampler persistence is always safe") {
    for (std::uint64_t i = 0; i < 100; ++i) {
        IsingProblem p = random_instance(16, range_values(5, true), range_values(5), 400 + i, 0.3);
        SamplerConfig sampler;
        sampler.kind = SamplerKind::Exact;
        SpvarParams params;   // fixing_threshold 1.0
        params.num_gauges = 1;
        params.elite_threshold = 1.0;
        SpvarOutcome out = spvar::spvar(p, sampler, params);
        CHECK(fixing_success(p, out.assignment, {}));
    }
}

TEST_CASE("run_benchmark: method disabled leaves only baseline columns") {
    BenchConfig config;
    config.sampler.sweeps = 30;
    config.baseline_reads = 60;
    config.method_enabled = false;
    config.ispvar.sample_size = 20;
    BenchReport report = run_benchmark(small_set(4, 10, 500), config);
    REQUIRE(report.instances.size() == 4);
    CHECK(report.baseline.success_rate > 0.0);
    CHECK(report.method.success_rate == 0.0);
    for (const InstanceResult& row : report.instances) {
        CHECK(row.method_freq == 0);
        CHECK(row.fixed_method == 0);
    }
}

TEST_CASE("run_benchmark: aggregates equal hand recomputation from the rows") {
    BenchConfig config;
    config.sampler.sweeps = 40;
    config.baseline_reads = 80;
    config.ispvar.sample_size = 20;
    config.final_reads = 40;
    config.threads = 2;
    BenchReport report = run_benchmark(small_set(6, 12, 600), config);
    REQUIRE(report.instances.size() == 6);

    std::size_t success = 0, better = 0, fixed_ok = 0;
    double residual = 0.0, freq = 0.0;
    for (const InstanceResult& row : report.instances) {
        REQUIRE(row.error.empty());
        if (row.method_freq > 0) {
            ++success;
            freq += static_cast<double>(row.method_freq);
        }
        residual += row.method_best - row.best_known_energy;
        if (row.better_or_equal) ++better;
        if (row.fixing_ok) ++fixed_ok;
        CHECK(row.baseline_best >= row.best_known_energy - 1e-9);   // proven best known
    }
    CHECK(report.method.success_rate == doctest::Approx(100.0 * success / 6));
    CHECK(report.method.mean_residual == doctest::Approx(residual / 6));
    if (success > 0)
        CHECK(report.method.mean_freq_on_success == doctest::Approx(freq / success));
    CHECK(report.method.better_rate == doctest::Approx(100.0 * better / 6));
    CHECK(report.method.fix_rate == doctest::Approx(100.0 * fixed_ok / 6));
    // cycle accounting mirrors the configured split
    CHECK(config.method_total_reads() ==
          config.ispvar.num_steps * config.ispvar.sample_size + config.final_reads);
    CHECK(config.method_total_reads() < config.baseline_reads * 2);
}

TEST_CASE("run_benchmark: deterministic under a fixed seed") {
    BenchConfig config;
    config.sampler.sweeps = 30;
    config.baseline_reads = 40;
    config.ispvar.sample_size = 16;
    config.final_reads = 20;
    config.seed = 77;
    auto problems = small_set(3, 10, 700);
    BenchReport a = run_benchmark(problems, config);
    config.threads = 3;   // parallelism must not change results
    BenchReport b = run_benchmark(problems, config);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.instances[i].baseline_best == b.instances[i].baseline_best);
        CHECK(a.instances[i].baseline_freq == b.instances[i].baseline_freq);
        CHECK(a.instances[i].method_best == b.instances[i].method_best);
        CHECK(a.instances[i].method_freq == b.instances[i].method_freq);
        CHECK(a.instances[i].fixed_method == b.instances[i].fixed_method);
    }
}

TEST_CASE("sweep: the single cell (1.0, 1.0) equals a direct spvar run") {
    auto problems = small_set(1, 12, 800);
    SamplerConfig sampler;
    sampler.sweeps = 50;
    sampler.seed = 5;
    SpvarParams params;
    params.sample_size = 40;
    SweepGrid grid = sweep_thresholds(problems, sampler, params, {1.0}, {1.0});
    SamplerConfig direct = sampler;
    SpvarParams cell = params;
    cell.fixing_threshold = 1.0;
    cell.elite_threshold = 1.0;
    SpvarOutcome out = spvar::spvar(problems[0], direct, cell);
    CHECK(grid.mean_fixed[0][0] == static_cast<double>(out.assignment.size()));
}

TEST_CASE("sweep: mean fixed count non-increasing along both axes") {
    auto problems = small_set(5, 14, 900);
    SamplerConfig sampler;
    sampler.sweeps = 60;
    sampler.seed = 6;
    SpvarParams params;
    params.sample_size = 50;
    std::vector<double> fixing = {0.7, 0.8, 0.9, 0.95, 1.0};
    std::vector<double> elite = {0.1, 0.2, 0.3, 0.5};
    SweepGrid grid = sweep_thresholds(problems, sampler, params, fixing, elite);
    for (std::size_t e = 0; e < elite.size(); ++e)
        for (std::size_t f = 1; f < fixing.size(); ++f)
            CHECK(grid.mean_fixed[e][f] <= grid.mean_fixed[e][f - 1]);
    for (std::size_t f = 0; f < fixing.size(); ++f)
        for (std::size_t e = 1; e < elite.size(); ++e)
            CHECK(grid.mean_fixed[e][f] <= grid.mean_fixed[e - 1][f]);
}

TEST_CASE("autotune: the whole-band case accepts the first candidate") {
    IsingProblem p = random_instance(12, range_values(5, true), range_values(5), 7);
    SamplerConfig sampler;
    sampler.sweeps = 50;
    sampler.seed = 8;
    SpvarParams params;
    params.sample_size = 50;
    AutotuneResult r = autotune_elite(p, sampler, params, 0.0001, 0.9999);
    CHECK(r.elite_threshold == 1.0);
    CHECK(r.elite_size >= 5);
}

TEST_CASE("autotune: saturation returns the largest candidate flagged above band") {
    // single variable with a strong field persists at every threshold
    IsingProblem p({0}, {{0, 3.0}}, {});
    SamplerConfig sampler;
    sampler.sweeps = 50;
    sampler.seed = 9;
    SpvarParams params;
    params.sample_size = 40;
    AutotuneResult r = autotune_elite(p, sampler, params, 0.30, 0.40);
    CHECK(r.elite_threshold == 1.0);
    CHECK(r.fixed_fraction == 1.0);
    CHECK(!r.in_band);
}

TEST_CASE("autotune: mostly lands in band on random instances") {
    int in_band = 0, total = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        IsingProblem p = random_instance(24, range_values(5, true), range_values(5), 950 + i, 0.2);
        SamplerConfig sampler;
        sampler.sweeps = 25;   // noisy on purpose so persistence varies with elite size
        sampler.seed = i;
        SpvarParams params;
        params.sample_size = 200;
        AutotuneResult r = autotune_elite(p, sampler, params, 0.10, 0.90);
        ++total;
        if (r.in_band) ++in_band;
    }
    CHECK(in_band >= total * 8 / 10);
}

TEST_CASE("component_histogram: connected problem is a single bar") {
    auto histogram = component_histogram({random_instance(9, {-1, 1}, {0, 1}, 10, 1.0)});
    REQUIRE(histogram.size() == 1);
    CHECK(histogram.at(9) == 1);
}

TEST_CASE("component_histogram: fully fixed problems vanish; totals count free variables") {
    std::vector<IsingProblem> problems = {IsingProblem({}, {}, {}, 1.0),
                                          random_instance(8, {-1, 1}, {0}, 11, 0.2),
                                          random_instance(5, {-1, 1}, {0}, 12, 0.2)};
    auto histogram = component_histogram(problems);
    std::size_t total = 0;
    for (const auto& [size, count] : histogram) total += size * count;
    CHECK(total == 13);
    CHECK(component_histogram({IsingProblem({}, {}, {}, 0.0)}).empty());
}

TEST_CASE("fixedcount_vs_biasrange: one row per n") {
    HardwareGraph g = chimera_graph(1, 1, 4);
    auto series = biasrange_series(g, 4, 2, 20);
    SamplerConfig sampler;
    sampler.sweeps = 40;
    SpvarParams params;
    params.sample_size = 30;
    auto rows = fixedcount_vs_biasrange(series, sampler, params);
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].n == static_cast<int>(k) + 1);
        CHECK(rows[k].mean_fixed >= 0.0);
        CHECK(rows[k].mean_fixed <= 8.0);
    }
}

TEST_CASE("fixedcount_vs_biasrange: dominant fields fix nearly everything") {
    HardwareGraph g = chimera_graph(1, 1, 4);
    ProblemSetSpec spec;
    spec.graph = g;
    spec.couplers = named_set("U_2");
    spec.biases = explicit_set({-60, 60});   // fields dominate every coupler sum
    spec.count = 3;
    spec.base_seed = 30;
    SamplerConfig sampler;
    sampler.sweeps = 200;
    SpvarParams params;
    params.sample_size = 50;
    auto rows = fixedcount_vs_biasrange({spec}, sampler, params);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_fixed >= 7.0);
}

TEST_CASE("correlation_vs_distance: distance 0 is exactly 1") {
    IsingProblem p = random_instance(10, range_values(2, true), {0}, 40, 0.4);
    SamplerConfig c;
    c.reads = 30;
    c.sweeps = 30;
    SampleSet s = sample_sa(p, c);
    auto rows = correlation_vs_distance(p, s);
    REQUIRE(!rows.empty());
    CHECK(rows[0].distance == 0);
    CHECK(rows[0].mean_correlation == doctest::Approx(1.0));
}

TEST_CASE("correlation_vs_distance: cold ferromagnetic chain is near 1 everywhere") {
    std::vector<Var> vars = {0, 1, 2, 3, 4, 5};
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    for (Var v : vars) h[v] = 0.0;
    for (int i = 0; i + 1 < 6; ++i) j[{i, i + 1}] = -1.0;
    IsingProblem chain(vars, h, j);
    SamplerConfig c;
    c.reads = 50;
    c.sweeps = 300;
    c.seed = 41;
    SampleSet s = sample_sa(chain, c);
    for (const DistanceRow& row : correlation_vs_distance(chain, s))
        CHECK(row.mean_correlation >= 0.95);
}

TEST_CASE("correlation_vs_distance: requires zero biases") {
    IsingProblem p({0, 1}, {{0, 1.0}, {1, 0.0}}, {{{0, 1}, -1.0}});
    SampleSet s;
    s.solutions = {{{{0, 1}, {1, 1}}, 0.0}};
    CHECK_THROWS_AS(correlation_vs_distance(p, s), std::invalid_argument);
}

TEST_CASE("spearman_rho: monotone series and ties") {
    CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {40, 30, 20, 10}) == doctest::Approx(-1.0));
    CHECK(spearman_rho({1, 2, 3, 4}, {5, 5, 5, 5}) == 0.0);   // degenerate: zero variance
    // nonlinear but monotone still gives rho = 1
    CHECK(spearman_rho({1, 2, 3, 4}, {1, 100, 101, 10000}) == doctest::Approx(1.0));
}

TEST_CASE("CSV and JSON emitters carry the expected shape") {
    BenchConfig config;
    config.sampler.sweeps = 20;
    config.baseline_reads = 20;
    config.ispvar.sample_size = 10;
    config.final_reads = 10;
    BenchReport report = run_benchmark(small_set(2, 8, 990), config);
    nlohmann::json j = bench_report_to_json(report);
    CHECK(j.at("instances").size() == 2);
    CHECK(j.at("config").at("method_total_reads") == config.method_total_reads());
    std::string csv = bench_report_to_csv(report);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);   // header + 2 rows
    std::string histogram = histogram_to_csv({{4, 2}, {9, 1}});
    CHECK(histogram == "component_size,count\n4,2\n9,1\n");
}
