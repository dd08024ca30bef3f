#include "spvar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <thread>

#include "spvar/rng.hpp"

namespace spvar {

namespace {

constexpr double kEnergyTol = 1e-9;

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BestKnown best_known(const IsingProblem& problem, const OracleConfig& oracle) {
    BestKnown out;
    out.proven = true;
    if (problem.num_variables() == 0) {
        out.energy = problem.offset();
        return out;
    }
    out.energy = 0.0;
    for (const IsingProblem& component : connected_components(problem)) {
        SamplerConfig config;
        if (static_cast<int>(component.num_variables()) <= oracle.exact_cap) {
            config.kind = SamplerKind::Exact;
            config.exact_cap = oracle.exact_cap;
        } else {
            config.kind = SamplerKind::Tabu;
            config.reads = oracle.tabu_restarts;
            config.seed = oracle.seed;
            out.proven = false;
        }
        SampleSet solved = sample(component, config);
        const Solution& best = solved.best();
        out.energy += best.energy;
        for (const auto& [v, s] : best.spins) out.witness[v] = s;
    }
    return out;
}

bool fixing_success(const IsingProblem& original, const FixAssignment& assignment,
                    const OracleConfig& oracle) {
    IsingProblem reduced = fix_variables(original, assignment);
    return std::abs(best_known(reduced, oracle).energy - best_known(original, oracle).energy) <=
           kEnergyTol;
}

void BenchConfig::validate() const {
    if (baseline_reads < 1) throw std::invalid_argument("baseline_reads must be >= 1");
    if (baseline_gauges < 1) throw std::invalid_argument("baseline_gauges must be >= 1");
    if (final_reads < 1) throw std::invalid_argument("final_reads must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    ispvar.validate();
}

namespace {

InstanceResult run_instance(const IsingProblem& problem, const BenchConfig& config, int index) {
    InstanceResult row;
    row.index = index;
    row.num_variables = problem.num_variables();

    BestKnown reference = best_known(problem, config.oracle);
    row.best_known_energy = reference.energy;
    row.best_known_proven = reference.proven;

    std::uint64_t stream = config.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index);

    auto start = std::chrono::steady_clock::now();
    SamplerConfig baseline = config.sampler;
    baseline.reads = config.baseline_reads;
    baseline.seed = splitmix64(stream);
    SampleSet baseline_sample = sample_multigauge(problem, baseline, config.baseline_gauges);
    row.baseline_best = baseline_sample.best().energy;
    for (const Solution& s : baseline_sample.solutions)
        if (std::abs(s.energy - reference.energy) <= kEnergyTol) ++row.baseline_freq;
    row.baseline_seconds = elapsed_since(start);

    if (!config.method_enabled) return row;

    start = std::chrono::steady_clock::now();
    SamplerConfig method_sampler = config.sampler;
    method_sampler.seed = splitmix64(stream);
    IspvarOutcome outcome = ispvar(problem, method_sampler, config.ispvar);
    for (const StepReport& step : outcome.reports) {
        row.fixed_method += step.fixed_method;
        row.fixed_preprocess += step.fixed_preprocess;
    }

    if (outcome.reduced.num_variables() == 0) {
        row.method_best = outcome.reduced.offset();
        row.method_freq =
            std::abs(row.method_best - reference.energy) <= kEnergyTol ? config.final_reads : 0;
    } else {
        SamplerConfig final_config = config.sampler;
        final_config.reads = config.final_reads;
        final_config.seed = splitmix64(stream);
        SampleSet final_sample = solve_by_components(outcome.reduced, final_config);
        row.method_best = final_sample.best().energy;
        for (const Solution& s : final_sample.solutions)
            if (std::abs(s.energy - reference.energy) <= kEnergyTol) ++row.method_freq;
    }
    row.fixing_ok = fixing_success(problem, outcome.assignment, config.oracle);
    row.better_or_equal = row.method_best <= row.baseline_best + kEnergyTol;
    row.method_seconds = elapsed_since(start);
    return row;
}

Aggregates aggregate(const std::vector<InstanceResult>& rows, bool method) {
    Aggregates out;
    std::size_t valid = 0, success = 0, better = 0, fixed_ok = 0;
    double residual_sum = 0.0, freq_sum = 0.0;
    for (const InstanceResult& row : rows) {
        if (!row.error.empty()) continue;
        ++valid;
        double found = method ? row.method_best : row.baseline_best;
        std::size_t freq = method ? row.method_freq : row.baseline_freq;
        if (freq > 0) {
            ++success;
            freq_sum += static_cast<double>(freq);
        }
        residual_sum += found - row.best_known_energy;
        if (row.better_or_equal) ++better;
        if (row.fixing_ok) ++fixed_ok;
    }
    if (valid == 0) return out;
    out.success_rate = 100.0 * success / valid;
    out.mean_residual = residual_sum / valid;
    out.mean_freq_on_success = success ? freq_sum / success : 0.0;
    out.better_rate = 100.0 * better / valid;
    out.fix_rate = 100.0 * fixed_ok / valid;
    return out;
}

}  // namespace

void recompute_aggregates(BenchReport& report) {
    report.baseline = aggregate(report.instances, false);
    report.baseline.better_rate = 0.0;
    report.baseline.fix_rate = 0.0;
    report.method = report.config.method_enabled ? aggregate(report.instances, true) : Aggregates{};
}

BenchReport run_benchmark(const std::vector<IsingProblem>& problems, const BenchConfig& config) {
    config.validate();
    BenchReport report;
    report.config = config;
    report.instances.resize(problems.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= problems.size()) break;
            try {
                report.instances[i] = run_instance(problems[i], config, static_cast<int>(i));
            } catch (const std::exception& e) {
                report.instances[i].index = static_cast<int>(i);
                report.instances[i].error = e.what();
            }
        }
    };
    int threads = std::min<int>(config.threads, static_cast<int>(problems.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    recompute_aggregates(report);
    return report;
}

SweepGrid sweep_thresholds(const std::vector<IsingProblem>& problems, const SamplerConfig& sampler,
                           const SpvarParams& params, std::vector<double> fixing_thresholds,
                           std::vector<double> elite_thresholds, bool with_success,
                           const OracleConfig& oracle) {
    if (problems.empty()) throw std::invalid_argument("sweep needs at least one problem");
    if (fixing_thresholds.empty() || elite_thresholds.empty())
        throw std::invalid_argument("sweep threshold lists must be nonempty");

    SweepGrid grid;
    grid.fixing_thresholds = std::move(fixing_thresholds);
    grid.elite_thresholds = std::move(elite_thresholds);
    grid.mean_fixed.assign(grid.elite_thresholds.size(),
                           std::vector<double>(grid.fixing_thresholds.size(), 0.0));
    if (with_success)
        grid.success_rate.assign(grid.elite_thresholds.size(),
                                 std::vector<double>(grid.fixing_thresholds.size(), 0.0));

    for (std::size_t p = 0; p < problems.size(); ++p) {
        SamplerConfig config = sampler;
        config.reads = params.sample_size;
        config.seed = sampler.seed + 0x9e3779b97f4a7c15ULL * p;
        SampleSet samples = sample_multigauge(problems[p], config, params.num_gauges);
        for (std::size_t e = 0; e < grid.elite_thresholds.size(); ++e) {
            for (std::size_t f = 0; f < grid.fixing_thresholds.size(); ++f) {
                SpvarParams cell = params;
                cell.elite_threshold = grid.elite_thresholds[e];
                cell.fixing_threshold = grid.fixing_thresholds[f];
                SpvarOutcome outcome = spvar_from_sample(problems[p], samples, cell);
                grid.mean_fixed[e][f] += static_cast<double>(outcome.assignment.size());
                if (with_success && fixing_success(problems[p], outcome.assignment, oracle))
                    grid.success_rate[e][f] += 1.0;
            }
        }
    }
    double n = static_cast<double>(problems.size());
    for (std::size_t e = 0; e < grid.elite_thresholds.size(); ++e)
        for (std::size_t f = 0; f < grid.fixing_thresholds.size(); ++f) {
            grid.mean_fixed[e][f] /= n;
            if (with_success) grid.success_rate[e][f] = 100.0 * grid.success_rate[e][f] / n;
        }
    return grid;
}

AutotuneResult autotune_elite(const IsingProblem& problem, const SamplerConfig& sampler,
                              const SpvarParams& params, double band_low, double band_high) {
    if (!(band_low > 0.0 && band_high < 1.0 && band_low <= band_high))
        throw std::invalid_argument("band must satisfy 0 < low <= high < 1");
    if (problem.num_variables() == 0) throw std::invalid_argument("empty problem");

    SamplerConfig config = sampler;
    config.reads = params.sample_size;
    SampleSet samples = sample_multigauge(problem, config, params.num_gauges);

    double n = static_cast<double>(problem.num_variables());
    AutotuneResult best;
    double best_distance = 2.0;
    for (double candidate = 1.0; candidate >= 0.049; candidate -= 0.05) {
        auto elite = static_cast<std::size_t>(std::ceil(candidate * samples.size()));
        if (elite < 5) break;   // too-small elite sets are unreliable

        SpvarParams cell = params;
        cell.elite_threshold = candidate;
        SpvarOutcome outcome = spvar_from_sample(problem, samples, cell);
        double fraction = static_cast<double>(outcome.assignment.size()) / n;

        double distance = fraction < band_low    ? band_low - fraction
                          : fraction > band_high ? fraction - band_high
                                                 : 0.0;
        if (distance < best_distance) {
            best_distance = distance;
            best.elite_threshold = candidate;
            best.fixed_fraction = fraction;
            best.elite_size = outcome.elite_size;
            best.in_band = distance == 0.0;
        }
        if (best.in_band) break;
        // shrinking the elite set only raises persistence; once past the band
        // the remaining candidates move further away
        if (fraction > band_high) break;
    }
    return best;
}

std::map<std::size_t, std::size_t> component_histogram(const std::vector<IsingProblem>& problems) {
    std::map<std::size_t, std::size_t> out;
    for (const IsingProblem& problem : problems) {
        if (problem.num_variables() == 0) continue;
        for (const IsingProblem& component : connected_components(problem))
            ++out[component.num_variables()];
    }
    return out;
}

std::vector<BiasRangeRow> fixedcount_vs_biasrange(const std::vector<ProblemSetSpec>& series,
                                                  const SamplerConfig& sampler,
                                                  const SpvarParams& params) {
    std::vector<BiasRangeRow> rows;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const ProblemSetSpec& spec = series[k];
        double total = 0.0;
        for (int i = 0; i < spec.count; ++i) {
            IsingProblem problem = instance(spec, i);
            SamplerConfig config = sampler;
            config.seed = sampler.seed + 0x9e3779b97f4a7c15ULL * (k * spec.count + i);
            total += static_cast<double>(spvar(problem, config, params).assignment.size());
        }
        int n = (static_cast<int>(spec.biases.values.size()) - 1) / 2;   // U_n range
        rows.push_back({n, total / spec.count});
    }
    return rows;
}

std::vector<DistanceRow> correlation_vs_distance(const IsingProblem& problem,
                                                 const SampleSet& samples) {
    if (!problem.all_biases_zero())
        throw std::invalid_argument("correlation-vs-distance requires all-zero biases");
    if (samples.empty()) throw std::invalid_argument("empty sample set");

    const std::vector<Var>& vars = problem.variables();
    std::map<Var, std::vector<Var>> adjacency;
    for (const auto& [key, value] : problem.J()) {
        adjacency[key.first].push_back(key.second);
        adjacency[key.second].push_back(key.first);
    }

    std::map<int, double> sums;
    std::map<int, std::size_t> counts;
    for (Var reference : vars) {
        // conditional expectation given reference = +1
        std::map<Var, double> mean;
        std::size_t kept = 0;
        for (const Solution& s : samples.solutions) {
            if (s.spins.at(reference) != 1) continue;
            ++kept;
            for (const auto& [v, spin] : s.spins) mean[v] += spin;
        }
        if (kept == 0) continue;
        for (auto& [v, m] : mean) m /= static_cast<double>(kept);

        // unweighted shortest-path distances via BFS
        std::map<Var, int> distance;
        std::queue<Var> frontier;
        distance[reference] = 0;
        frontier.push(reference);
        while (!frontier.empty()) {
            Var u = frontier.front();
            frontier.pop();
            for (Var w : adjacency[u])
                if (!distance.count(w)) {
                    distance[w] = distance[u] + 1;
                    frontier.push(w);
                }
        }
        for (const auto& [v, d] : distance) {   // disconnected pairs excluded
            sums[d] += mean[v];
            ++counts[d];
        }
    }

    std::vector<DistanceRow> rows;
    for (const auto& [d, sum] : sums) rows.push_back({d, sum / counts[d], counts[d]});
    return rows;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("rank correlation needs two equal-length series");
    auto ranks = [](const std::vector<double>& values) {
        std::size_t n = values.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
            double average = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = average;
            i = j + 1;
        }
        return rank;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

nlohmann::json bench_report_to_json(const BenchReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const InstanceResult& r : report.instances) {
        rows.push_back({{"index", r.index},
                        {"num_variables", r.num_variables},
                        {"best_known_energy", r.best_known_energy},
                        {"best_known_proven", r.best_known_proven},
                        {"baseline_best", r.baseline_best},
                        {"baseline_freq", r.baseline_freq},
                        {"method_best", r.method_best},
                        {"method_freq", r.method_freq},
                        {"fixed_method", r.fixed_method},
                        {"fixed_preprocess", r.fixed_preprocess},
                        {"fixing_ok", r.fixing_ok},
                        {"better_or_equal", r.better_or_equal},
                        {"baseline_seconds", r.baseline_seconds},
                        {"method_seconds", r.method_seconds},
                        {"error", r.error}});
    }
    auto agg = [](const Aggregates& a) {
        return nlohmann::json{{"success_rate", a.success_rate},
                              {"mean_residual", a.mean_residual},
                              {"mean_freq_on_success", a.mean_freq_on_success},
                              {"better_rate", a.better_rate},
                              {"fix_rate", a.fix_rate}};
    };
    const BenchConfig& c = report.config;
    nlohmann::json config = {{"sampler", to_string(c.sampler.kind)},
                             {"sweeps", c.sampler.sweeps},
                             {"seed", c.seed},
                             {"sampler_seed", c.sampler.seed},
                             {"baseline_reads", c.baseline_reads},
                             {"baseline_gauges", c.baseline_gauges},
                             {"steps", c.ispvar.num_steps},
                             {"step_reads", c.ispvar.sample_size},
                             {"final_reads", c.final_reads},
                             {"method_total_reads", c.method_total_reads()},
                             {"method_enabled", c.method_enabled},
                             {"threads", c.threads}};
    return {{"config", config},
            {"instances", rows},
            {"baseline", agg(report.baseline)},
            {"method", agg(report.method)}};
}

std::string bench_report_to_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "index,num_variables,best_known_energy,best_known_proven,baseline_best,baseline_freq,"
           "method_best,method_freq,fixed_method,fixed_preprocess,fixing_ok,better_or_equal,"
           "baseline_seconds,method_seconds,error\n";
    for (const InstanceResult& r : report.instances) {
        out << r.index << ',' << r.num_variables << ',' << r.best_known_energy << ','
            << r.best_known_proven << ',' << r.baseline_best << ',' << r.baseline_freq << ','
            << r.method_best << ',' << r.method_freq << ',' << r.fixed_method << ','
            << r.fixed_preprocess << ',' << r.fixing_ok << ',' << r.better_or_equal << ','
            << r.baseline_seconds << ',' << r.method_seconds << ',' << r.error << '\n';
    }
    return out.str();
}

std::string sweep_to_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "elite_threshold";
    for (double f : grid.fixing_thresholds) out << ",F=" << f;
    out << '\n';
    for (std::size_t e = 0; e < grid.elite_thresholds.size(); ++e) {
        out << grid.elite_thresholds[e];
        for (std::size_t f = 0; f < grid.fixing_thresholds.size(); ++f)
            out << ',' << grid.mean_fixed[e][f];
        out << '\n';
    }
    if (!grid.success_rate.empty()) {
        out << "success_rate\n";
        for (std::size_t e = 0; e < grid.elite_thresholds.size(); ++e) {
            out << grid.elite_thresholds[e];
            for (std::size_t f = 0; f < grid.fixing_thresholds.size(); ++f)
                out << ',' << grid.success_rate[e][f];
            out << '\n';
        }
    }
    return out.str();
}

std::string histogram_to_csv(const std::map<std::size_t, std::size_t>& histogram) {
    std::ostringstream out;
    out << "component_size,count\n";
    for (const auto& [size, count] : histogram) out << size << ',' << count << '\n';
    return out.str();
}

std::string biasrange_to_csv(const std::vector<BiasRangeRow>& rows) {
    std::ostringstream out;
    out << "n,mean_fixed\n";
    for (const BiasRangeRow& row : rows) out << row.n << ',' << row.mean_fixed << '\n';
    return out.str();
}

std::string distance_to_csv(const std::vector<DistanceRow>& rows) {
    std::ostringstream out;
    out << "distance,mean_correlation,pair_count\n";
    for (const DistanceRow& row : rows)
        out << row.distance << ',' << row.mean_correlation << ',' << row.pair_count << '\n';
    return out.str();
}

}  // namespace spvar
