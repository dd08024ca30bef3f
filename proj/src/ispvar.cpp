#include "spvar/ispvar.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "spvar/rng.hpp"

namespace spvar {

namespace {

SampleSet restrict_sample(const SampleSet& samples, const std::vector<Var>& vars) {
    SampleSet out;
    out.seed = samples.seed;
    out.reads = samples.reads;
    out.num_gauges = samples.num_gauges;
    for (const auto& solution : samples.solutions) {
        Solution restricted;
        restricted.energy = solution.energy;
        for (Var v : vars) {
            auto it = solution.spins.find(v);
            if (it != solution.spins.end()) restricted.spins[v] = it->second;
        }
        out.solutions.push_back(std::move(restricted));
    }
    return out;
}

/// Sign-propagates seed values through one component. Returns false on a
/// frustrated loop or a conflict between seeds.
bool propagate_component(const std::vector<Var>& members,
                         const std::map<Var, std::vector<std::pair<Var, int>>>& adjacency,
                         const std::map<Var, int>& seeds, std::map<Var, int>& values) {
    Var start = members.front();
    for (Var v : members) {
        auto it = seeds.find(v);
        if (it != seeds.end()) {
            start = v;
            break;
        }
    }
    values[start] = seeds.count(start) ? seeds.at(start) : 1;
    std::vector<Var> queue = {start};
    while (!queue.empty()) {
        Var u = queue.back();
        queue.pop_back();
        auto it = adjacency.find(u);
        if (it == adjacency.end()) continue;
        for (const auto& [v, sign] : it->second) {
            int implied = values.at(u) * sign;
            auto found = values.find(v);
            if (found == values.end()) {
                values[v] = implied;
                queue.push_back(v);
            } else if (found->second != implied) {
                return false;   // frustrated loop
            }
        }
    }
    for (const auto& [v, value] : values)
        if (seeds.count(v) && seeds.at(v) != value) return false;   // seed conflict
    return true;
}

}  // namespace

void IspvarParams::validate() const {
    if (num_steps < 1) throw std::invalid_argument("num_steps must be >= 1");
    if (elite_thresholds.size() != static_cast<std::size_t>(num_steps) ||
        fixing_thresholds.size() != static_cast<std::size_t>(num_steps))
        throw std::invalid_argument("per-step threshold lists must have num_steps entries");
    for (double e : elite_thresholds)
        if (e <= 0.0 || e > 1.0) throw std::invalid_argument("elite_threshold out of range");
    for (double f : fixing_thresholds)
        if (f <= 0.0 || f > 1.0) throw std::invalid_argument("fixing_threshold out of range");
    if (correlation_threshold <= 0.0 || correlation_threshold > 1.0)
        throw std::invalid_argument("correlation_threshold out of range");
    if (correlation_elite_threshold <= 0.0 || correlation_elite_threshold > 1.0)
        throw std::invalid_argument("correlation_elite_threshold out of range");
    if (sample_size < 1) throw std::invalid_argument("sample_size must be >= 1");
    if (num_gauges < 1) throw std::invalid_argument("num_gauges must be >= 1");
}

std::vector<std::vector<Var>> CorrelationGraph::components() const {
    int num = 0;
    for (const auto& [v, label] : component) num = std::max(num, label + 1);
    std::vector<std::vector<Var>> out(num);
    for (const auto& [v, label] : component) out[label].push_back(v);
    return out;
}

CorrelationGraph correlation_components(const SampleSet& samples,
                                        double correlation_elite_threshold,
                                        double correlation_threshold) {
    SampleSet elite = elite_trim(samples, correlation_elite_threshold);
    std::size_t count = elite.size();

    CorrelationGraph graph;
    for (const auto& [v, s] : elite.solutions.front().spins) graph.nodes.push_back(v);
    int n = static_cast<int>(graph.nodes.size());

    // dense columns
    std::vector<std::vector<int8_t>> columns(n, std::vector<int8_t>(count));
    for (std::size_t k = 0; k < count; ++k) {
        const auto& spins = elite.solutions[k].spins;
        for (int i = 0; i < n; ++i) columns[i][k] = static_cast<int8_t>(spins.at(graph.nodes[i]));
    }
    std::vector<double> mean(n), sigma(n);
    for (int i = 0; i < n; ++i) {
        long sum = 0;
        for (int8_t s : columns[i]) sum += s;
        mean[i] = static_cast<double>(sum) / count;
        sigma[i] = std::sqrt(std::max(0.0, 1.0 - mean[i] * mean[i]));   // spins are +-1
    }

    std::vector<std::vector<std::pair<int, int>>> adjacency(n);
    for (int i = 0; i < n; ++i) {
        if (sigma[i] == 0.0) continue;
        for (int j = i + 1; j < n; ++j) {
            if (sigma[j] == 0.0) continue;
            long dot = 0;
            for (std::size_t k = 0; k < count; ++k) dot += columns[i][k] * columns[j][k];
            double r = (static_cast<double>(dot) / count - mean[i] * mean[j]) / (sigma[i] * sigma[j]);
            r = std::clamp(r, -1.0, 1.0);
            if (std::abs(r) >= correlation_threshold) {
                graph.edges.push_back({graph.nodes[i], graph.nodes[j], r});
                int sign = r > 0 ? 1 : -1;
                adjacency[i].emplace_back(j, sign);
                adjacency[j].emplace_back(i, sign);
            }
        }
    }

    // component labels via BFS, in node order
    std::vector<int> label(n, -1);
    int next = 0;
    std::vector<int> queue;
    for (int i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        queue.assign(1, i);
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (const auto& [v, sign] : adjacency[u]) {
                if (label[v] < 0) {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        ++next;
    }
    for (int i = 0; i < n; ++i) graph.component[graph.nodes[i]] = label[i];
    return graph;
}

FixAssignment fix_by_correlation(const CorrelationGraph& graph,
                                 const PersistencyResult& preproc_fixed,
                                 const IsingProblem& problem) {
    std::map<Var, std::vector<std::pair<Var, int>>> adjacency;
    for (const auto& edge : graph.edges) {
        int sign = edge.weight > 0 ? 1 : -1;
        adjacency[edge.a].emplace_back(edge.b, sign);
        adjacency[edge.b].emplace_back(edge.a, sign);
    }

    FixAssignment out;
    for (const auto& members : graph.components()) {
        bool seeded = false;
        for (Var v : members) seeded = seeded || preproc_fixed.fixed.count(v) > 0;
        if (!seeded || members.size() < 2) continue;

        std::map<Var, int> values;
        if (!propagate_component(members, adjacency, preproc_fixed.fixed, values)) continue;
        for (const auto& [v, value] : values) {
            if (preproc_fixed.fixed.count(v)) continue;
            if (!problem.has_variable(v)) continue;
            out.set(v, value, FixSource::Correlation);
        }
    }
    return out;
}

Var z2_reference(const IsingProblem& problem) {
    if (problem.num_variables() == 0) throw std::invalid_argument("empty problem");
    std::map<Var, int> degree;
    for (Var v : problem.variables()) degree[v] = 0;
    for (const auto& [key, value] : problem.J()) {
        ++degree[key.first];
        ++degree[key.second];
    }
    Var best = problem.variables().front();
    for (Var v : problem.variables())
        if (degree[v] > degree[best]) best = v;
    return best;
}

SampleSet canonicalize_z2(const IsingProblem& problem, const SampleSet& samples, Var reference) {
    if (!problem.all_biases_zero())
        throw std::invalid_argument("Z2 canonicalization requires all-zero biases");
    SampleSet out = samples;
    for (auto& solution : out.solutions) {
        auto it = solution.spins.find(reference);
        if (it == solution.spins.end())
            throw std::invalid_argument("reference variable missing from a solution");
        if (it->second == -1) {
            for (auto& [v, s] : solution.spins) s = -s;
        }
    }
    return out;
}

FixAssignment z2_prefix_component(const IsingProblem& problem, const SampleSet& samples,
                                  const IspvarParams& params) {
    if (!problem.all_biases_zero())
        throw std::invalid_argument("z2 pre-fixing requires all-zero biases");
    if (samples.empty()) throw std::invalid_argument("empty sample");

    // correlations are flip-invariant only through the products, so compute the
    // graph after canonicalizing on a provisional reference
    Var provisional = z2_reference(problem);
    SampleSet canonical = canonicalize_z2(problem, samples, provisional);
    CorrelationGraph graph = correlation_components(
        canonical, params.correlation_elite_threshold, params.correlation_threshold);

    // a variable constant across the canonicalized elite has no Pearson edge,
    // but it is perfectly aligned with the reference (itself constant +1 by
    // construction) — fix it to its constant value
    SampleSet elite = elite_trim(canonical, params.correlation_elite_threshold);
    std::map<Var, int> constant;
    for (const auto& [v, s] : elite.solutions.front().spins) constant[v] = s;
    for (const Solution& sol : elite.solutions)
        for (const auto& [v, s] : sol.spins)
            if (constant.count(v) && constant[v] != s) constant.erase(v);

    auto components = graph.components();
    const std::vector<Var>* largest = nullptr;
    for (const auto& members : components)
        if (!largest || members.size() > largest->size()) largest = &members;

    FixAssignment out;
    if (!largest || largest->size() < 2) {
        for (const auto& [v, s] : constant) out.set(v, s, FixSource::Z2Prefix);
        if (!out.contains(provisional)) out.set(provisional, 1, FixSource::Z2Prefix);
        return out;
    }

    // reference: highest problem-graph degree inside the largest component
    std::map<Var, int> degree;
    for (Var v : problem.variables()) degree[v] = 0;
    for (const auto& [key, value] : problem.J()) {
        ++degree[key.first];
        ++degree[key.second];
    }
    Var reference = largest->front();
    for (Var v : *largest)
        if (degree[v] > degree[reference]) reference = v;

    std::map<Var, std::vector<std::pair<Var, int>>> adjacency;
    for (const auto& edge : graph.edges) {
        int sign = edge.weight > 0 ? 1 : -1;
        adjacency[edge.a].emplace_back(edge.b, sign);
        adjacency[edge.b].emplace_back(edge.a, sign);
    }
    std::map<Var, int> seeds = {{reference, 1}};
    std::map<Var, int> values;
    if (!propagate_component(*largest, adjacency, seeds, values)) {
        out.set(reference, 1, FixSource::Z2Prefix);   // frustrated: fall back
        return out;
    }
    for (const auto& [v, value] : values) out.set(v, value, FixSource::Z2Prefix);
    for (const auto& [v, s] : constant)
        if (!out.contains(v)) out.set(v, s, FixSource::Z2Prefix);
    return out;
}

OverlapDistribution overlap_distribution(const SampleSet& samples, int bins,
                                         std::size_t max_pairs) {
    if (samples.size() < 2) throw std::invalid_argument("need at least two solutions");
    std::size_t count = samples.size();
    std::size_t n = samples.solutions.front().spins.size();

    std::size_t total_pairs = count * (count - 1) / 2;
    std::size_t stride = total_pairs > max_pairs ? total_pairs / max_pairs + 1 : 1;

    OverlapDistribution out;
    out.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) out.bin_edges[b] = -1.0 + 2.0 * b / bins;
    out.counts.assign(bins, 0);

    double sum = 0, sum2 = 0, sum3 = 0, sum4 = 0;
    std::size_t pair_index = 0;
    for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = a + 1; b < count; ++b, ++pair_index) {
            if (pair_index % stride != 0) continue;
            long dot = 0;
            const auto& sa = samples.solutions[a].spins;
            const auto& sb = samples.solutions[b].spins;
            for (auto ia = sa.begin(), ib = sb.begin(); ia != sa.end(); ++ia, ++ib)
                dot += ia->second * ib->second;
            double q = n > 0 ? static_cast<double>(dot) / n : 0.0;
            int bin = std::min(bins - 1, static_cast<int>((q + 1.0) / 2.0 * bins));
            ++out.counts[bin];
            ++out.pair_count;
            sum += q;
            sum2 += q * q;
            sum3 += q * q * q;
            sum4 += q * q * q * q;
        }
    }

    double m = sum / out.pair_count;
    double var = sum2 / out.pair_count - m * m;
    if (var > 1e-12) {
        double sd = std::sqrt(var);
        double m3 = sum3 / out.pair_count - 3 * m * sum2 / out.pair_count + 2 * m * m * m;
        double m4 = sum4 / out.pair_count - 4 * m * sum3 / out.pair_count +
                    6 * m * m * sum2 / out.pair_count - 3 * m * m * m * m;
        double skew = m3 / (sd * sd * sd);
        double kurt = m4 / (var * var);
        out.bimodality = kurt > 0 ? (skew * skew + 1.0) / kurt : 0.0;
    }
    return out;
}

IspvarOutcome ispvar(const IsingProblem& problem, const SamplerConfig& sampler,
                     const IspvarParams& params) {
    return ispvar(problem, sampler, params,
                  [](const IsingProblem& p, const SamplerConfig& c, int gauges) {
                      return sample_multigauge(p, c, gauges);
                  });
}

IspvarOutcome ispvar(const IsingProblem& problem, const SamplerConfig& sampler,
                     const IspvarParams& params, const SampleFn& draw) {
    params.validate();
    using clock = std::chrono::steady_clock;

    IspvarOutcome outcome;
    IsingProblem current = problem;
    bool zero_bias = params.zero_bias_mode == ZeroBiasMode::On ||
                     (params.zero_bias_mode == ZeroBiasMode::Auto &&
                      problem.num_variables() > 0 && problem.all_biases_zero());

    auto apply = [&](const FixAssignment& fixes) {
        if (fixes.empty()) return;
        current = fix_variables(current, fixes);
        outcome.assignment.merge(fixes);
    };
    auto preprocess_pass = [&]() -> PersistencyResult {
        PersistencyResult pre = roof_duality_fix(current);
        FixAssignment fixes;
        for (const auto& [v, s] : pre.fixed) fixes.set(v, s, FixSource::Preprocess);
        apply(fixes);
        return pre;
    };
    auto step_config = [&](int step) {
        SamplerConfig config = sampler;
        config.reads = params.sample_size;
        if (step > 1) config.seed = sampler.seed + 0x9e3779b97f4a7c15ULL * (step - 1);
        return config;
    };

    // pre-step: classical pre-processing alone (plus the largest-component
    // Z2 prefix in the zero-bias case)
    if (zero_bias || params.enable_preprocess) {
        auto start = clock::now();
        StepReport report;
        report.step = 0;
        if (zero_bias && current.num_variables() > 0) {
            SamplerConfig config = step_config(1);
            config.seed = sampler.seed + 0x5b21c24e8a1fULL;
            SampleSet samples = draw(current, config, params.num_gauges);
            FixAssignment prefix = z2_prefix_component(current, samples, params);
            report.fixed_method += prefix.size();
            apply(prefix);
        }
        if (params.enable_preprocess && current.num_variables() > 0) {
            PersistencyResult pre = preprocess_pass();
            report.fixed_preprocess += pre.fixed.size();
        }
        report.remaining = current.num_variables();
        report.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
        outcome.reports.push_back(report);
    }

    for (int step = 1; step <= params.num_steps; ++step) {
        if (current.num_variables() == 0) break;
        auto start = clock::now();
        StepReport report;
        report.step = step;

        if (params.step_order == StepOrder::PreprocessFirst && params.enable_preprocess) {
            PersistencyResult pre = preprocess_pass();
            report.fixed_preprocess += pre.fixed.size();
            if (current.num_variables() == 0) {
                report.remaining = 0;
                report.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
                outcome.reports.push_back(report);
                break;
            }
        }

        SampleSet samples = draw(current, step_config(step), params.num_gauges);

        SpvarParams sp;
        sp.sample_size = params.sample_size;
        sp.fixing_threshold = params.fixing_thresholds[step - 1];
        sp.elite_threshold = params.elite_thresholds[step - 1];
        sp.num_gauges = params.num_gauges;
        SpvarOutcome reduced = spvar_from_sample(current, samples, sp);
        report.fixed_method += reduced.assignment.size();
        // the sampled problem, before this step's fixes: correlation nodes
        IsingProblem sampled_problem = current;
        apply(reduced.assignment);

        PersistencyResult pre;   // empty unless a pass runs below
        if (params.enable_preprocess && current.num_variables() > 0) {
            pre = preprocess_pass();
            report.fixed_preprocess += pre.fixed.size();
        }

        if (params.enable_correlation_fix && current.num_variables() > 0 && !pre.fixed.empty() &&
            samples.size() >= static_cast<std::size_t>(params.min_correlation_sample)) {
            // graph over the variables the pre-processor saw (free after SPVAR)
            FixAssignment spvar_fixes = reduced.assignment;
            std::vector<Var> nodes;
            for (Var v : sampled_problem.variables())
                if (!spvar_fixes.contains(v)) nodes.push_back(v);
            SampleSet restricted = restrict_sample(samples, nodes);
            CorrelationGraph graph = correlation_components(
                restricted, params.correlation_elite_threshold, params.correlation_threshold);
            FixAssignment corr = fix_by_correlation(graph, pre, current);
            report.fixed_method += corr.size();
            apply(corr);
        }

        report.remaining = current.num_variables();
        report.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
        outcome.reports.push_back(report);
    }

    outcome.reduced = current;
    return outcome;
}

}  // namespace spvar
