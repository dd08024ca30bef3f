#include "spvar/samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "spvar/json_io.hpp"
#include "spvar/rng.hpp"

namespace spvar {

namespace {

/// Index-mapped adjacency view for the hot loops.
struct CompactProblem {
    std::vector<Var> vars;                                 // index -> variable id
    std::vector<double> bias;
    std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbour index, J)
    double offset = 0.0;

    static CompactProblem from(const IsingProblem& problem) {
        CompactProblem c;
        c.vars = problem.variables();
        c.offset = problem.offset();
        int n = static_cast<int>(c.vars.size());
        c.bias.resize(n);
        c.adj.resize(n);
        std::map<Var, int> index;
        for (int i = 0; i < n; ++i) index[c.vars[i]] = i;
        for (int i = 0; i < n; ++i) c.bias[i] = problem.bias(c.vars[i]);
        for (const auto& [key, value] : problem.J()) {
            int a = index.at(key.first), b = index.at(key.second);
            c.adj[a].emplace_back(b, value);
            c.adj[b].emplace_back(a, value);
        }
        return c;
    }

    int size() const { return static_cast<int>(vars.size()); }

    double energy_of(const std::vector<int8_t>& spins) const {
        double e = offset;
        for (int i = 0; i < size(); ++i) {
            e += bias[i] * spins[i];
            for (const auto& [j, value] : adj[i])
                if (j > i) e += value * spins[i] * spins[j];
        }
        return e;
    }

    /// h_i + sum_j J_ij s_j
    double field(const std::vector<int8_t>& spins, int i) const {
        double f = bias[i];
        for (const auto& [j, value] : adj[i]) f += value * spins[j];
        return f;
    }

    SpinConfiguration to_config(const std::vector<int8_t>& spins) const {
        SpinConfiguration out;
        for (int i = 0; i < size(); ++i) out[vars[i]] = spins[i];
        return out;
    }
};

SampleSet empty_problem_sample(const IsingProblem& problem, const SamplerConfig& config) {
    SampleSet out;
    out.seed = config.seed;
    out.reads = config.reads;
    for (int r = 0; r < config.reads; ++r)
        out.solutions.push_back({SpinConfiguration{}, problem.offset()});
    return out;
}

void greedy_descent(const CompactProblem& compact, std::vector<int8_t>& spins) {
    for (;;) {
        int best = -1;
        double best_delta = 0.0;
        for (int i = 0; i < compact.size(); ++i) {
            double delta = -2.0 * spins[i] * compact.field(spins, i);
            if (delta < best_delta) {
                best_delta = delta;
                best = i;
            }
        }
        if (best < 0) break;
        spins[best] = -spins[best];
    }
}

}  // namespace

SamplerKind sampler_kind_from_string(const std::string& s) {
    if (s == "simulated-annealing" || s == "sa") return SamplerKind::SimulatedAnnealing;
    if (s == "tabu-1opt" || s == "tabu") return SamplerKind::Tabu;
    if (s == "exact") return SamplerKind::Exact;
    if (s == "external-file") return SamplerKind::ExternalFile;
    throw std::invalid_argument("unknown sampler kind: " + s);
}

std::string to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::SimulatedAnnealing: return "simulated-annealing";
        case SamplerKind::Tabu: return "tabu-1opt";
        case SamplerKind::Exact: return "exact";
        case SamplerKind::ExternalFile: return "external-file";
    }
    return "?";
}

void SamplerConfig::validate() const {
    if (reads < 1) throw std::invalid_argument("reads must be >= 1");
    if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    if (beta_initial >= beta_final) throw std::invalid_argument("beta schedule must increase");
    if (tabu_tenure < 0) throw std::invalid_argument("tabu tenure must be >= 0");
}

SampleSet sample_sa(const IsingProblem& problem, const SamplerConfig& config) {
    config.validate();
    if (problem.num_variables() == 0) return empty_problem_sample(problem, config);

    CompactProblem compact = CompactProblem::from(problem);
    int n = compact.size();

    double scale = problem.max_abs_coefficient();
    if (scale == 0.0) scale = 1.0;
    std::vector<double> betas(config.sweeps);
    double ratio = config.beta_final / config.beta_initial;
    for (int t = 0; t < config.sweeps; ++t) {
        double frac = config.sweeps > 1 ? static_cast<double>(t) / (config.sweeps - 1) : 1.0;
        betas[t] = config.beta_initial * std::pow(ratio, frac) / scale;
    }

    SampleSet out;
    out.seed = config.seed;
    out.reads = config.reads;
    std::vector<int8_t> spins(n);
    for (int r = 0; r < config.reads; ++r) {
        Rng rng = Rng::derive(config.seed, r);
        for (int i = 0; i < n; ++i) spins[i] = static_cast<int8_t>(rng.pm1());
        for (double beta : betas) {
            for (int i = 0; i < n; ++i) {
                double delta = -2.0 * spins[i] * compact.field(spins, i);
                if (delta <= 0.0 || rng.real() < std::exp(-beta * delta))
                    spins[i] = -spins[i];
            }
        }
        out.solutions.push_back({compact.to_config(spins), compact.energy_of(spins)});
    }
    out.sort_by_energy();
    return out;
}

SampleSet sample_tabu(const IsingProblem& problem, const SamplerConfig& config) {
    config.validate();
    if (problem.num_variables() == 0) return empty_problem_sample(problem, config);

    CompactProblem compact = CompactProblem::from(problem);
    int n = compact.size();
    long budget = static_cast<long>(config.tabu_move_budget_per_var) * n;

    SampleSet out;
    out.seed = config.seed;
    out.reads = config.reads;
    std::vector<int8_t> spins(n), best_spins(n);
    std::vector<long> tabu_until(n);
    for (int r = 0; r < config.reads; ++r) {
        Rng rng = Rng::derive(config.seed, r);
        for (int i = 0; i < n; ++i) spins[i] = static_cast<int8_t>(rng.pm1());
        double current = compact.energy_of(spins);
        double best = current;
        best_spins = spins;
        std::fill(tabu_until.begin(), tabu_until.end(), -1);
        long last_improvement = 0;

        for (long iter = 0; iter < budget; ++iter) {
            int move = -1;
            double move_delta = 0.0;
            for (int i = 0; i < n; ++i) {
                double delta = -2.0 * spins[i] * compact.field(spins, i);
                bool admissible = tabu_until[i] < iter || current + delta < best;  // aspiration
                if (!admissible) continue;
                if (move < 0 || delta < move_delta) {
                    move = i;
                    move_delta = delta;
                }
            }
            if (move < 0) break;
            spins[move] = -spins[move];
            current += move_delta;
            tabu_until[move] = iter + config.tabu_tenure;
            if (current < best) {
                best = current;
                best_spins = spins;
                last_improvement = iter;
            }
            if (iter - last_improvement > 2L * n) break;
        }
        out.solutions.push_back({compact.to_config(best_spins), best});
    }
    out.sort_by_energy();
    return out;
}

SampleSet sample_exact(const IsingProblem& problem, const SamplerConfig& config) {
    int n = static_cast<int>(problem.num_variables());
    if (n > config.exact_cap)
        throw std::invalid_argument("exact sampler refuses " + std::to_string(n) +
                                    " variables (cap " + std::to_string(config.exact_cap) + ")");
    SampleSet out;
    out.seed = config.seed;
    if (n == 0) {
        out.solutions.push_back({SpinConfiguration{}, problem.offset()});
        out.reads = 1;
        return out;
    }

    CompactProblem compact = CompactProblem::from(problem);
    std::vector<int8_t> spins(n, -1);
    double e = compact.energy_of(spins);

    if (config.exact_spectrum_limit > 0) {
        // keep the lowest `limit` states in a max-heap
        using Entry = std::pair<double, std::uint64_t>;
        std::priority_queue<Entry> heap;
        std::uint64_t code = 0;
        auto offer = [&](double value, std::uint64_t c) {
            if (heap.size() < static_cast<std::size_t>(config.exact_spectrum_limit)) {
                heap.emplace(value, c);
            } else if (value < heap.top().first) {
                heap.pop();
                heap.emplace(value, c);
            }
        };
        offer(e, code);
        for (std::uint64_t k = 1; k < (1ULL << n); ++k) {
            int bit = std::countr_zero(k);   // gray code flips one spin per step
            e += -2.0 * spins[bit] * compact.field(spins, bit);
            spins[bit] = -spins[bit];
            code ^= 1ULL << bit;
            offer(e, code);
        }
        std::vector<Entry> entries;
        while (!heap.empty()) {
            entries.push_back(heap.top());
            heap.pop();
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& [value, c] : entries) {
            std::vector<int8_t> s(n);
            for (int i = 0; i < n; ++i) s[i] = (c >> i) & 1 ? 1 : -1;
            out.solutions.push_back({compact.to_config(s), value});
        }
    } else {
        double min_energy = e;
        std::vector<std::uint64_t> optima = {0};
        std::uint64_t code = 0;
        for (std::uint64_t k = 1; k < (1ULL << n); ++k) {
            int bit = std::countr_zero(k);
            e += -2.0 * spins[bit] * compact.field(spins, bit);
            spins[bit] = -spins[bit];
            code ^= 1ULL << bit;
            if (e < min_energy - 1e-12) {
                min_energy = e;
                optima.assign(1, code);
            } else if (std::abs(e - min_energy) <= 1e-12) {
                optima.push_back(code);
            }
        }
        for (std::uint64_t c : optima) {
            std::vector<int8_t> s(n);
            for (int i = 0; i < n; ++i) s[i] = (c >> i) & 1 ? 1 : -1;
            out.solutions.push_back({compact.to_config(s), min_energy});
        }
    }
    out.reads = static_cast<int>(out.solutions.size());
    out.sort_by_energy();
    return out;
}

SampleSet sample(const IsingProblem& problem, const SamplerConfig& config) {
    switch (config.kind) {
        case SamplerKind::SimulatedAnnealing: return sample_sa(problem, config);
        case SamplerKind::Tabu: return sample_tabu(problem, config);
        case SamplerKind::Exact: return sample_exact(problem, config);
        case SamplerKind::ExternalFile: return sample_from_json(read_json_file(config.external_path));
    }
    throw std::logic_error("unreachable");
}

SampleSet sample_multigauge(const IsingProblem& problem, const SamplerConfig& config, int num_gauges) {
    if (num_gauges < 1) throw std::invalid_argument("num_gauges must be >= 1");
    if (num_gauges == 1) {
        SampleSet out = sample(problem, config);
        out.num_gauges = 1;
        return out;
    }

    int per_gauge = config.reads / num_gauges;
    if (per_gauge < 1) per_gauge = 1;

    SampleSet merged;
    merged.seed = config.seed;
    merged.reads = config.reads;
    merged.num_gauges = num_gauges;
    for (int g = 0; g < num_gauges; ++g) {
        std::map<Var, int> gauge;
        Rng rng = Rng::derive(config.seed ^ 0x6761756765ULL, g);
        for (Var v : problem.variables()) gauge[v] = g == 0 ? 1 : rng.pm1();

        SamplerConfig sub = config;
        std::uint64_t stream = config.seed;
        sub.seed = splitmix64(stream) + g;
        sub.reads = g + 1 == num_gauges ? config.reads - per_gauge * (num_gauges - 1) : per_gauge;
        if (sub.reads < 1) sub.reads = 1;

        SampleSet part = sample(apply_gauge(problem, gauge), sub);
        for (auto& solution : part.solutions) {
            merged.solutions.push_back({ungauge(solution.spins, gauge), solution.energy});
        }
    }
    merged.sort_by_energy();
    return merged;
}

SampleSet solve_by_components(const IsingProblem& problem, const SamplerConfig& config) {
    auto components = connected_components(problem);
    if (components.size() <= 1) return sample(problem, config);

    std::vector<SampleSet> parts;
    parts.reserve(components.size());
    std::size_t compose = SIZE_MAX;
    for (std::size_t c = 0; c < components.size(); ++c) {
        SamplerConfig sub = config;
        std::uint64_t stream = config.seed;
        sub.seed = splitmix64(stream) + c;
        parts.push_back(sample(components[c], sub));
        compose = std::min(compose, parts.back().size());
    }

    SampleSet out;
    out.seed = config.seed;
    out.reads = static_cast<int>(compose);
    for (std::size_t k = 0; k < compose; ++k) {
        Solution solution;
        for (const auto& part : parts) {
            const Solution& piece = part.solutions[k];
            solution.spins.insert(piece.spins.begin(), piece.spins.end());
            solution.energy += piece.energy;
        }
        out.solutions.push_back(std::move(solution));
    }
    out.sort_by_energy();
    return out;
}

SampleSet postprocess_local_search(const IsingProblem& problem, const SampleSet& samples) {
    CompactProblem compact = CompactProblem::from(problem);
    int n = compact.size();
    SampleSet out;
    out.seed = samples.seed;
    out.reads = samples.reads;
    out.num_gauges = samples.num_gauges;
    std::vector<int8_t> spins(n);
    for (const auto& solution : samples.solutions) {
        for (int i = 0; i < n; ++i) spins[i] = static_cast<int8_t>(solution.spins.at(compact.vars[i]));
        greedy_descent(compact, spins);
        out.solutions.push_back({compact.to_config(spins), compact.energy_of(spins)});
    }
    out.sort_by_energy();
    return out;
}

}  // namespace spvar
