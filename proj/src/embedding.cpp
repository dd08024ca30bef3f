#include "spvar/embedding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "spvar/rng.hpp"

namespace spvar {

bool HardwareGraph::has_edge(int a, int b) const {
    if (a == b) return false;
    return edges.count(a < b ? std::pair{a, b} : std::pair{b, a}) > 0;
}

bool HardwareGraph::has_vertex(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<Var> Embedding::logical_variables() const {
    std::vector<Var> out;
    for (const auto& [v, chain] : chains) out.push_back(v);
    return out;
}

Embedding Embedding::restricted_to(const std::vector<Var>& vars) const {
    Embedding out;
    for (Var v : vars) {
        auto it = chains.find(v);
        if (it == chains.end()) throw std::invalid_argument("no chain for variable " + std::to_string(v));
        out.chains[v] = it->second;
    }
    return out;
}

void EmbeddedParams::validate() const {
    if (chain_strength <= 0.0) throw std::invalid_argument("chain_strength must be positive");
    if (majority_length_threshold <= 0.5 || majority_length_threshold > 1.0)
        throw std::invalid_argument("majority_length_threshold must be in (0.5,1]");
    if (chain_fixing_threshold <= 0.0 || chain_fixing_threshold > 1.0)
        throw std::invalid_argument("chain_fixing_threshold must be in (0,1]");
    if (absolute_min_length < 1) throw std::invalid_argument("absolute_min_length must be >= 1");
}

HardwareGraph chimera_graph(int m, int n, int t, double dead_fraction, std::uint64_t seed) {
    if (m < 1 || n < 1 || t < 1) throw std::invalid_argument("chimera dimensions must be >= 1");
    if (dead_fraction < 0.0 || dead_fraction >= 1.0)
        throw std::invalid_argument("dead_fraction must be in [0,1)");

    auto vertex = [&](int r, int c, int u, int k) { return ((r * n + c) * 2 + u) * t + k; };
    int size = 2 * t * m * n;

    std::vector<bool> alive(size, true);
    int num_dead = static_cast<int>(std::llround(dead_fraction * size));
    if (num_dead > 0) {
        std::vector<int> pool(size);
        for (int i = 0; i < size; ++i) pool[i] = i;
        Rng rng(seed);
        for (int i = 0; i < num_dead; ++i) {
            std::size_t j = i + rng.below(size - i);
            std::swap(pool[i], pool[j]);
            alive[pool[i]] = false;
        }
    }

    HardwareGraph graph;
    graph.chimera_m = m;
    graph.chimera_n = n;
    graph.chimera_t = t;
    for (int v = 0; v < size; ++v)
        (alive[v] ? graph.vertices : graph.dead).push_back(v);

    auto add_edge = [&](int a, int b) {
        if (alive[a] && alive[b]) graph.edges.insert(a < b ? std::pair{a, b} : std::pair{b, a});
    };
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            for (int k1 = 0; k1 < t; ++k1)
                for (int k2 = 0; k2 < t; ++k2) add_edge(vertex(r, c, 0, k1), vertex(r, c, 1, k2));
            if (r + 1 < m)
                for (int k = 0; k < t; ++k) add_edge(vertex(r, c, 0, k), vertex(r + 1, c, 0, k));
            if (c + 1 < n)
                for (int k = 0; k < t; ++k) add_edge(vertex(r, c, 1, k), vertex(r, c + 1, 1, k));
        }
    }
    return graph;
}

Embedding clique_embedding(int k, const HardwareGraph& hardware) {
    if (k < 1) throw std::invalid_argument("clique size must be >= 1");
    if (hardware.chimera_t == 0)
        throw std::invalid_argument("clique embedding requires a Chimera hardware graph");
    if (!hardware.dead.empty())
        throw std::invalid_argument("clique embedding requires a full-yield hardware graph");

    int t = hardware.chimera_t;
    int m = hardware.chimera_m, n = hardware.chimera_n;
    auto vertex = [&](int r, int c, int u, int kk) { return ((r * n + c) * 2 + u) * t + kk; };

    Embedding out;
    if (k == 1) {
        out.chains[0] = {vertex(0, 0, 0, 0)};
        return out;
    }
    int rows = (k + t - 1) / t;
    if (m < rows || n < rows)
        throw std::invalid_argument("hardware too small for K_" + std::to_string(k) +
                                    ": needs Chimera C(" + std::to_string(rows) + "," +
                                    std::to_string(rows) + "," + std::to_string(t) + ")");

    // triangle layout: variable a*t+r runs horizontally through row a up to the
    // diagonal, then vertically down column a
    for (int i = 0; i < k; ++i) {
        int a = i / t, r = i % t;
        std::vector<int> chain;
        for (int c = 0; c <= a; ++c) chain.push_back(vertex(a, c, 1, r));
        for (int rr = a; rr < rows; ++rr) chain.push_back(vertex(rr, a, 0, r));
        out.chains[i] = std::move(chain);
    }
    return out;
}

Embedding identity_embedding(const IsingProblem& problem) {
    Embedding out;
    for (Var v : problem.variables()) out.chains[v] = {v};
    return out;
}

void validate_embedding(const Embedding& embedding, const IsingProblem& logical,
                        const HardwareGraph& hardware) {
    std::set<int> used;
    for (Var v : logical.variables()) {
        auto it = embedding.chains.find(v);
        if (it == embedding.chains.end())
            throw std::invalid_argument("no chain for logical variable " + std::to_string(v));
        const auto& chain = it->second;
        if (chain.empty()) throw std::invalid_argument("empty chain");
        for (int q : chain) {
            if (!hardware.has_vertex(q))
                throw std::invalid_argument("chain uses missing hardware vertex " + std::to_string(q));
            if (!used.insert(q).second)
                throw std::invalid_argument("chains overlap at vertex " + std::to_string(q));
        }
        // chain subgraph connectivity
        std::set<int> members(chain.begin(), chain.end());
        std::vector<int> queue = {chain.front()};
        std::set<int> seen = {chain.front()};
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (int w : members)
                if (!seen.count(w) && hardware.has_edge(u, w)) {
                    seen.insert(w);
                    queue.push_back(w);
                }
        }
        if (seen.size() != members.size())
            throw std::invalid_argument("chain for variable " + std::to_string(v) + " is disconnected");
    }
    for (const auto& [key, value] : logical.J()) {
        bool found = false;
        for (int a : embedding.chains.at(key.first)) {
            for (int b : embedding.chains.at(key.second))
                if (hardware.has_edge(a, b)) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found)
            throw std::invalid_argument("no hardware edge for logical coupler (" +
                                        std::to_string(key.first) + "," +
                                        std::to_string(key.second) + ")");
    }
}

IsingProblem embed_problem(const IsingProblem& logical, const Embedding& embedding,
                           const HardwareGraph& hardware, const EmbeddedParams& params) {
    params.validate();
    validate_embedding(embedding, logical, hardware);

    std::vector<int> physical_vars;
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    for (Var v : logical.variables()) {
        const auto& chain = embedding.chains.at(v);
        double split = logical.bias(v) / static_cast<double>(chain.size());
        for (int q : chain) {
            physical_vars.push_back(q);
            h[q] = split;
        }
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (hardware.has_edge(chain[a], chain[b]))
                    j[make_pair_key(chain[a], chain[b])] = -params.chain_strength;
    }
    for (const auto& [key, value] : logical.J()) {
        std::vector<VarPair> available;
        for (int a : embedding.chains.at(key.first))
            for (int b : embedding.chains.at(key.second))
                if (hardware.has_edge(a, b)) available.push_back(make_pair_key(a, b));
        double split = value / static_cast<double>(available.size());
        for (const auto& edge : available) j[edge] += split;
    }
    return IsingProblem(std::move(physical_vars), std::move(h), std::move(j), logical.offset());
}

std::size_t intra_chain_edge_count(const Embedding& embedding, const HardwareGraph& hardware) {
    std::size_t count = 0;
    for (const auto& [v, chain] : embedding.chains)
        for (std::size_t a = 0; a < chain.size(); ++a)
            for (std::size_t b = a + 1; b < chain.size(); ++b)
                if (hardware.has_edge(chain[a], chain[b])) ++count;
    return count;
}

SpinConfiguration unembed_majority(const SpinConfiguration& physical, const Embedding& embedding) {
    SpinConfiguration out;
    for (const auto& [v, chain] : embedding.chains) {
        int sum = 0;
        for (int q : chain) sum += physical.at(q);
        out[v] = sum >= 0 ? 1 : -1;   // ties break to +1
    }
    return out;
}

SpinConfiguration unembed_energy_min(const SpinConfiguration& physical, const Embedding& embedding,
                                     const IsingProblem& logical) {
    SpinConfiguration decided;
    std::vector<Var> broken;
    for (const auto& [v, chain] : embedding.chains) {
        int first = physical.at(chain.front());
        bool unbroken = true;
        for (int q : chain) unbroken = unbroken && physical.at(q) == first;
        if (unbroken)
            decided[v] = first;
        else
            broken.push_back(v);
    }

    while (!broken.empty()) {
        Var pick = -1;
        double pick_field = 0.0;
        for (Var v : broken) {
            double field = logical.bias(v);
            for (const auto& [key, value] : logical.J()) {
                Var other = key.first == v ? key.second : key.second == v ? key.first : -1;
                if (other < 0) continue;
                auto it = decided.find(other);
                if (it != decided.end()) field += value * it->second;
            }
            if (pick < 0 || std::abs(field) > std::abs(pick_field)) {
                pick = v;
                pick_field = field;
            }
        }
        if (pick_field == 0.0) {
            // all remaining fields are zero at selection time: majority vote
            Var v = broken.front();
            int sum = 0;
            for (int q : embedding.chains.at(v)) sum += physical.at(q);
            decided[v] = sum >= 0 ? 1 : -1;
            broken.erase(broken.begin());
            continue;
        }
        decided[pick] = pick_field > 0 ? -1 : 1;   // oppose the field
        broken.erase(std::find(broken.begin(), broken.end(), pick));
    }
    return decided;
}

IspvarOutcome spvar_logical(const IsingProblem& logical, const Embedding& embedding,
                            const HardwareGraph& hardware, const SamplerConfig& sampler,
                            const IspvarParams& params, const EmbeddedParams& embedded) {
    embedded.validate();
    validate_embedding(embedding, logical, hardware);

    SampleFn draw = [&](const IsingProblem& current, const SamplerConfig& config, int gauges) {
        auto [scaled, factor] = scale_to_range(current, 0.5);
        Embedding sub = embedding.restricted_to(current.variables());
        IsingProblem physical = embed_problem(scaled, sub, hardware, embedded);
        SampleSet raw = sample_multigauge(physical, config, gauges);
        SampleSet out;
        out.seed = raw.seed;
        out.reads = raw.reads;
        out.num_gauges = raw.num_gauges;
        for (const auto& solution : raw.solutions) {
            SpinConfiguration config_logical = unembed_energy_min(solution.spins, sub, current);
            out.solutions.push_back({config_logical, energy(current, config_logical)});
        }
        out.sort_by_energy();
        return out;
    };
    return ispvar(logical, sampler, params, draw);
}

EmbeddedOutcome spvar_physical(const IsingProblem& logical, const Embedding& embedding,
                               const HardwareGraph& hardware, const SamplerConfig& sampler,
                               const IspvarParams& params, const EmbeddedParams& embedded) {
    params.validate();
    embedded.validate();
    using clock = std::chrono::steady_clock;

    auto [scaled, factor] = scale_to_range(logical, 0.5);
    IsingProblem physical = embed_problem(scaled, embedding, hardware, embedded);

    EmbeddedOutcome outcome;
    IsingProblem current = physical;

    auto chain_of = [&](Var v) -> const std::vector<int>& { return embedding.chains.at(v); };
    auto logical_fixed = [&](Var v) { return outcome.logical_assignment.contains(v); };

    for (int step = 1; step <= params.num_steps; ++step) {
        if (current.num_variables() == 0) break;
        auto start = clock::now();
        StepReport report;
        report.step = step;

        SamplerConfig config = sampler;
        config.reads = params.sample_size;
        if (step > 1) config.seed = sampler.seed + 0x9e3779b97f4a7c15ULL * (step - 1);
        SampleSet samples = sample_multigauge(current, config, params.num_gauges);
        SampleSet elite = elite_trim(samples, params.elite_thresholds[step - 1]);
        std::map<Var, double> means = variable_means(elite);

        double fixing = params.fixing_thresholds[step - 1];
        std::map<int, int> persistent;   // rule (a)
        std::map<int, int> relaxed;      // rule (c) candidates
        for (const auto& [q, mean] : means) {
            int sign = mean > 0 ? 1 : -1;
            if (std::abs(mean) >= fixing)
                persistent[q] = sign;
            else if (std::abs(mean) >= embedded.chain_fixing_threshold)
                relaxed[q] = sign;
        }

        FixAssignment physical_fixes;
        for (const auto& [q, sign] : persistent) physical_fixes.set(q, sign, FixSource::Persistence);

        for (Var v : logical.variables()) {
            if (logical_fixed(v)) continue;
            const auto& chain = chain_of(v);
            std::size_t len = chain.size();

            // tallies over previously fixed vertices plus this step's candidates
            std::size_t plus = 0, minus = 0, undecided_count = 0;
            std::vector<int> undecided;
            bool relaxed_used = false;
            for (int q : chain) {
                int value = 0;
                if (outcome.physical_assignment.contains(q))
                    value = outcome.physical_assignment.spin(q);
                else if (persistent.count(q))
                    value = persistent.at(q);
                else if (embedded.relaxed_counts_toward_majority && relaxed.count(q))
                    value = relaxed.at(q);
                if (value > 0)
                    ++plus;
                else if (value < 0)
                    ++minus;
                else {
                    ++undecided_count;
                    undecided.push_back(q);
                }
            }

            // rule (b): majority fraction of the chain agrees
            double fraction = static_cast<double>(std::max(plus, minus)) / len;
            if (undecided_count > 0 && fraction > embedded.majority_length_threshold) {
                int value = plus >= minus ? 1 : -1;
                for (int q : undecided)
                    if (!physical_fixes.contains(q)) physical_fixes.set(q, value, FixSource::ChainMajority);
                continue;
            }

            // rule (c): relaxed candidates only when they complete the chain
            if (undecided_count > 0 && static_cast<int>(len) > embedded.absolute_min_length) {
                bool completes = true;
                for (int q : undecided) completes = completes && relaxed.count(q) > 0;
                if (completes) {
                    for (int q : undecided)
                        if (!physical_fixes.contains(q)) {
                            physical_fixes.set(q, relaxed.at(q), FixSource::ChainRelaxed);
                            relaxed_used = true;
                        }
                }
            }
            (void)relaxed_used;
        }

        // keep only fixes for vertices still free
        FixAssignment applicable;
        for (const auto& [q, s] : physical_fixes.spins())
            if (current.has_variable(q)) applicable.set(q, s, physical_fixes.source(q));
        current = fix_variables(current, applicable);
        outcome.physical_assignment.merge(applicable);

        std::size_t logical_before = outcome.logical_assignment.size();
        auto complete_chains = [&]() {
            for (Var v : logical.variables()) {
                if (logical_fixed(v)) continue;
                const auto& chain = chain_of(v);
                bool complete = true;
                int sum = 0;
                FixSource source = FixSource::Persistence;
                for (int q : chain) {
                    if (!outcome.physical_assignment.contains(q)) {
                        complete = false;
                        break;
                    }
                    sum += outcome.physical_assignment.spin(q);
                    FixSource qs = outcome.physical_assignment.source(q);
                    if (qs == FixSource::ChainMajority || qs == FixSource::ChainRelaxed)
                        source = qs;
                }
                if (complete)
                    outcome.logical_assignment.set(v, sum >= 0 ? 1 : -1, source);
            }
        };
        complete_chains();
        report.fixed_method = outcome.logical_assignment.size() - logical_before;

        if (params.enable_preprocess && current.num_variables() > 0) {
            PersistencyResult pre = roof_duality_fix(current);
            FixAssignment fixes;
            for (const auto& [q, s] : pre.fixed) fixes.set(q, s, FixSource::Preprocess);
            if (!fixes.empty()) {
                current = fix_variables(current, fixes);
                outcome.physical_assignment.merge(fixes);
            }
            std::size_t before = outcome.logical_assignment.size();
            complete_chains();
            report.fixed_preprocess = outcome.logical_assignment.size() - before;
        }

        std::size_t remaining = 0;
        for (Var v : logical.variables())
            if (!logical_fixed(v)) ++remaining;
        report.remaining = remaining;
        report.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
        outcome.reports.push_back(report);
    }

    outcome.reduced_physical = current;
    outcome.reduced_logical = fix_variables(logical, outcome.logical_assignment);
    return outcome;
}

nlohmann::json embedding_to_json(const Embedding& embedding) {
    nlohmann::json chains = nlohmann::json::object();
    for (const auto& [v, chain] : embedding.chains) chains[std::to_string(v)] = chain;
    return {{"chains", chains}};
}

Embedding embedding_from_json(const nlohmann::json& j) {
    Embedding out;
    for (const auto& [key, value] : j.at("chains").items())
        out.chains[std::stoi(key)] = value.get<std::vector<int>>();
    return out;
}

nlohmann::json hardware_to_json(const HardwareGraph& graph) {
    if (graph.chimera_t > 0) {
        return {{"m", graph.chimera_m},
                {"n", graph.chimera_n},
                {"t", graph.chimera_t},
                {"dead", graph.dead}};
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges) edges.push_back(nlohmann::json::array({a, b}));
    return {{"vertices", graph.vertices}, {"edges", edges}};
}

HardwareGraph hardware_from_json(const nlohmann::json& j) {
    if (j.contains("m")) {
        HardwareGraph base = chimera_graph(j.at("m").get<int>(), j.at("n").get<int>(),
                                           j.at("t").get<int>());
        std::vector<int> dead = j.value("dead", std::vector<int>{});
        if (dead.empty()) return base;
        std::set<int> gone(dead.begin(), dead.end());
        HardwareGraph out;
        out.chimera_m = base.chimera_m;
        out.chimera_n = base.chimera_n;
        out.chimera_t = base.chimera_t;
        out.dead = dead;
        std::sort(out.dead.begin(), out.dead.end());
        for (int v : base.vertices)
            if (!gone.count(v)) out.vertices.push_back(v);
        for (const auto& [a, b] : base.edges)
            if (!gone.count(a) && !gone.count(b)) out.edges.insert({a, b});
        return out;
    }
    HardwareGraph out;
    out.vertices = j.at("vertices").get<std::vector<int>>();
    std::sort(out.vertices.begin(), out.vertices.end());
    for (const auto& edge : j.at("edges"))
        out.edges.insert(make_pair_key(edge.at(0).get<int>(), edge.at(1).get<int>()));
    return out;
}

}  // namespace spvar
