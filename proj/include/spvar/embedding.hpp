#ifndef SPVAR_EMBEDDING_HPP
#define SPVAR_EMBEDDING_HPP

#include <set>

#include <json.hpp>

#include "spvar/ispvar.hpp"
#include "spvar/model.hpp"

namespace spvar {

struct HardwareGraph {
    std::vector<int> vertices;                 // sorted live vertices
    std::set<std::pair<int, int>> edges;       // canonical orientation, live only
    std::vector<int> dead;                     // removed vertices, sorted
    int chimera_m = 0, chimera_n = 0, chimera_t = 0;   // 0: not a Chimera lattice

    bool has_edge(int a, int b) const;
    bool has_vertex(int v) const;
};

/// Map logical variable -> ordered chain of hardware vertices.
struct Embedding {
    std::map<Var, std::vector<int>> chains;

    std::vector<Var> logical_variables() const;
    Embedding restricted_to(const std::vector<Var>& vars) const;
};

struct EmbeddedParams {
    double chain_strength = 1.0;
    double majority_length_threshold = 0.51;   // (0.5, 1]
    double chain_fixing_threshold = 0.95;      // relaxed threshold, rule (c)
    int absolute_min_length = 3;
    // alternative reading of rule (c): relaxed-threshold candidates also count
    // toward the majority fraction of rule (b)
    bool relaxed_counts_toward_majority = false;

    void validate() const;
};

/// Chimera C(m,n,t): m x n grid of K_{t,t} cells. Vertex ((r*n+c)*2+u)*t+k;
/// side u=0 couples vertically, u=1 horizontally. round(dead_fraction * size)
/// vertices are removed uniformly at random.
HardwareGraph chimera_graph(int m, int n, int t, double dead_fraction = 0.0,
                            std::uint64_t seed = 0);

/// Deterministic triangle-layout embedding of K_k into a full Chimera graph.
/// Chains have length ceil(k/t) + 1 (length 1 for K_1).
Embedding clique_embedding(int k, const HardwareGraph& hardware);

/// Identity embedding: each variable maps to the equally named hardware vertex.
Embedding identity_embedding(const IsingProblem& problem);

/// Checks chains are pairwise disjoint, chain subgraphs connected, and every
/// logical coupler has at least one inter-chain hardware edge. Throws on
/// violation.
void validate_embedding(const Embedding& embedding, const IsingProblem& logical,
                        const HardwareGraph& hardware);

/// Splits h_i equally over the chain, J_ij equally over the available
/// inter-chain edges; every intra-chain edge gets -chain_strength. The caller
/// pre-scales the logical problem (the benchmarks use range 0.5).
IsingProblem embed_problem(const IsingProblem& logical, const Embedding& embedding,
                           const HardwareGraph& hardware, const EmbeddedParams& params);

/// Per-chain majority vote; exact ties break to +1.
SpinConfiguration unembed_majority(const SpinConfiguration& physical, const Embedding& embedding);

/// Unbroken chains decide immediately; broken chains are repaired greedily by
/// strongest effective field (zero-field selections fall back to majority).
SpinConfiguration unembed_energy_min(const SpinConfiguration& physical, const Embedding& embedding,
                                     const IsingProblem& logical);

/// Number of intra-chain hardware edges over all chains (for the unbroken
/// energy identity).
std::size_t intra_chain_edge_count(const Embedding& embedding, const HardwareGraph& hardware);

/// Logical method: each step embeds the current reduction, samples the
/// physical problem, unembeds every solution, and applies the standard
/// iterative step in logical space.
IspvarOutcome spvar_logical(const IsingProblem& logical, const Embedding& embedding,
                            const HardwareGraph& hardware, const SamplerConfig& sampler,
                            const IspvarParams& params, const EmbeddedParams& embedded);

struct EmbeddedOutcome {
    IsingProblem reduced_logical;
    FixAssignment logical_assignment;
    IsingProblem reduced_physical;
    FixAssignment physical_assignment;
    std::vector<StepReport> reports;
};

/// Physical method: persistence statistics on physical vertices, with the
/// chain-majority and relaxed chain-completion rules; fully fixed chains fix
/// their logical variable.
EmbeddedOutcome spvar_physical(const IsingProblem& logical, const Embedding& embedding,
                               const HardwareGraph& hardware, const SamplerConfig& sampler,
                               const IspvarParams& params, const EmbeddedParams& embedded);

// JSON: {"chains":{"<logical var>":[vertex,...]}}
nlohmann::json embedding_to_json(const Embedding& embedding);
Embedding embedding_from_json(const nlohmann::json& j);

// JSON: {"m":int,"n":int,"t":int,"dead":[vertex,...]} or {"vertices":[...],"edges":[[a,b],...]}
nlohmann::json hardware_to_json(const HardwareGraph& graph);
HardwareGraph hardware_from_json(const nlohmann::json& j);

}  // namespace spvar

#endif
