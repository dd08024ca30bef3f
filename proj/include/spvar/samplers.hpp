#ifndef SPVAR_SAMPLERS_HPP
#define SPVAR_SAMPLERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spvar/model.hpp"

namespace spvar {

enum class SamplerKind { SimulatedAnnealing, Tabu, Exact, ExternalFile };

SamplerKind sampler_kind_from_string(const std::string& s);
std::string to_string(SamplerKind kind);

/// Deterministic under fixed seed: identical (problem, config) -> identical
/// SampleSet. Per-read streams are derived from (seed, read index).
struct SamplerConfig {
    SamplerKind kind = SamplerKind::SimulatedAnnealing;
    int reads = 100;
    std::uint64_t seed = 0;

    // simulated annealing: geometric beta schedule, rescaled by the problem's
    // max |coefficient|
    int sweeps = 1000;
    double beta_initial = 0.1;
    double beta_final = 5.0;

    // tabu: one solution per restart (restarts == reads)
    int tabu_tenure = 10;
    int tabu_move_budget_per_var = 20;

    // exact enumeration
    int exact_cap = 26;
    int exact_spectrum_limit = 0;   // 0: optima only; >0: lowest states up to limit

    std::string external_path;      // kind == ExternalFile

    void validate() const;
};

SampleSet sample(const IsingProblem& problem, const SamplerConfig& config);

SampleSet sample_sa(const IsingProblem& problem, const SamplerConfig& config);
SampleSet sample_tabu(const IsingProblem& problem, const SamplerConfig& config);

/// Full enumeration. Returns every configuration attaining the minimum (or the
/// lowest `exact_spectrum_limit` states when requested). Refuses above
/// exact_cap variables.
SampleSet sample_exact(const IsingProblem& problem, const SamplerConfig& config = {.kind = SamplerKind::Exact});

/// Draws reads/num_gauges solutions under each random gauge (gauge 0 is the
/// identity), un-gauges and merges. The last gauge absorbs the remainder.
SampleSet sample_multigauge(const IsingProblem& problem, const SamplerConfig& config, int num_gauges);

/// Samples each connected component independently and composes solutions
/// rank-wise, so the composed best is the sum of component bests.
SampleSet solve_by_components(const IsingProblem& problem, const SamplerConfig& config);

/// Greedy single-spin-flip descent on every solution; energies never increase.
SampleSet postprocess_local_search(const IsingProblem& problem, const SampleSet& samples);

}  // namespace spvar

#endif
