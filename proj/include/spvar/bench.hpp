#ifndef SPVAR_BENCH_HPP
#define SPVAR_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spvar/generators.hpp"
#include "spvar/ispvar.hpp"
#include "spvar/model.hpp"
#include "spvar/samplers.hpp"
#include "spvar/spvar.hpp"

namespace spvar {

/// Reference oracle: exact enumeration per connected component when it fits
/// under the cap, multi-start tabu otherwise.
struct OracleConfig {
    int exact_cap = 20;
    int tabu_restarts = 1000;
    std::uint64_t seed = 0x5eed;
};

struct BestKnown {
    double energy = 0.0;
    SpinConfiguration witness;
    bool proven = false;   // every component solved exactly
};

BestKnown best_known(const IsingProblem& problem, const OracleConfig& oracle);

/// True iff fixing preserves the best known energy (the reduced problem's
/// offset already folds the fixed terms back in).
bool fixing_success(const IsingProblem& original, const FixAssignment& assignment,
                    const OracleConfig& oracle);

struct BenchConfig {
    SamplerConfig sampler;            // base sampler; per-run reads set below
    int baseline_reads = 3200;        // full budget, multi-gauge
    int baseline_gauges = 5;
    IspvarParams ispvar;              // per-step reads = ispvar.sample_size
    int final_reads = 640;            // component-wise solve of the reduction
    bool method_enabled = true;
    OracleConfig oracle;
    int threads = 1;
    std::uint64_t seed = 1;           // per-instance stream base

    int method_total_reads() const {
        return ispvar.num_steps * ispvar.sample_size + final_reads;
    }
    void validate() const;
};

struct InstanceResult {
    int index = 0;
    std::size_t num_variables = 0;
    double best_known_energy = 0.0;
    bool best_known_proven = false;

    double baseline_best = 0.0;
    std::size_t baseline_freq = 0;    // occurrences of the best-known energy value

    double method_best = 0.0;
    std::size_t method_freq = 0;
    std::size_t fixed_method = 0;     // persistence + correlations over all steps
    std::size_t fixed_preprocess = 0;
    bool fixing_ok = true;
    bool better_or_equal = true;      // method best <= baseline best

    double baseline_seconds = 0.0;
    double method_seconds = 0.0;
    std::string error;                // nonempty: instance failed, run continued
};

struct Aggregates {
    double success_rate = 0.0;        // % instances attaining the best known energy
    double mean_residual = 0.0;       // mean (found - best known)
    double mean_freq_on_success = 0.0;
    double better_rate = 0.0;         // method only
    double fix_rate = 0.0;            // method only
};

struct BenchReport {
    BenchConfig config;
    std::vector<InstanceResult> instances;
    Aggregates baseline;
    Aggregates method;
};

/// Recomputes both aggregate blocks from the per-instance rows.
void recompute_aggregates(BenchReport& report);

BenchReport run_benchmark(const std::vector<IsingProblem>& problems, const BenchConfig& config);

struct SweepGrid {
    std::vector<double> fixing_thresholds;   // columns
    std::vector<double> elite_thresholds;    // rows
    std::vector<std::vector<double>> mean_fixed;     // [row][col]
    std::vector<std::vector<double>> success_rate;   // empty unless requested
};

/// One sample per instance, re-evaluated for every (fixing, elite) cell.
SweepGrid sweep_thresholds(const std::vector<IsingProblem>& problems, const SamplerConfig& sampler,
                           const SpvarParams& params, std::vector<double> fixing_thresholds,
                           std::vector<double> elite_thresholds, bool with_success = false,
                           const OracleConfig& oracle = {});

struct AutotuneResult {
    double elite_threshold = 1.0;
    double fixed_fraction = 0.0;
    std::size_t elite_size = 0;
    bool in_band = false;   // false: band unreachable, closest candidate returned
};

/// Walks elite-threshold candidates downward from 1.0 on a single sample until
/// the fixed fraction enters [band_low, band_high]; never lets the elite set
/// shrink below 5 solutions.
AutotuneResult autotune_elite(const IsingProblem& problem, const SamplerConfig& sampler,
                              const SpvarParams& params, double band_low = 0.30,
                              double band_high = 0.40);

std::map<std::size_t, std::size_t> component_histogram(const std::vector<IsingProblem>& problems);

struct BiasRangeRow {
    int n = 0;
    double mean_fixed = 0.0;
};

std::vector<BiasRangeRow> fixedcount_vs_biasrange(const std::vector<ProblemSetSpec>& series,
                                                  const SamplerConfig& sampler,
                                                  const SpvarParams& params);

struct DistanceRow {
    int distance = 0;
    double mean_correlation = 0.0;
    std::size_t pair_count = 0;
};

/// Mean conditional spin expectation vs. unweighted shortest-path distance,
/// averaged over reference variables; requires all-zero biases.
std::vector<DistanceRow> correlation_vs_distance(const IsingProblem& problem,
                                                 const SampleSet& samples);

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json bench_report_to_json(const BenchReport& report);
std::string bench_report_to_csv(const BenchReport& report);
std::string sweep_to_csv(const SweepGrid& grid);
std::string histogram_to_csv(const std::map<std::size_t, std::size_t>& histogram);
std::string biasrange_to_csv(const std::vector<BiasRangeRow>& rows);
std::string distance_to_csv(const std::vector<DistanceRow>& rows);

}  // namespace spvar

#endif
