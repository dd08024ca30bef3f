#ifndef SPVAR_ISPVAR_HPP
#define SPVAR_ISPVAR_HPP

#include <functional>
#include <optional>
#include <vector>

#include "spvar/model.hpp"
#include "spvar/preprocess.hpp"
#include "spvar/samplers.hpp"
#include "spvar/spvar.hpp"

namespace spvar {

enum class ZeroBiasMode { Auto, On, Off };

enum class StepOrder {
    SpvarFirst,        // SPVAR -> pre-processing -> correlations
    PreprocessFirst,   // pre-processing -> SPVAR -> correlations
};

struct IspvarParams {
    int num_steps = 4;
    std::vector<double> elite_thresholds = {0.3, 0.2, 0.15, 0.1};
    std::vector<double> fixing_thresholds = {1.0, 1.0, 1.0, 1.0};
    double correlation_threshold = 1.0;
    double correlation_elite_threshold = 0.4;
    bool enable_preprocess = true;
    bool enable_correlation_fix = true;
    ZeroBiasMode zero_bias_mode = ZeroBiasMode::Auto;
    StepOrder step_order = StepOrder::SpvarFirst;
    int sample_size = 2500;
    int num_gauges = 5;
    int min_correlation_sample = 5;   // skip correlation fixing below this

    void validate() const;
};

/// Signed Pearson-correlation graph over the elite sample. Edges keep only
/// |r| >= correlation_threshold; constant variables form singleton components.
struct CorrelationGraph {
    struct Edge {
        Var a, b;
        double weight;
    };
    std::vector<Var> nodes;
    std::vector<Edge> edges;
    std::map<Var, int> component;   // node -> component label

    std::vector<std::vector<Var>> components() const;
};

struct StepReport {
    int step = 0;                   // 0 is the pre-step
    std::size_t fixed_method = 0;   // SPVAR + correlations ("m")
    std::size_t fixed_preprocess = 0;  // classical pre-processing ("c")
    std::size_t remaining = 0;
    double elapsed_seconds = 0.0;
};

struct IspvarOutcome {
    IsingProblem reduced;
    FixAssignment assignment;
    std::vector<StepReport> reports;
};

CorrelationGraph correlation_components(const SampleSet& samples,
                                        double correlation_elite_threshold,
                                        double correlation_threshold);

/// Propagates pre-processor seed values along the signed edges of each
/// component; frustrated components (odd negative cycle) and propagation
/// conflicts skip the whole component. Returns only newly fixed variables.
FixAssignment fix_by_correlation(const CorrelationGraph& graph,
                                 const PersistencyResult& preproc_fixed,
                                 const IsingProblem& problem);

/// Globally negates every solution whose reference spin is -1. Valid only for
/// problems with all-zero biases.
SampleSet canonicalize_z2(const IsingProblem& problem, const SampleSet& samples, Var reference);

/// Picks the reference for Z2 canonicalization: highest degree, ties by lowest id.
Var z2_reference(const IsingProblem& problem);

/// h=0 pre-step: canonicalize, build the correlation graph, fix the largest
/// component via sign propagation (provenance z2-prefix). Falls back to fixing
/// only the reference when no component has size >= 2.
FixAssignment z2_prefix_component(const IsingProblem& problem, const SampleSet& samples,
                                  const IspvarParams& params);

struct OverlapDistribution {
    std::vector<double> bin_edges;    // size bins+1 over [-1, 1]
    std::vector<std::size_t> counts;  // size bins
    std::size_t pair_count = 0;
    double bimodality = 0.0;          // (skewness^2 + 1) / kurtosis
};

/// Histogram of pairwise overlaps q = (1/n) sum_i s_i s'_i. Diagnostic only.
OverlapDistribution overlap_distribution(const SampleSet& samples, int bins = 41,
                                         std::size_t max_pairs = 200000);

/// Hook for drawing a step's sample; the default is sample_multigauge. The
/// embedded logical method substitutes embed -> sample -> unembed here.
using SampleFn = std::function<SampleSet(const IsingProblem&, const SamplerConfig&, int)>;

IspvarOutcome ispvar(const IsingProblem& problem, const SamplerConfig& sampler,
                     const IspvarParams& params);
IspvarOutcome ispvar(const IsingProblem& problem, const SamplerConfig& sampler,
                     const IspvarParams& params, const SampleFn& draw);

}  // namespace spvar

#endif
