#ifndef SPVAR_SPVAR_HPP
#define SPVAR_SPVAR_HPP

#include "spvar/model.hpp"
#include "spvar/samplers.hpp"

namespace spvar {

struct SpvarParams {
    int sample_size = 2500;
    double fixing_threshold = 1.0;   // (0,1]; 1.0 preserves a sampled optimum
    double elite_threshold = 0.3;    // (0,1]; kept fraction of the sample
    int num_gauges = 5;

    void validate() const;
};

struct SpvarOutcome {
    IsingProblem reduced;
    FixAssignment assignment;
    std::size_t elite_size = 0;
    std::map<Var, double> means;
};

/// Keeps the lowest-energy ceil(elite_threshold * size) solutions, at least one.
SampleSet elite_trim(const SampleSet& samples, double elite_threshold);

/// Arithmetic mean spin per variable across all solutions.
std::map<Var, double> variable_means(const SampleSet& samples);

/// Single-pass sample-persistence reduction: multi-gauge sample, elite trim,
/// fix every variable with |mean| >= fixing_threshold to sign(mean).
/// The comparison is inclusive, so threshold 1.0 means "same value in every
/// elite solution".
SpvarOutcome spvar(const IsingProblem& problem, const SamplerConfig& sampler,
                   const SpvarParams& params);

/// The fixing stage alone, applied to an already-drawn sample.
SpvarOutcome spvar_from_sample(const IsingProblem& problem, const SampleSet& samples,
                               const SpvarParams& params);

}  // namespace spvar

#endif
