#include "spvar/spvar.hpp"

#include <cmath>

namespace spvar {

void SpvarParams::validate() const {
    if (sample_size < 1) throw std::invalid_argument("sample_size must be >= 1");
    if (fixing_threshold <= 0.0 || fixing_threshold > 1.0)
        throw std::invalid_argument("fixing_threshold must be in (0,1]");
    if (elite_threshold <= 0.0 || elite_threshold > 1.0)
        throw std::invalid_argument("elite_threshold must be in (0,1]");
    if (num_gauges < 1) throw std::invalid_argument("num_gauges must be >= 1");
}

SampleSet elite_trim(const SampleSet& samples, double elite_threshold) {
    if (samples.empty()) throw std::invalid_argument("cannot trim an empty sample set");
    auto keep = static_cast<std::size_t>(std::ceil(elite_threshold * samples.size()));
    keep = std::max<std::size_t>(1, std::min(keep, samples.size()));
    SampleSet out = samples;
    out.solutions.resize(keep);
    return out;
}

std::map<Var, double> variable_means(const SampleSet& samples) {
    if (samples.empty()) throw std::invalid_argument("cannot average an empty sample set");
    std::map<Var, double> sums;
    for (const auto& solution : samples.solutions)
        for (const auto& [v, s] : solution.spins) sums[v] += s;
    for (auto& [v, sum] : sums) sum /= static_cast<double>(samples.size());
    return sums;
}

SpvarOutcome spvar_from_sample(const IsingProblem& problem, const SampleSet& samples,
                               const SpvarParams& params) {
    params.validate();
    SampleSet elite = elite_trim(samples, params.elite_threshold);
    SpvarOutcome outcome;
    outcome.elite_size = elite.size();
    outcome.means = variable_means(elite);
    for (const auto& [v, mean] : outcome.means) {
        if (std::abs(mean) >= params.fixing_threshold)
            outcome.assignment.set(v, mean > 0 ? 1 : -1, FixSource::Persistence);
    }
    outcome.reduced = fix_variables(problem, outcome.assignment);
    return outcome;
}

SpvarOutcome spvar(const IsingProblem& problem, const SamplerConfig& sampler,
                   const SpvarParams& params) {
    params.validate();
    SamplerConfig config = sampler;
    config.reads = params.sample_size;
    SampleSet samples = sample_multigauge(problem, config, params.num_gauges);
    return spvar_from_sample(problem, samples, params);
}

}  // namespace spvar
