#ifndef SPVAR_GENERATORS_HPP
#define SPVAR_GENERATORS_HPP

#include <string>
#include <vector>

#include "spvar/embedding.hpp"
#include "spvar/model.hpp"

namespace spvar {

/// Integer coefficient distribution: a uniform draw over an explicit value
/// list. zero_excluded removes 0 from the drawable values (couplers).
struct CoefficientSet {
    std::string name;            // "U_5", "S_28", "{0}", ...
    std::vector<int> values;     // sorted, unique
    bool zero_excluded = false;

    std::vector<int> drawable() const;   // values minus 0 when excluded
    void validate() const;
};

/// U_n: integers {-n..n}.
CoefficientSet uniform_set(int n);
/// Named sets: U_2, U_5, U_10, U_100, S_28, or "{0}" for zero biases.
CoefficientSet named_set(const std::string& name);
CoefficientSet explicit_set(std::vector<int> values);

struct ProblemSetSpec {
    HardwareGraph graph;
    CoefficientSet couplers;
    CoefficientSet biases;
    int count = 1;
    std::uint64_t base_seed = 0;   // instance i uses base_seed + i

    void validate() const;
};

/// Independent uniform draws: one coupler value per graph edge (zero never
/// drawn), one bias value per vertex (zero allowed).
IsingProblem random_ising(const HardwareGraph& graph, const CoefficientSet& couplers,
                          const CoefficientSet& biases, std::uint64_t seed);

IsingProblem instance(const ProblemSetSpec& spec, int index);

/// One spec per n in 1..n_max: biases {-n..n}, couplers U_5.
std::vector<ProblemSetSpec> biasrange_series(const HardwareGraph& graph, int n_max, int count,
                                             std::uint64_t base_seed);

}  // namespace spvar

#endif
