#ifndef SPVAR_PREPROCESS_HPP
#define SPVAR_PREPROCESS_HPP

#include <map>

#include "spvar/model.hpp"

namespace spvar {

/// Fixes carry weak persistency: there is at least one global optimum of the
/// input problem agreeing with every fixed value simultaneously.
struct PersistencyResult {
    enum class Method { Strong, Weak };

    std::map<Var, int> fixed;
    std::map<Var, bool> strong;        // per-variable strong-persistency flag
    Method method = Method::Weak;      // Strong iff every fix is strong
    std::size_t remaining_variables = 0;
    std::size_t remaining_couplers = 0;
};

/// Roof duality: QUBO posiform -> implication network -> max-flow/min-cut ->
/// persistent assignments from the residual graph. Capacities are exact
/// integers (float inputs are scaled and rounded at 2^-20 resolution).
PersistencyResult roof_duality_fix(const IsingProblem& problem);

/// Cheap independent oracle: fixes s_i = -sign(h_i) whenever |h_i| strictly
/// dominates the coupler sum of its neighbourhood. Subset of roof duality.
PersistencyResult field_dominance_fix(const IsingProblem& problem);

}  // namespace spvar

#endif
