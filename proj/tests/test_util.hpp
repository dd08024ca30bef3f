#ifndef SPVAR_TEST_UTIL_HPP
#define SPVAR_TEST_UTIL_HPP

#include <limits>
#include <vector>

#include "spvar/model.hpp"
#include "spvar/rng.hpp"

namespace spvar::test {

/// Dense random integer instance on n variables: every pair is a candidate
/// coupler kept with probability density; values drawn from the given lists
/// (couplers never zero).
inline IsingProblem random_instance(int n, const std::vector<int>& coupler_values,
                                    const std::vector<int>& bias_values, std::uint64_t seed,
                                    double density = 0.5) {
    Rng rng(seed);
    std::vector<Var> vars(n);
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    for (int i = 0; i < n; ++i) {
        vars[i] = i;
        h[i] = bias_values.empty() ? 0.0 : bias_values[rng.below(bias_values.size())];
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng.real() < density) {
                int value = coupler_values[rng.below(coupler_values.size())];
                if (value != 0) j[{a, b}] = value;
            }
    return IsingProblem(vars, std::move(h), std::move(j));
}

inline std::vector<int> range_values(int n, bool exclude_zero = false) {
    std::vector<int> out;
    for (int v = -n; v <= n; ++v)
        if (!exclude_zero || v != 0) out.push_back(v);
    return out;
}

/// Exhaustive minimum by direct enumeration — an oracle independent of the
/// library's samplers.
inline double brute_force_min(const IsingProblem& problem) {
    const auto& vars = problem.variables();
    std::size_t n = vars.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        SpinConfiguration config;
        for (std::size_t i = 0; i < n; ++i) config[vars[i]] = (mask >> i) & 1 ? 1 : -1;
        best = std::min(best, energy(problem, config));
    }
    return n == 0 ? problem.offset() : best;
}

/// All configurations attaining the exhaustive minimum.
inline std::vector<SpinConfiguration> brute_force_argmin(const IsingProblem& problem,
                                                         double tol = 1e-9) {
    double best = brute_force_min(problem);
    const auto& vars = problem.variables();
    std::size_t n = vars.size();
    std::vector<SpinConfiguration> out;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        SpinConfiguration config;
        for (std::size_t i = 0; i < n; ++i) config[vars[i]] = (mask >> i) & 1 ? 1 : -1;
        if (energy(problem, config) <= best + tol) out.push_back(std::move(config));
    }
    return out;
}

/// Full energy spectrum in enumeration order (a multiset once sorted).
inline std::vector<double> brute_force_spectrum(const IsingProblem& problem) {
    const auto& vars = problem.variables();
    std::size_t n = vars.size();
    std::vector<double> out;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        SpinConfiguration config;
        for (std::size_t i = 0; i < n; ++i) config[vars[i]] = (mask >> i) & 1 ? 1 : -1;
        out.push_back(energy(problem, config));
    }
    return out;
}

}  // namespace spvar::test

#endif
