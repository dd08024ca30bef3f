#include "spvar/generators.hpp"

#include <algorithm>

#include "spvar/rng.hpp"

namespace spvar {

std::vector<int> CoefficientSet::drawable() const {
    if (!zero_excluded) return values;
    std::vector<int> out;
    for (int v : values)
        if (v != 0) out.push_back(v);
    return out;
}

void CoefficientSet::validate() const {
    if (values.empty()) throw std::invalid_argument("coefficient set is empty");
    if (drawable().empty())
        throw std::invalid_argument("coefficient set is empty after zero exclusion");
}

CoefficientSet uniform_set(int n) {
    if (n < 0) throw std::invalid_argument("uniform set range must be >= 0");
    CoefficientSet out;
    out.name = "U_" + std::to_string(n);
    for (int v = -n; v <= n; ++v) out.values.push_back(v);
    return out;
}

CoefficientSet named_set(const std::string& name) {
    if (name == "U_2" || name == "U2") return uniform_set(2);
    if (name == "U_5" || name == "U5") return uniform_set(5);
    if (name == "U_10" || name == "U10") return uniform_set(10);
    if (name == "U_100" || name == "U100") return uniform_set(100);
    if (name == "S_28" || name == "S28")
        return explicit_set({-28, -19, -13, -8, 8, 13, 19, 28});
    if (name == "{0}" || name == "0" || name == "zero") return explicit_set({0});
    throw std::invalid_argument("unknown coefficient set: " + name);
}

CoefficientSet explicit_set(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    CoefficientSet out;
    out.values = std::move(values);
    out.name = "{";
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.name += (i ? "," : "") + std::to_string(out.values[i]);
    out.name += "}";
    return out;
}

void ProblemSetSpec::validate() const {
    if (count < 1) throw std::invalid_argument("instance count must be >= 1");
    CoefficientSet c = couplers;
    c.zero_excluded = true;
    c.validate();
    biases.validate();
}

IsingProblem random_ising(const HardwareGraph& graph, const CoefficientSet& couplers,
                          const CoefficientSet& biases, std::uint64_t seed) {
    CoefficientSet coupler_set = couplers;
    coupler_set.zero_excluded = true;   // zero never drawn for couplers
    coupler_set.validate();
    biases.validate();
    std::vector<int> cvals = coupler_set.drawable();
    std::vector<int> bvals = biases.drawable();

    Rng rng(seed);
    std::map<Var, double> h;
    for (int v : graph.vertices) h[v] = bvals[rng.below(bvals.size())];
    std::map<VarPair, double> j;
    for (const auto& [a, b] : graph.edges) j[{a, b}] = cvals[rng.below(cvals.size())];
    return IsingProblem(graph.vertices, std::move(h), std::move(j));
}

IsingProblem instance(const ProblemSetSpec& spec, int index) {
    spec.validate();
    if (index < 0 || index >= spec.count) throw std::invalid_argument("instance index out of range");
    return random_ising(spec.graph, spec.couplers, spec.biases, spec.base_seed + index);
}

std::vector<ProblemSetSpec> biasrange_series(const HardwareGraph& graph, int n_max, int count,
                                             std::uint64_t base_seed) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    std::vector<ProblemSetSpec> out;
    for (int n = 1; n <= n_max; ++n) {
        ProblemSetSpec spec;
        spec.graph = graph;
        spec.couplers = uniform_set(5);
        spec.biases = uniform_set(n);
        spec.count = count;
        spec.base_seed = base_seed;
        out.push_back(std::move(spec));
    }
    return out;
}

}  // namespace spvar
