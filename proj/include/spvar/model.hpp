#ifndef SPVAR_MODEL_HPP
#define SPVAR_MODEL_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spvar {

using Var = int;
using VarPair = std::pair<Var, Var>;

inline VarPair make_pair_key(Var i, Var j) {
    if (i == j) throw std::invalid_argument("coupler endpoints must differ");
    return i < j ? VarPair{i, j} : VarPair{j, i};
}

/// Ising model: offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j, s in {-1,+1}.
/// Pair keys are stored with i < j; zero couplers are dropped at construction,
/// zero biases are kept.
class IsingProblem {
public:
    IsingProblem() = default;
    IsingProblem(std::vector<Var> variables, std::map<Var, double> h,
                 std::map<VarPair, double> j, double offset = 0.0);

    const std::vector<Var>& variables() const { return variables_; }
    const std::map<Var, double>& h() const { return h_; }
    const std::map<VarPair, double>& J() const { return j_; }
    double offset() const { return offset_; }
    std::size_t num_variables() const { return variables_.size(); }
    bool has_variable(Var v) const;

    double bias(Var v) const;
    double coupler(Var i, Var j) const;   // 0 if absent
    bool all_biases_zero() const;
    double max_abs_coefficient() const;   // over |h| and |J|; 0 for empty

    bool operator==(const IsingProblem&) const = default;

private:
    std::vector<Var> variables_;          // sorted, unique
    std::map<Var, double> h_;             // one entry per variable
    std::map<VarPair, double> j_;         // canonical orientation, nonzero
    double offset_ = 0.0;
};

/// QUBO: offset + sum Q_ii x_i + sum_{i<j} Q_ij x_i x_j, x in {0,1}.
struct QuboProblem {
    std::vector<Var> variables;
    std::map<Var, double> linear;         // diagonal
    std::map<VarPair, double> quadratic;  // canonical orientation
    double offset = 0.0;
};

using SpinConfiguration = std::map<Var, int>;

enum class FixSource {
    Persistence,
    Correlation,
    Preprocess,
    ChainMajority,
    ChainRelaxed,
    Z2Prefix,
};

std::string to_string(FixSource s);
FixSource fix_source_from_string(const std::string& s);

/// Accumulated variable->spin map with per-variable provenance.
class FixAssignment {
public:
    void set(Var v, int spin, FixSource source);
    void merge(const FixAssignment& other);   // throws on duplicate variable
    bool contains(Var v) const { return spins_.find(v) != spins_.end(); }
    int spin(Var v) const;
    FixSource source(Var v) const;
    std::size_t size() const { return spins_.size(); }
    bool empty() const { return spins_.empty(); }
    const std::map<Var, int>& spins() const { return spins_; }
    const std::map<Var, FixSource>& sources() const { return sources_; }

private:
    std::map<Var, int> spins_;
    std::map<Var, FixSource> sources_;
};

struct Solution {
    SpinConfiguration spins;
    double energy = 0.0;
};

/// Energy-sorted sample. Ties keep insertion order.
struct SampleSet {
    std::vector<Solution> solutions;
    std::uint64_t seed = 0;
    int reads = 0;
    int num_gauges = 1;

    bool empty() const { return solutions.empty(); }
    std::size_t size() const { return solutions.size(); }
    const Solution& best() const;
    void sort_by_energy();   // stable
};

// --- core operations ---

double energy(const IsingProblem& problem, const SpinConfiguration& config);

/// Removes the assigned variables, folding couplers to fixed neighbours into
/// biases and fully fixed terms into the offset. For every completion c of the
/// free variables, energy(reduced, c) == energy(original, c + assignment).
IsingProblem fix_variables(const IsingProblem& problem, const FixAssignment& assignment);

QuboProblem to_qubo(const IsingProblem& problem);          // s = 2x - 1
IsingProblem from_qubo(const QuboProblem& qubo);

IsingProblem apply_gauge(const IsingProblem& problem, const std::map<Var, int>& gauge);
SpinConfiguration ungauge(const SpinConfiguration& config, const std::map<Var, int>& gauge);

/// Partition into connected components; the original offset rides on the
/// first component. Components are ordered by their smallest variable id.
std::vector<IsingProblem> connected_components(const IsingProblem& problem);

/// Scales h and J so that max |coefficient| == bound. All-zero problems are
/// returned unchanged with factor 1. Returns (scaled problem, divisor applied).
std::pair<IsingProblem, double> scale_to_range(const IsingProblem& problem, double bound);

}  // namespace spvar

#endif
