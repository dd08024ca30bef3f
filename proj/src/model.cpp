#include "spvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>

namespace spvar {

IsingProblem::IsingProblem(std::vector<Var> variables, std::map<Var, double> h,
                           std::map<VarPair, double> j, double offset)
    : offset_(offset) {
    std::sort(variables.begin(), variables.end());
    variables.erase(std::unique(variables.begin(), variables.end()), variables.end());
    variables_ = std::move(variables);

    auto known = [&](Var v) {
        return std::binary_search(variables_.begin(), variables_.end(), v);
    };

    for (const auto& [v, bias] : h) {
        if (!known(v)) throw std::invalid_argument("bias references unknown variable " + std::to_string(v));
    }
    h_ = std::move(h);
    for (Var v : variables_) h_.try_emplace(v, 0.0);

    for (const auto& [key, value] : j) {
        if (value == 0.0) continue;
        auto canonical = make_pair_key(key.first, key.second);
        if (!known(canonical.first) || !known(canonical.second))
            throw std::invalid_argument("coupler references unknown variable");
        j_[canonical] += value;
        if (j_[canonical] == 0.0) j_.erase(canonical);
    }
}

bool IsingProblem::has_variable(Var v) const {
    return std::binary_search(variables_.begin(), variables_.end(), v);
}

double IsingProblem::bias(Var v) const {
    auto it = h_.find(v);
    if (it == h_.end()) throw std::invalid_argument("unknown variable " + std::to_string(v));
    return it->second;
}

double IsingProblem::coupler(Var i, Var j) const {
    auto it = j_.find(make_pair_key(i, j));
    return it == j_.end() ? 0.0 : it->second;
}

bool IsingProblem::all_biases_zero() const {
    for (const auto& [v, bias] : h_)
        if (bias != 0.0) return false;
    return true;
}

double IsingProblem::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [v, bias] : h_) m = std::max(m, std::abs(bias));
    for (const auto& [key, value] : j_) m = std::max(m, std::abs(value));
    return m;
}

std::string to_string(FixSource s) {
    switch (s) {
        case FixSource::Persistence: return "persistence";
        case FixSource::Correlation: return "correlation";
        case FixSource::Preprocess: return "preprocess";
        case FixSource::ChainMajority: return "chain-majority";
        case FixSource::ChainRelaxed: return "chain-relaxed";
        case FixSource::Z2Prefix: return "z2-prefix";
    }
    return "?";
}

FixSource fix_source_from_string(const std::string& s) {
    if (s == "persistence") return FixSource::Persistence;
    if (s == "correlation") return FixSource::Correlation;
    if (s == "preprocess") return FixSource::Preprocess;
    if (s == "chain-majority") return FixSource::ChainMajority;
    if (s == "chain-relaxed") return FixSource::ChainRelaxed;
    if (s == "z2-prefix") return FixSource::Z2Prefix;
    throw std::invalid_argument("unknown fix source: " + s);
}

void FixAssignment::set(Var v, int spin, FixSource source) {
    if (spin != 1 && spin != -1) throw std::invalid_argument("spin must be +-1");
    if (contains(v)) throw std::invalid_argument("variable fixed twice: " + std::to_string(v));
    spins_[v] = spin;
    sources_[v] = source;
}

void FixAssignment::merge(const FixAssignment& other) {
    for (const auto& [v, spin] : other.spins_) set(v, spin, other.sources_.at(v));
}

int FixAssignment::spin(Var v) const {
    auto it = spins_.find(v);
    if (it == spins_.end()) throw std::invalid_argument("variable not fixed: " + std::to_string(v));
    return it->second;
}

FixSource FixAssignment::source(Var v) const { return sources_.at(v); }

const Solution& SampleSet::best() const {
    if (solutions.empty()) throw std::runtime_error("empty sample set");
    return solutions.front();
}

void SampleSet::sort_by_energy() {
    std::stable_sort(solutions.begin(), solutions.end(),
                     [](const Solution& a, const Solution& b) { return a.energy < b.energy; });
}

double energy(const IsingProblem& problem, const SpinConfiguration& config) {
    double e = problem.offset();
    for (const auto& [v, bias] : problem.h()) {
        auto it = config.find(v);
        if (it == config.end())
            throw std::invalid_argument("configuration missing variable " + std::to_string(v));
        e += bias * it->second;
    }
    for (const auto& [key, value] : problem.J())
        e += value * config.at(key.first) * config.at(key.second);
    return e;
}

IsingProblem fix_variables(const IsingProblem& problem, const FixAssignment& assignment) {
    for (const auto& [v, spin] : assignment.spins())
        if (!problem.has_variable(v))
            throw std::invalid_argument("assignment references unknown variable " + std::to_string(v));

    std::vector<Var> free_vars;
    std::map<Var, double> h;
    double offset = problem.offset();
    for (const auto& [v, bias] : problem.h()) {
        if (assignment.contains(v)) {
            offset += bias * assignment.spin(v);
        } else {
            free_vars.push_back(v);
            h[v] = bias;
        }
    }
    std::map<VarPair, double> j;
    for (const auto& [key, value] : problem.J()) {
        bool a_fixed = assignment.contains(key.first);
        bool b_fixed = assignment.contains(key.second);
        if (a_fixed && b_fixed) {
            offset += value * assignment.spin(key.first) * assignment.spin(key.second);
        } else if (a_fixed) {
            h[key.second] += value * assignment.spin(key.first);
        } else if (b_fixed) {
            h[key.first] += value * assignment.spin(key.second);
        } else {
            j[key] = value;
        }
    }
    return IsingProblem(std::move(free_vars), std::move(h), std::move(j), offset);
}

QuboProblem to_qubo(const IsingProblem& problem) {
    // s = 2x - 1:  h s -> 2h x - h;  J s_i s_j -> 4J x_i x_j - 2J x_i - 2J x_j + J
    QuboProblem q;
    q.variables = problem.variables();
    q.offset = problem.offset();
    for (const auto& [v, bias] : problem.h()) {
        q.linear[v] += 2.0 * bias;
        q.offset -= bias;
    }
    for (const auto& [key, value] : problem.J()) {
        q.quadratic[key] += 4.0 * value;
        q.linear[key.first] -= 2.0 * value;
        q.linear[key.second] -= 2.0 * value;
        q.offset += value;
    }
    return q;
}

IsingProblem from_qubo(const QuboProblem& qubo) {
    // x = (s + 1)/2
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    double offset = qubo.offset;
    for (Var v : qubo.variables) h[v] = 0.0;
    for (const auto& [v, value] : qubo.linear) {
        h[v] += value / 2.0;
        offset += value / 2.0;
    }
    for (const auto& [key, value] : qubo.quadratic) {
        j[key] += value / 4.0;
        h[key.first] += value / 4.0;
        h[key.second] += value / 4.0;
        offset += value / 4.0;
    }
    return IsingProblem(qubo.variables, std::move(h), std::move(j), offset);
}

IsingProblem apply_gauge(const IsingProblem& problem, const std::map<Var, int>& gauge) {
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    for (const auto& [v, bias] : problem.h()) {
        auto it = gauge.find(v);
        if (it == gauge.end()) throw std::invalid_argument("gauge missing variable " + std::to_string(v));
        h[v] = bias * it->second;
    }
    for (const auto& [key, value] : problem.J())
        j[key] = value * gauge.at(key.first) * gauge.at(key.second);
    return IsingProblem(problem.variables(), std::move(h), std::move(j), problem.offset());
}

SpinConfiguration ungauge(const SpinConfiguration& config, const std::map<Var, int>& gauge) {
    SpinConfiguration out;
    for (const auto& [v, spin] : config) {
        auto it = gauge.find(v);
        if (it == gauge.end()) throw std::invalid_argument("gauge missing variable " + std::to_string(v));
        out[v] = spin * it->second;
    }
    return out;
}

std::vector<IsingProblem> connected_components(const IsingProblem& problem) {
    const auto& vars = problem.variables();
    if (vars.empty()) return {};

    std::map<Var, Var> parent;
    for (Var v : vars) parent[v] = v;
    std::function<Var(Var)> find = [&](Var v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& [key, value] : problem.J()) {
        Var a = find(key.first), b = find(key.second);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

    std::map<Var, std::vector<Var>> groups;   // root -> members, roots ascending
    for (Var v : vars) groups[find(v)].push_back(v);

    std::vector<IsingProblem> out;
    bool first = true;
    for (const auto& [root, members] : groups) {
        std::map<Var, double> h;
        std::map<VarPair, double> j;
        for (Var v : members) h[v] = problem.bias(v);
        for (const auto& [key, value] : problem.J())
            if (find(key.first) == root) j[key] = value;
        out.emplace_back(members, std::move(h), std::move(j), first ? problem.offset() : 0.0);
        first = false;
    }
    return out;
}

std::pair<IsingProblem, double> scale_to_range(const IsingProblem& problem, double bound) {
    if (bound <= 0.0) throw std::invalid_argument("bound must be positive");
    double m = problem.max_abs_coefficient();
    if (m == 0.0) return {problem, 1.0};
    double factor = m / bound;
    std::map<Var, double> h;
    std::map<VarPair, double> j;
    for (const auto& [v, bias] : problem.h()) h[v] = bias / factor;
    for (const auto& [key, value] : problem.J()) j[key] = value / factor;
    return {IsingProblem(problem.variables(), std::move(h), std::move(j), problem.offset() / factor),
            factor};
}

}  // namespace spvar
