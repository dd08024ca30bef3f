#include "spvar/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

namespace spvar {

namespace {

using Capacity = long long;

/// Residual-graph max flow (Dinic). Every forward edge stores the index of its
/// mirror in the symmetric implication network so the flow can be symmetrized
/// afterwards.
struct FlowNetwork {
    struct Edge {
        int to;
        Capacity residual;
        int rev;      // index of reverse edge in adj[to]
        int mirror;   // global id of the mirror forward edge, -1 for reverse edges
    };

    std::vector<std::vector<Edge>> adj;
    std::vector<std::pair<int, int>> forward_edges;  // global id -> (node, index)

    explicit FlowNetwork(int n) : adj(n) {}

    int add_arc(int from, int to, Capacity capacity) {
        adj[from].push_back({to, capacity, static_cast<int>(adj[to].size()), -1});
        adj[to].push_back({from, 0, static_cast<int>(adj[from].size()) - 1, -1});
        forward_edges.emplace_back(from, static_cast<int>(adj[from].size()) - 1);
        return static_cast<int>(forward_edges.size()) - 1;
    }

    void pair_mirrors(int a, int b) {
        edge(a).mirror = b;
        edge(b).mirror = a;
    }

    Edge& edge(int id) {
        auto [node, index] = forward_edges[id];
        return adj[node][index];
    }

    Capacity max_flow(int s, int t) {
        Capacity total = 0;
        std::vector<int> level(adj.size());
        std::vector<int> it(adj.size());
        for (;;) {
            std::fill(level.begin(), level.end(), -1);
            std::queue<int> q;
            q.push(s);
            level[s] = 0;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (const Edge& e : adj[u]) {
                    if (e.residual > 0 && level[e.to] < 0) {
                        level[e.to] = level[u] + 1;
                        q.push(e.to);
                    }
                }
            }
            if (level[t] < 0) return total;
            std::fill(it.begin(), it.end(), 0);
            while (Capacity pushed = dfs(s, t, std::numeric_limits<Capacity>::max(), level, it))
                total += pushed;
        }
    }

    Capacity dfs(int u, int t, Capacity limit, std::vector<int>& level, std::vector<int>& it) {
        if (u == t) return limit;
        for (int& i = it[u]; i < static_cast<int>(adj[u].size()); ++i) {
            Edge& e = adj[u][i];
            if (e.residual <= 0 || level[e.to] != level[u] + 1) continue;
            Capacity pushed = dfs(e.to, t, std::min(limit, e.residual), level, it);
            if (pushed > 0) {
                e.residual -= pushed;
                adj[e.to][e.rev].residual += pushed;
                return pushed;
            }
        }
        return 0;
    }

    /// Averages each forward edge with its mirror; the mirror image of a max
    /// flow is a max flow, so the average is one too. Capacities are even.
    void symmetrize() {
        for (int id = 0; id < static_cast<int>(forward_edges.size()); ++id) {
            Edge& e = edge(id);
            if (e.mirror < id) continue;   // handle each pair once; skip unmirrored reverse
            Edge& m = edge(e.mirror);
            Capacity avg = (e.residual + m.residual) / 2;
            Capacity cap_e = e.residual + adj[e.to][e.rev].residual;
            Capacity cap_m = m.residual + adj[m.to][m.rev].residual;
            e.residual = avg;
            adj[e.to][e.rev].residual = cap_e - avg;
            m.residual = avg;
            adj[m.to][m.rev].residual = cap_m - avg;
        }
    }

    std::vector<bool> reachable(int s) const {
        std::vector<bool> seen(adj.size(), false);
        std::queue<int> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Edge& e : adj[u]) {
                if (e.residual > 0 && !seen[e.to]) {
                    seen[e.to] = true;
                    q.push(e.to);
                }
            }
        }
        return seen;
    }

    std::vector<bool> co_reachable(int t) const {
        std::vector<bool> seen(adj.size(), false);
        std::queue<int> q;
        q.push(t);
        seen[t] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            // follow residual arcs backwards: arc w->u has residual iff the
            // reverse entry stored at u carries positive residual on w's side
            for (const Edge& e : adj[u]) {
                const Edge& back = adj[e.to][e.rev];
                if (back.residual > 0 && !seen[e.to]) {
                    seen[e.to] = true;
                    q.push(e.to);
                }
            }
        }
        return seen;
    }
};

bool nearly_integral(double x) { return std::abs(x - std::llround(x)) < 1e-9; }

}  // namespace

PersistencyResult roof_duality_fix(const IsingProblem& problem) {
    PersistencyResult result;
    int n = static_cast<int>(problem.num_variables());
    if (n == 0) return result;

    // dense reindexing
    std::map<Var, int> index;
    for (int i = 0; i < n; ++i) index[problem.variables()[i]] = i;

    QuboProblem qubo = to_qubo(problem);
    bool integral = true;
    for (const auto& [v, value] : qubo.linear) integral = integral && nearly_integral(value);
    for (const auto& [key, value] : qubo.quadratic) integral = integral && nearly_integral(value);
    // x2 keeps mirror-averaged residuals integral
    double scale = integral ? 2.0 : 2.0 * (1 << 20);

    std::vector<Capacity> linear(n, 0);
    std::vector<std::tuple<int, int, Capacity>> quadratic;
    for (const auto& [v, value] : qubo.linear) linear[index.at(v)] = std::llround(value * scale);
    for (const auto& [key, value] : qubo.quadratic) {
        Capacity c = std::llround(value * scale);
        if (c != 0) quadratic.emplace_back(index.at(key.first), index.at(key.second), c);
    }

    // posiform: negative quadratic terms become a*x_i*!x_j and shift linear[i]
    std::vector<Capacity> residual_linear = linear;

    // implication network nodes: x_i -> i, !x_i -> i+n, source (true) -> 2n, sink -> 2n+1
    int source = 2 * n, sink = 2 * n + 1;
    auto negate = [&](int literal) { return literal < n ? literal + n : literal - n; };
    FlowNetwork net(2 * n + 2);

    // quadratic posiform term a*u*v: arcs u -> !v and v -> !u (mirrors)
    auto add_term = [&](int u, int v, Capacity a) {
        int e1 = net.add_arc(u, negate(v), a);
        int e2 = net.add_arc(v, negate(u), a);
        net.pair_mirrors(e1, e2);
    };

    for (const auto& [i, j, c] : quadratic) {
        if (c > 0) {
            add_term(i, j, c);
        } else {
            residual_linear[i] += c;
            add_term(i, negate(j), -c);   // -c * x_i * !x_j
        }
    }
    for (int i = 0; i < n; ++i) {
        if (residual_linear[i] > 0) {
            // a * x_i: source -> !x_i, x_i -> sink
            int e1 = net.add_arc(source, negate(i), residual_linear[i]);
            int e2 = net.add_arc(i, sink, residual_linear[i]);
            net.pair_mirrors(e1, e2);
        } else if (residual_linear[i] < 0) {
            // a * !x_i
            int e1 = net.add_arc(source, i, -residual_linear[i]);
            int e2 = net.add_arc(negate(i), sink, -residual_linear[i]);
            net.pair_mirrors(e1, e2);
        }
    }

    net.max_flow(source, sink);
    net.symmetrize();

    std::vector<bool> from_source = net.reachable(source);
    std::vector<bool> to_source = net.co_reachable(source);

    bool all_strong = true;
    for (int i = 0; i < n; ++i) {
        bool pos = from_source[i];
        bool neg = from_source[i + n];
        if (pos == neg) continue;   // undetermined (or contradictory region)
        int literal = pos ? i : i + n;
        int x = pos ? 1 : 0;
        Var v = problem.variables()[i];
        result.fixed[v] = 2 * x - 1;
        bool strong = to_source[literal];   // literal strongly connected to the source
        result.strong[v] = strong;
        all_strong = all_strong && strong;
    }
    result.method = (!result.fixed.empty() && all_strong) ? PersistencyResult::Method::Strong
                                                          : PersistencyResult::Method::Weak;

    FixAssignment assignment;
    for (const auto& [v, s] : result.fixed) assignment.set(v, s, FixSource::Preprocess);
    IsingProblem reduced = fix_variables(problem, assignment);
    result.remaining_variables = reduced.num_variables();
    result.remaining_couplers = reduced.J().size();
    return result;
}

PersistencyResult field_dominance_fix(const IsingProblem& problem) {
    PersistencyResult result;
    std::map<Var, double> coupler_sum;
    for (Var v : problem.variables()) coupler_sum[v] = 0.0;
    for (const auto& [key, value] : problem.J()) {
        coupler_sum[key.first] += std::abs(value);
        coupler_sum[key.second] += std::abs(value);
    }
    bool any = false;
    for (Var v : problem.variables()) {
        double h = problem.bias(v);
        if (std::abs(h) > coupler_sum[v]) {
            result.fixed[v] = h > 0 ? -1 : 1;
            result.strong[v] = true;
            any = true;
        }
    }
    result.method = any ? PersistencyResult::Method::Strong : PersistencyResult::Method::Weak;

    FixAssignment assignment;
    for (const auto& [v, s] : result.fixed) assignment.set(v, s, FixSource::Preprocess);
    IsingProblem reduced = fix_variables(problem, assignment);
    result.remaining_variables = reduced.num_variables();
    result.remaining_couplers = reduced.J().size();
    return result;
}

}  // namespace spvar
