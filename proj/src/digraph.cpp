#include "lfc/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfc/errors.hpp"

namespace lfc {

namespace {

void check_node(int node, int n, const char* what) {
    if (node < 1 || node > n)
        throw ValidationError(std::string(what) + ": node " + std::to_string(node) +
                              " out of range 1.." + std::to_string(n));
}

// Adjacency lists over 0-based indices; forward[i] holds the targets of
// arcs leaving i, reverse[j] the sources of arcs entering j.
struct AdjLists {
    std::vector<std::vector<int>> forward;
    std::vector<std::vector<int>> reverse;
};

AdjLists adjacency_lists(const WeightedDigraph& g) {
    AdjLists lists;
    lists.forward.resize(g.order());
    lists.reverse.resize(g.order());
    for (const Arc& a : g.arcs()) {
        lists.forward[a.from - 1].push_back(a.to - 1);
        lists.reverse[a.to - 1].push_back(a.from - 1);
    }
    return lists;
}

// Iterative depth-first reach over the given adjacency lists.
std::vector<bool> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

struct TarjanState {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> index, lowlink, stack_pos;
    std::vector<int> stack;
    int counter = 0;
    std::vector<std::set<int>> components;  // collected in 0-based indices

    explicit TarjanState(const std::vector<std::vector<int>>& a)
        : adj(a), index(a.size(), -1), lowlink(a.size(), -1), stack_pos(a.size(), -1) {}

    void visit(int v) {
        index[v] = lowlink[v] = counter++;
        stack_pos[v] = static_cast<int>(stack.size());
        stack.push_back(v);
        for (int w : adj[v]) {
            if (index[w] == -1) {
                visit(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (stack_pos[w] != -1) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            const std::size_t cut = static_cast<std::size_t>(stack_pos[v]);
            std::set<int> comp;
            for (std::size_t i = cut; i < stack.size(); ++i) {
                comp.insert(stack[i]);
                stack_pos[stack[i]] = -1;
            }
            stack.resize(cut);
            components.push_back(std::move(comp));
        }
    }
};

} // namespace

WeightedDigraph::WeightedDigraph(int order, std::vector<Arc> arcs)
    : n_(order), arcs_(std::move(arcs)) {
    if (n_ < 1)
        throw ValidationError("WeightedDigraph: order must be at least 1, got " +
                              std::to_string(n_));
    weights_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    std::sort(arcs_.begin(), arcs_.end(),
              [](const Arc& a, const Arc& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    for (const Arc& a : arcs_) {
        check_node(a.from, n_, "arc source");
        check_node(a.to, n_, "arc target");
        if (a.from == a.to)
            throw ValidationError("WeightedDigraph: self-loop at node " + std::to_string(a.from));
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw ValidationError("WeightedDigraph: arc (" + std::to_string(a.from) + "," +
                                  std::to_string(a.to) + ") weight must be a positive finite value");
        double& slot = weights_[static_cast<std::size_t>(a.from - 1) * n_ + (a.to - 1)];
        if (slot != 0.0)
            throw ValidationError("WeightedDigraph: duplicate arc (" + std::to_string(a.from) +
                                  "," + std::to_string(a.to) + ")");
        slot = a.weight;
    }
}

bool WeightedDigraph::has_arc(int from, int to) const {
    return weight(from, to) != 0.0;
}

double WeightedDigraph::weight(int from, int to) const {
    check_node(from, n_, "arc source");
    check_node(to, n_, "arc target");
    return weights_[static_cast<std::size_t>(from - 1) * n_ + (to - 1)];
}

LeaderTopology::LeaderTopology(WeightedDigraph graph, Vector leader_weights)
    : graph_(std::move(graph)), leader_weights_(std::move(leader_weights)) {
    if (static_cast<int>(leader_weights_.size()) != graph_.order())
        throw ValidationError("LeaderTopology: leader weight count " +
                              std::to_string(leader_weights_.size()) + " does not match order " +
                              std::to_string(graph_.order()));
    for (std::size_t i = 0; i < leader_weights_.size(); ++i)
        if (leader_weights_[i] < 0.0 || !std::isfinite(leader_weights_[i]))
            throw ValidationError("LeaderTopology: leader weight b_" + std::to_string(i + 1) +
                                  " must be nonnegative and finite");
}

Matrix adjacency_matrix(const WeightedDigraph& g) {
    const int n = g.order();
    Matrix a(n, n);
    for (const Arc& arc : g.arcs())
        a(arc.from - 1, arc.to - 1) = arc.weight;
    return a;
}

Matrix laplacian(const WeightedDigraph& g) {
    const int n = g.order();
    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        double degree = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = g.weight(i + 1, j + 1);
            degree += w;
            l(i, j) = -w;
        }
        l(i, i) = degree;
    }
    return l;
}

std::set<int> neighbors(const WeightedDigraph& g, int node) {
    check_node(node, g.order(), "neighbors");
    std::set<int> out;
    for (int j = 1; j <= g.order(); ++j)
        if (g.has_arc(node, j)) out.insert(j);
    return out;
}

std::set<int> cluster_neighbors(const WeightedDigraph& g, const std::set<int>& cluster) {
    std::set<int> out;
    for (int i : cluster) {
        auto ni = neighbors(g, i);
        out.insert(ni.begin(), ni.end());
    }
    return out;
}

std::vector<std::set<int>> strong_components(const WeightedDigraph& g) {
    auto lists = adjacency_lists(g);
    TarjanState state(lists.forward);
    for (int v = 0; v < g.order(); ++v)
        if (state.index[v] == -1) state.visit(v);

    std::vector<std::set<int>> out;
    out.reserve(state.components.size());
    for (const auto& comp : state.components) {
        std::set<int> nodes;
        for (int v : comp) nodes.insert(v + 1);
        out.push_back(std::move(nodes));
    }
    std::sort(out.begin(), out.end(),
              [](const std::set<int>& a, const std::set<int>& b) { return *a.begin() < *b.begin(); });
    return out;
}

bool is_strongly_connected(const WeightedDigraph& g) {
    return strong_components(g).size() == 1;
}

bool is_balanced(const WeightedDigraph& g) {
    const int n = g.order();
    double scale = 1.0;
    std::vector<double> in(n, 0.0), out(n, 0.0);
    for (const Arc& a : g.arcs()) {
        out[a.from - 1] += a.weight;
        in[a.to - 1] += a.weight;
        scale = std::max(scale, a.weight);
    }
    for (int i = 0; i < n; ++i)
        if (std::abs(in[i] - out[i]) > 1e-12 * scale * n) return false;
    return true;
}

bool leader_globally_reachable(const LeaderTopology& t) {
    const WeightedDigraph& g = t.graph();
    const int n = g.order();
    // Walk backwards from the leader: first to the followers with b_i > 0,
    // then against follower arcs.
    auto lists = adjacency_lists(g);
    std::vector<bool> seen(n, false);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
        if (t.leader_weights()[i] > 0.0) {
            seen[i] = true;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : lists.reverse[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

bool has_globally_reachable_node(const WeightedDigraph& g) {
    auto lists = adjacency_lists(g);
    const int n = g.order();

    // Route (a): a node is globally reachable iff walking the reversed
    // arcs from it covers every node.
    bool by_traversal = false;
    for (int v = 0; v < n && !by_traversal; ++v) {
        auto seen = reachable_from(lists.reverse, v);
        by_traversal = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    // Route (b): exactly one strong component has no neighbors outside
    // itself.
    auto comps = strong_components(g);
    int closed = 0;
    for (const auto& comp : comps) {
        auto nbrs = cluster_neighbors(g, comp);
        bool external = false;
        for (int j : nbrs)
            if (!comp.count(j)) { external = true; break; }
        if (!external) ++closed;
    }
    bool by_condensation = (closed == 1);

    if (by_traversal != by_condensation)
        throw Error("has_globally_reachable_node: traversal and condensation routes disagree");
    return by_traversal;
}

} // namespace lfc
