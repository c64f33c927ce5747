#pragma once

#include <set>
#include <vector>

#include "lfc/matrix.hpp"

namespace lfc {

/// Directed arc (from, to) with positive weight. Arc (i, j) means node i
/// listens to node j: j's state enters i's coupling sum.
struct Arc {
    int from = 0;
    int to = 0;
    double weight = 1.0;

    bool operator==(const Arc&) const = default;
};

/// Immutable weighted digraph over nodes 1..n. No self-loops, strictly
/// positive weights, at most one arc per ordered pair; violations are
/// rejected at construction.
class WeightedDigraph {
public:
    WeightedDigraph(int order, std::vector<Arc> arcs);

    int order() const { return n_; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    bool has_arc(int from, int to) const;
    double weight(int from, int to) const;  // 0 when the arc is absent

private:
    int n_ = 0;
    std::vector<Arc> arcs_;   // sorted by (from, to)
    Vector weights_;          // dense n*n lookup, row-major
};

/// A follower digraph plus the diagonal leader weights b_i >= 0 (b_i > 0
/// iff follower i senses the leader). The leader is never a graph node;
/// it exists only through these weights.
class LeaderTopology {
public:
    LeaderTopology(WeightedDigraph graph, Vector leader_weights);

    const WeightedDigraph& graph() const { return graph_; }
    const Vector& leader_weights() const { return leader_weights_; }

private:
    WeightedDigraph graph_;
    Vector leader_weights_;
};

/// n x n matrix with entry (i,j) = weight of arc (i,j), zero diagonal.
Matrix adjacency_matrix(const WeightedDigraph& g);

/// L = D - A with D = diag(row sums of A). Every row of L sums to zero.
Matrix laplacian(const WeightedDigraph& g);

/// N_i = { j : (i,j) is an arc }. Throws on an out-of-range node.
std::set<int> neighbors(const WeightedDigraph& g, int node);

/// N_J = union of N_i over i in J, exactly as defined (members of J that
/// are reached by arcs from J are included; subtract J for the external
/// neighbor set).
std::set<int> cluster_neighbors(const WeightedDigraph& g, const std::set<int>& cluster);

/// Partition of the nodes into maximal strongly connected sets, ordered
/// by smallest member.
std::vector<std::set<int>> strong_components(const WeightedDigraph& g);

bool is_strongly_connected(const WeightedDigraph& g);

/// True iff weighted in-degree equals weighted out-degree at every node
/// (equivalently, all column sums of the Laplacian vanish).
bool is_balanced(const WeightedDigraph& g);

/// True iff every follower has a directed path to the leader (arcs i->0
/// exist where b_i > 0). Traversal from the leader over reversed arcs.
bool leader_globally_reachable(const LeaderTopology& t);

/// True iff some node is reachable from every other node. Evaluated two
/// ways that must agree: direct reverse-traversal per candidate, and the
/// condensation criterion (exactly one strong component with an empty
/// external neighbor set).
bool has_globally_reachable_node(const WeightedDigraph& g);

} // namespace lfc
