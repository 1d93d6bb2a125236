#pragma once

#include <utility>
#include <vector>

namespace nodal {

using VertexId = int;
using EdgePair = std::pair<VertexId, VertexId>; // stored with first < second

/// Connected simple undirected graph. Vertices are 0-indexed. Each undirected
/// edge stands for the pair of mutually reversed directed edges; the canonical
/// direction of edge i runs from edges()[i].first to edges()[i].second.
class Graph {
public:
    Graph(int vertex_count, const std::vector<EdgePair>& edge_list);

    int vertex_count() const { return vertex_count_; }
    const std::vector<EdgePair>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int directed_edge_count() const { return 2 * edge_count(); }

    /// Neighbors of v in ascending order.
    const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
    int degree(VertexId v) const { return static_cast<int>(adj_[v].size()); }
    bool adjacent(VertexId u, VertexId v) const;

    /// Index into edges() for the pair {u,v}; -1 if absent.
    int edge_index(VertexId u, VertexId v) const;

    bool operator==(const Graph&) const = default;

private:
    int vertex_count_ = 0;
    std::vector<EdgePair> edges_;
    std::vector<std::vector<VertexId>> adj_;
};

struct RootedTree {
    Graph graph;
    VertexId root;
    std::vector<VertexId> parent;     // parent[v]; -1 at the root
    std::vector<VertexId> topo_order; // children strictly before parents, root last
    std::vector<std::vector<VertexId>> children;
};

struct SignPattern {
    std::vector<int> signs; // +1 or -1 per vertex
};

Graph build_graph(int vertex_count, const std::vector<EdgePair>& edge_list);

int cycle_dimension(const Graph& g);
bool is_tree(const Graph& g);

/// Co-tree edges of the depth-first spanning tree grown from vertex 0 with
/// ascending neighbor order. Removing them leaves a connected tree.
std::vector<EdgePair> spanning_cut_set(const Graph& g);

RootedTree root_tree(const Graph& g, VertexId root);

/// Number of maximal constant-sign connected subgraphs.
int sign_components(const Graph& g, const SignPattern& s);

/// Strong-domain count restricted to the vertices where include[v] is true
/// (used for non-generic eigenvectors that vanish on part of the graph).
int sign_components_on_support(const Graph& g, const std::vector<int>& signs,
                               const std::vector<bool>& include);

} // namespace nodal
