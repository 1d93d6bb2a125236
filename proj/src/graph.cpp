#include "nodal/graph.hpp"

#include "nodal/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace nodal {

namespace {

// Union-find with path halving.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x != y) parent_[y] = x;
    }

private:
    std::vector<int> parent_;
};

} // namespace

Graph::Graph(int vertex_count, const std::vector<EdgePair>& edge_list)
    : vertex_count_(vertex_count) {
    if (vertex_count <= 0) throw Error("Graph: vertex count must be positive");
    if (edge_list.empty()) throw Error("Graph: edge list must be nonempty");

    std::set<EdgePair> seen;
    edges_.reserve(edge_list.size());
    adj_.assign(vertex_count, {});
    for (const auto& [a, b] : edge_list) {
        if (a < 0 || a >= vertex_count || b < 0 || b >= vertex_count)
            throw Error("Graph: vertex id out of range in edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
        if (a == b)
            throw SelfLoop("Graph: self-loop at vertex " + std::to_string(a) +
                           "; subdivide with a dummy vertex");
        const EdgePair e{std::min(a, b), std::max(a, b)};
        if (!seen.insert(e).second)
            throw ParallelEdge("Graph: parallel edge (" + std::to_string(e.first) + "," +
                               std::to_string(e.second) + "); subdivide with a dummy vertex");
        edges_.push_back(e);
        adj_[e.first].push_back(e.second);
        adj_[e.second].push_back(e.first);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

    // connectivity from vertex 0
    std::vector<bool> visited(vertex_count, false);
    std::vector<VertexId> stack{0};
    visited[0] = true;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (VertexId w : adj_[v]) {
            if (!visited[w]) {
                visited[w] = true;
                stack.push_back(w);
            }
        }
    }
    for (VertexId v = 0; v < vertex_count; ++v) {
        if (!visited[v])
            throw DisconnectedGraph("Graph: vertex " + std::to_string(v) +
                                    " not reachable from vertex 0");
    }
}

bool Graph::adjacent(VertexId u, VertexId v) const {
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

int Graph::edge_index(VertexId u, VertexId v) const {
    const EdgePair e{std::min(u, v), std::max(u, v)};
    for (int i = 0; i < edge_count(); ++i)
        if (edges_[i] == e) return i;
    return -1;
}

Graph build_graph(int vertex_count, const std::vector<EdgePair>& edge_list) {
    return Graph(vertex_count, edge_list);
}

int cycle_dimension(const Graph& g) { return g.edge_count() - g.vertex_count() + 1; }

bool is_tree(const Graph& g) { return cycle_dimension(g) == 0; }

std::vector<EdgePair> spanning_cut_set(const Graph& g) {
    std::vector<bool> visited(g.vertex_count(), false);
    std::set<EdgePair> tree_edges;
    // Iterative DFS from vertex 0; ascending neighbor order is preserved by
    // pushing neighbors in reverse.
    std::vector<VertexId> stack{0};
    std::vector<VertexId> via(g.vertex_count(), -1);
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        if (visited[v]) continue;
        visited[v] = true;
        if (via[v] >= 0)
            tree_edges.insert({std::min(v, via[v]), std::max(v, via[v])});
        const auto& nbrs = g.neighbors(v);
        for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
            if (!visited[*it]) {
                via[*it] = v;
                stack.push_back(*it);
            }
        }
    }
    std::vector<EdgePair> cut;
    for (const EdgePair& e : g.edges())
        if (!tree_edges.count(e)) cut.push_back(e);
    return cut;
}

RootedTree root_tree(const Graph& g, VertexId root) {
    if (!is_tree(g)) throw NotATree("root_tree: graph has cycle dimension > 0");
    if (root < 0 || root >= g.vertex_count()) throw Error("root_tree: root out of range");

    RootedTree t{g, root, std::vector<VertexId>(g.vertex_count(), -1), {}, {}};
    t.children.assign(g.vertex_count(), {});
    std::vector<VertexId> bfs{root};
    std::vector<bool> visited(g.vertex_count(), false);
    visited[root] = true;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        const VertexId v = bfs[i];
        for (VertexId w : g.neighbors(v)) {
            if (!visited[w]) {
                visited[w] = true;
                t.parent[w] = v;
                t.children[v].push_back(w);
                bfs.push_back(w);
            }
        }
    }
    t.topo_order.assign(bfs.rbegin(), bfs.rend());
    return t;
}

int sign_components(const Graph& g, const SignPattern& s) {
    if (static_cast<int>(s.signs.size()) != g.vertex_count())
        throw Error("sign_components: pattern size mismatch");
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (s.signs[v] == 0)
            throw ZeroSign("sign_components: zero sign at vertex " + std::to_string(v));

    UnionFind uf(g.vertex_count());
    for (const auto& [u, v] : g.edges())
        if (s.signs[u] == s.signs[v]) uf.unite(u, v);
    std::set<int> roots;
    for (VertexId v = 0; v < g.vertex_count(); ++v) roots.insert(uf.find(v));
    return static_cast<int>(roots.size());
}

int sign_components_on_support(const Graph& g, const std::vector<int>& signs,
                               const std::vector<bool>& include) {
    UnionFind uf(g.vertex_count());
    for (const auto& [u, v] : g.edges())
        if (include[u] && include[v] && signs[u] == signs[v]) uf.unite(u, v);
    std::set<int> roots;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (include[v]) roots.insert(uf.find(v));
    return static_cast<int>(roots.size());
}

} // namespace nodal
