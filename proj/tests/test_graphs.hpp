#pragma once

// Shared fixtures: the worked examples used across the test suites.

#include "nodal/graph.hpp"
#include "nodal/rng.hpp"

#include <vector>

namespace fixtures {

// 7 vertices, 8 edges, ell = 2. Cutting edges (2,3) and (4,5) (1-indexed)
// leaves a tree. With the shading below the nodal domain count is 3 on the
// graph and 5 on the cut tree.
inline nodal::Graph fig1_graph() {
    return nodal::Graph(7, {{0, 1}, {1, 5}, {2, 3}, {3, 5}, {4, 5}, {5, 6}, {1, 2}, {3, 4}});
}

inline std::vector<nodal::EdgePair> fig1_cut_edges() { return {{1, 2}, {3, 4}}; }

inline nodal::SignPattern fig1_signs() {
    return nodal::SignPattern{{+1, +1, +1, -1, -1, +1, -1}};
}

// 5-vertex tree rooted at vertex 5 (label), i.e. index 4: edges (1,4), (2,4),
// (3,5), (4,5) in 1-indexed labels.
inline nodal::Graph fig3_tree() { return nodal::Graph(5, {{0, 3}, {1, 3}, {2, 4}, {3, 4}}); }

inline nodal::Graph path_graph(int n) {
    std::vector<nodal::EdgePair> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return nodal::Graph(n, edges);
}

inline nodal::Graph cycle_graph(int n) {
    std::vector<nodal::EdgePair> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    edges.push_back({0, n - 1});
    return nodal::Graph(n, edges);
}

inline nodal::Graph triangle() { return cycle_graph(3); }

inline nodal::Graph complete_graph(int n) {
    std::vector<nodal::EdgePair> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    return nodal::Graph(n, edges);
}

// Random tree by uniform parent attachment.
inline nodal::Graph random_tree(nodal::CounterRng& rng, int n) {
    std::vector<nodal::EdgePair> edges;
    for (int v = 1; v < n; ++v) {
        const int p = rng.uniform_int(0, v - 1);
        edges.push_back({std::min(p, v), std::max(p, v)});
    }
    return nodal::Graph(n, edges);
}

} // namespace fixtures
