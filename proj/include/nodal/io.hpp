#pragma once

#include "nodal/discrete.hpp"
#include "nodal/metric.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nodal {

/// Parsed form of the graph file format:
///   header   `graph <V>` (discrete) or `metric <V>`
///   edges    `e <u> <v>` (discrete) / `e <u> <v> <length> [q1 q2 ...]` (metric;
///            the q values are equal-width constant pieces)
///   vertices `v <u> <q>` (discrete) / `v <u> bc=kirchhoff|dirichlet|robin:<alpha>`
/// Labels are 1-indexed in the file and normalized to 0-indexed here.
struct GraphFile {
    bool metric = false;
    int vertex_count = 0;
    std::vector<EdgePair> edges;
    std::vector<double> lengths;                // metric
    std::vector<PiecewisePotential> potentials; // metric
    std::vector<VertexCondition> conditions;    // metric
    Vector q;                                   // discrete

    bool operator==(const GraphFile&) const = default;
};

GraphFile parse_graph_file(std::istream& in);
GraphFile parse_graph_file(const std::string& text);
GraphFile load_graph_file(const std::string& path);

/// Canonical text form; parse(print(g)) == g and printing is idempotent.
std::string print_graph_file(const GraphFile& f);

Graph to_graph(const GraphFile& f);
Potential to_potential(const GraphFile& f);
MetricGraph to_metric_graph(const GraphFile& f);
GraphFile from_metric_graph(const MetricGraph& mg);
GraphFile from_discrete(const Graph& g, const Potential& q);

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double x);

/// Line-oriented report: '#' header lines, one column-name line, then rows.
class Report {
public:
    void add_header(const std::string& key, const std::string& value);
    void set_columns(const std::vector<std::string>& columns);
    void add_row(const std::vector<std::string>& fields);

    std::string to_text() const;
    std::string to_json() const;

private:
    std::vector<std::pair<std::string, std::string>> header_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace nodal
