#include "nodal/io.hpp"

#include "nodal/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nodal {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw ParseError(line_no, "bad number '" + tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError(line_no, "bad number '" + tok + "'");
    }
}

int parse_vertex(const std::string& tok, int vertex_count, int line_no) {
    int v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError(line_no, "bad vertex label '" + tok + "'");
    if (v < 1 || v > vertex_count)
        throw ParseError(line_no,
                         "vertex label " + tok + " outside 1.." + std::to_string(vertex_count));
    return v - 1; // normalize to 0-indexed
}

} // namespace

GraphFile parse_graph_file(std::istream& in) {
    GraphFile f;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        const std::vector<std::string> tok = tokenize(line);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok.size() != 2 || (tok[0] != "graph" && tok[0] != "metric"))
                throw ParseError(line_no, "expected 'graph <V>' or 'metric <V>' header");
            f.metric = tok[0] == "metric";
            f.vertex_count = static_cast<int>(parse_number(tok[1], line_no));
            if (f.vertex_count < 1) throw ParseError(line_no, "vertex count must be positive");
            f.q.assign(f.vertex_count, 0.0);
            f.conditions.assign(f.vertex_count, VertexCondition{});
            have_header = true;
            continue;
        }
        if (tok[0] == "e") {
            if (tok.size() < 3) throw ParseError(line_no, "edge line needs two vertices");
            const int u = parse_vertex(tok[1], f.vertex_count, line_no);
            const int v = parse_vertex(tok[2], f.vertex_count, line_no);
            f.edges.push_back({std::min(u, v), std::max(u, v)});
            if (f.metric) {
                if (tok.size() < 4) throw ParseError(line_no, "metric edge line needs a length");
                const double len = parse_number(tok[3], line_no);
                if (!(len > 0.0)) throw ParseError(line_no, "edge length must be positive");
                f.lengths.push_back(len);
                PiecewisePotential pot;
                const int pieces = static_cast<int>(tok.size()) - 4;
                for (int i = 0; i < pieces; ++i) {
                    pot.values.push_back(parse_number(tok[4 + i], line_no));
                    if (i + 1 < pieces) pot.breakpoints.push_back(len * (i + 1) / pieces);
                }
                f.potentials.push_back(std::move(pot));
            } else if (tok.size() != 3) {
                throw ParseError(line_no, "discrete edge line takes exactly two vertices");
            }
        } else if (tok[0] == "v") {
            if (tok.size() != 3) throw ParseError(line_no, "vertex line needs a label and a value");
            const int u = parse_vertex(tok[1], f.vertex_count, line_no);
            if (f.metric) {
                const std::string& bc = tok[2];
                if (bc.rfind("bc=", 0) != 0)
                    throw ParseError(line_no, "metric vertex line needs bc=<condition>");
                const std::string kind = bc.substr(3);
                if (kind == "kirchhoff") {
                    f.conditions[u] = {VertexKind::Kirchhoff, 0.0};
                } else if (kind == "dirichlet") {
                    f.conditions[u] = {VertexKind::Dirichlet, 0.0};
                } else if (kind.rfind("robin:", 0) == 0) {
                    f.conditions[u] = {VertexKind::Robin, parse_number(kind.substr(6), line_no)};
                } else {
                    throw ParseError(line_no, "unknown boundary condition '" + kind + "'");
                }
            } else {
                f.q[u] = parse_number(tok[2], line_no);
            }
        } else {
            throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
        }
    }
    if (!have_header) throw ParseError(line_no, "missing header line");
    if (f.edges.empty()) throw ParseError(line_no, "no edges");
    return f;
}

GraphFile parse_graph_file(const std::string& text) {
    std::istringstream in(text);
    return parse_graph_file(in);
}

GraphFile load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_graph_file(in);
}

std::string print_graph_file(const GraphFile& f) {
    std::ostringstream out;
    out << (f.metric ? "metric " : "graph ") << f.vertex_count << "\n";
    for (std::size_t e = 0; e < f.edges.size(); ++e) {
        out << "e " << f.edges[e].first + 1 << " " << f.edges[e].second + 1;
        if (f.metric) {
            out << " " << format_double(f.lengths[e]);
            for (double qv : f.potentials[e].values) out << " " << format_double(qv);
        }
        out << "\n";
    }
    for (int v = 0; v < f.vertex_count; ++v) {
        if (f.metric) {
            const VertexCondition& c = f.conditions[v];
            if (c.kind == VertexKind::Kirchhoff) continue;
            out << "v " << v + 1 << " bc=";
            if (c.kind == VertexKind::Dirichlet)
                out << "dirichlet";
            else
                out << "robin:" << format_double(c.alpha);
            out << "\n";
        } else {
            out << "v " << v + 1 << " " << format_double(f.q[v]) << "\n";
        }
    }
    return out.str();
}

Graph to_graph(const GraphFile& f) { return Graph(f.vertex_count, f.edges); }

Potential to_potential(const GraphFile& f) {
    if (f.metric) throw Error("to_potential: metric file");
    return Potential{f.q};
}

MetricGraph to_metric_graph(const GraphFile& f) {
    if (!f.metric) throw Error("to_metric_graph: discrete file");
    return make_metric_graph(to_graph(f), f.lengths, f.conditions, f.potentials);
}

GraphFile from_metric_graph(const MetricGraph& mg) {
    GraphFile f;
    f.metric = true;
    f.vertex_count = mg.graph.vertex_count();
    f.edges = mg.graph.edges();
    f.lengths = mg.lengths;
    f.potentials = mg.potentials;
    f.conditions = mg.conditions;
    return f;
}

GraphFile from_discrete(const Graph& g, const Potential& q) {
    GraphFile f;
    f.vertex_count = g.vertex_count();
    f.edges = g.edges();
    f.q = q.q;
    return f;
}

void Report::add_header(const std::string& key, const std::string& value) {
    header_.push_back({key, value});
}

void Report::set_columns(const std::vector<std::string>& columns) { columns_ = columns; }

void Report::add_row(const std::vector<std::string>& fields) { rows_.push_back(fields); }

std::string Report::to_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : header_) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? " " : "") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << "\n";
    }
    return out.str();
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json hdr = nlohmann::ordered_json::object();
    for (const auto& [k, v] : header_) hdr[k] = v;
    j["header"] = hdr;
    j["columns"] = columns_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < columns_.size(); ++i)
            obj[columns_[i]] = row[i];
        rows.push_back(obj);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

} // namespace nodal
