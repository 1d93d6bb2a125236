#include "nodal/metric.hpp"

#include "nodal/errors.hpp"
#include "nodal/riccati.hpp" // tol::kPoleTol

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace nodal {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------- pieces

struct Piece {
    double x0, x1, q;
    double length() const { return x1 - x0; }
};

std::vector<Piece> pieces_of(const PiecewisePotential& pot, double length) {
    std::vector<Piece> out;
    if (pot.empty()) {
        out.push_back({0.0, length, 0.0});
        return out;
    }
    double x = 0.0;
    for (std::size_t i = 0; i < pot.breakpoints.size(); ++i) {
        out.push_back({x, pot.breakpoints[i], pot.values[i]});
        x = pot.breakpoints[i];
    }
    out.push_back({x, length, pot.values.back()});
    return out;
}

PiecewisePotential potential_from_pieces(const std::vector<Piece>& pieces) {
    PiecewisePotential pot;
    if (pieces.size() == 1 && pieces[0].q == 0.0) return pot;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i + 1 < pieces.size()) pot.breakpoints.push_back(pieces[i].x1 - pieces[0].x0);
        pot.values.push_back(pieces[i].q);
    }
    return pot;
}

// Restriction of the potential to [from, to], re-anchored at 0.
std::vector<Piece> restrict_pieces(const std::vector<Piece>& pieces, double from, double to) {
    std::vector<Piece> out;
    for (const Piece& p : pieces) {
        const double a = std::max(p.x0, from);
        const double b = std::min(p.x1, to);
        if (b - a > 1e-14 * std::max(1.0, to - from)) out.push_back({a - from, b - from, p.q});
    }
    if (out.empty()) out.push_back({0.0, to - from, pieces.front().q});
    out.front().x0 = 0.0;
    out.back().x1 = to - from;
    return out;
}

std::vector<Piece> mirror_pieces(const std::vector<Piece>& pieces, double length) {
    std::vector<Piece> out;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
        out.push_back({length - it->x1, length - it->x0, it->q});
    return out;
}

// ---------------------------------------------------------------- transfer

// [psi; psi'](h) = [[c, s], [cp, sp]] [psi; psi'](0) on a constant piece.
struct Transfer {
    double c = 1.0, s = 0.0, cp = 0.0, sp = 1.0;
};

Transfer piece_transfer(double delta, double h) {
    Transfer t;
    if (delta > 0.0) {
        const double w = std::sqrt(delta);
        t.c = std::cos(w * h);
        t.s = std::sin(w * h) / w;
        t.cp = -w * std::sin(w * h);
        t.sp = t.c;
    } else if (delta < 0.0) {
        const double w = std::sqrt(-delta);
        t.c = std::cosh(w * h);
        t.s = std::sinh(w * h) / w;
        t.cp = w * std::sinh(w * h);
        t.sp = t.c;
    } else {
        t.s = h;
    }
    return t;
}

ValueSlope apply(const Transfer& t, const ValueSlope& u) {
    return {t.c * u.value + t.s * u.slope, t.cp * u.value + t.sp * u.slope};
}

Transfer compose(const Transfer& second, const Transfer& first) {
    Transfer t;
    t.c = second.c * first.c + second.s * first.cp;
    t.s = second.c * first.s + second.s * first.sp;
    t.cp = second.cp * first.c + second.sp * first.cp;
    t.sp = second.cp * first.s + second.sp * first.sp;
    return t;
}

Transfer edge_transfer(const MetricGraph& mg, int edge, double lambda) {
    Transfer t;
    for (const Piece& p : pieces_of(mg.potentials[edge], mg.lengths[edge]))
        t = compose(piece_transfer(lambda - p.q, p.length()), t);
    return t;
}

// ---------------------------------------------------------------- zeros

// Zeros of a*cos(w u) + b*sin(w u) on the open interval (0, h).
void trig_zeros(double a, double b, double w, double h, double margin,
                std::vector<double>& out) {
    if (std::hypot(a, b) == 0.0) return;
    const double phi = std::atan2(a, b); // f = C sin(w u + phi)
    const int j_lo = static_cast<int>(std::floor(phi / kPi)) - 1;
    const int j_hi = static_cast<int>(std::ceil((w * h + phi) / kPi)) + 1;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double u = (j * kPi - phi) / w;
        if (u > margin && u < h - margin) out.push_back(u);
    }
}

// Zeros of a*cosh(w u) + b*sinh(w u) on (0, h): at most one.
void hyp_zeros(double a, double b, double w, double h, double margin,
               std::vector<double>& out) {
    if (b == 0.0) return;
    const double r = -a / b;
    if (std::fabs(r) >= 1.0) return;
    const double u = std::atanh(r) / w;
    if (u > margin && u < h - margin) out.push_back(u);
}

// Zeros of psi on one constant-q piece, entered with Cauchy data (v, d).
void piece_value_zeros(double delta, double h, double v, double d, double margin,
                       std::vector<double>& out) {
    if (delta > 0.0) {
        const double w = std::sqrt(delta);
        trig_zeros(v, d / w, w, h, margin, out);
    } else if (delta < 0.0) {
        const double w = std::sqrt(-delta);
        hyp_zeros(v, d / w, w, h, margin, out);
    } else {
        if (d != 0.0) {
            const double u = -v / d;
            if (u > margin && u < h - margin) out.push_back(u);
        }
    }
}

// Stationary points of psi on one piece (zeros of psi').
void piece_slope_zeros(double delta, double h, double v, double d, double margin,
                       std::vector<double>& out) {
    if (delta > 0.0) {
        const double w = std::sqrt(delta);
        trig_zeros(d, -v * w, w, h, margin, out);
    } else if (delta < 0.0) {
        const double w = std::sqrt(-delta);
        hyp_zeros(d, v * w, w, h, margin, out);
    }
    // affine pieces have no interior stationary point unless constant
}

// ---------------------------------------------------------------- integrals

// Integrals of the fundamental pair over one piece of length h.
struct PieceIntegrals {
    double cc, cs, ss;    // int c^2, int c s, int s^2
    double dcc, dcs, dss; // int c'^2, int c' s', int s'^2
};

PieceIntegrals piece_integrals(double delta, double h) {
    PieceIntegrals r{};
    if (delta > 0.0) {
        const double w = std::sqrt(delta);
        const double s2 = std::sin(2.0 * w * h);
        const double sh = std::sin(w * h);
        r.cc = 0.5 * h + s2 / (4.0 * w);
        r.cs = sh * sh / (2.0 * w * w);
        r.ss = (0.5 * h - s2 / (4.0 * w)) / (w * w);
        r.dcc = w * w * (0.5 * h - s2 / (4.0 * w));
        r.dcs = -sh * sh / 2.0;
        r.dss = 0.5 * h + s2 / (4.0 * w);
    } else if (delta < 0.0) {
        const double w = std::sqrt(-delta);
        const double s2 = std::sinh(2.0 * w * h);
        const double sh = std::sinh(w * h);
        r.cc = 0.5 * h + s2 / (4.0 * w);
        r.cs = sh * sh / (2.0 * w * w);
        r.ss = (-0.5 * h + s2 / (4.0 * w)) / (w * w);
        r.dcc = w * w * (-0.5 * h + s2 / (4.0 * w));
        r.dcs = sh * sh / 2.0;
        r.dss = 0.5 * h + s2 / (4.0 * w);
    } else {
        r.cc = h;
        r.cs = 0.5 * h * h;
        r.ss = h * h * h / 3.0;
        r.dcc = 0.0;
        r.dcs = 0.0;
        r.dss = h;
    }
    return r;
}

} // namespace

// ---------------------------------------------------------------- MetricGraph

double MetricGraph::total_length() const {
    return std::accumulate(lengths.begin(), lengths.end(), 0.0);
}

double MetricGraph::min_length() const {
    return *std::min_element(lengths.begin(), lengths.end());
}

double MetricGraph::min_potential() const {
    double m = 0.0;
    for (const PiecewisePotential& p : potentials)
        for (double v : p.values) m = std::min(m, v);
    return m;
}

MetricGraph make_metric_graph(Graph g, std::vector<double> lengths,
                              std::vector<VertexCondition> conditions,
                              std::vector<PiecewisePotential> potentials) {
    const int n = g.vertex_count();
    const int e = g.edge_count();
    if (static_cast<int>(lengths.size()) != e)
        throw Error("make_metric_graph: one length per edge required");
    for (double l : lengths)
        if (!(l > 0.0)) throw Error("make_metric_graph: edge lengths must be positive");
    if (conditions.empty()) conditions.assign(n, VertexCondition{});
    if (static_cast<int>(conditions.size()) != n)
        throw Error("make_metric_graph: one condition per vertex required");
    for (int v = 0; v < n; ++v) {
        if (conditions[v].kind != VertexKind::Kirchhoff && g.degree(v) != 1)
            throw Error("make_metric_graph: Robin/Dirichlet allowed on degree-1 vertices only");
        if (conditions[v].kind == VertexKind::Robin &&
            std::fabs(std::cos(conditions[v].alpha)) < 1e-12)
            throw Error("make_metric_graph: Robin angle at the Dirichlet limit; use Dirichlet");
    }
    if (potentials.empty()) potentials.assign(e, PiecewisePotential{});
    if (static_cast<int>(potentials.size()) != e)
        throw Error("make_metric_graph: one potential per edge required");
    for (int i = 0; i < e; ++i) {
        const PiecewisePotential& p = potentials[i];
        if (p.empty()) {
            if (!p.breakpoints.empty())
                throw Error("make_metric_graph: potential breakpoints without values");
            continue;
        }
        if (p.values.size() != p.breakpoints.size() + 1)
            throw Error("make_metric_graph: potential needs breakpoints+1 values");
        double prev = 0.0;
        for (double b : p.breakpoints) {
            if (!(b > prev && b < lengths[i]))
                throw Error("make_metric_graph: potential breakpoints must ascend inside (0,L)");
            prev = b;
        }
    }
    return MetricGraph{std::move(g), std::move(lengths), std::move(conditions),
                       std::move(potentials)};
}

// ---------------------------------------------------------------- evaluation

ValueSlope evaluate_edge(const MetricGraph& mg, const EdgeSolution& sol, double x) {
    const double len = mg.lengths[sol.edge];
    if (x < -1e-12 || x > len * (1.0 + 1e-12))
        throw Error("evaluate_edge: position outside the edge");
    ValueSlope u{sol.value0, sol.slope0};
    for (const Piece& p : pieces_of(mg.potentials[sol.edge], len)) {
        if (x <= p.x1) return apply(piece_transfer(sol.lambda - p.q, x - p.x0), u);
        u = apply(piece_transfer(sol.lambda - p.q, p.length()), u);
    }
    return u; // x == L within rounding
}

ValueSlope evaluate_edge_reversed(const MetricGraph& mg, const EdgeSolution& sol, double x_rev) {
    const ValueSlope u = evaluate_edge(mg, sol, mg.lengths[sol.edge] - x_rev);
    return {u.value, -u.slope};
}

double edge_sup(const MetricGraph& mg, const EdgeSolution& sol) {
    const double len = mg.lengths[sol.edge];
    double best = 0.0;
    ValueSlope u{sol.value0, sol.slope0};
    for (const Piece& p : pieces_of(mg.potentials[sol.edge], len)) {
        const double delta = sol.lambda - p.q;
        best = std::max(best, std::fabs(u.value));
        std::vector<double> stat;
        piece_slope_zeros(delta, p.length(), u.value, u.slope, 0.0, stat);
        for (double s : stat)
            best = std::max(best, std::fabs(apply(piece_transfer(delta, s), u).value));
        u = apply(piece_transfer(delta, p.length()), u);
    }
    return std::max(best, std::fabs(u.value));
}

double l2_norm_squared(const MetricGraph& mg, const std::vector<EdgeSolution>& sols) {
    double total = 0.0;
    for (const EdgeSolution& sol : sols) {
        ValueSlope u{sol.value0, sol.slope0};
        for (const Piece& p : pieces_of(mg.potentials[sol.edge], mg.lengths[sol.edge])) {
            const double delta = sol.lambda - p.q;
            const PieceIntegrals pi = piece_integrals(delta, p.length());
            total += u.value * u.value * pi.cc + 2.0 * u.value * u.slope * pi.cs +
                     u.slope * u.slope * pi.ss;
            u = apply(piece_transfer(delta, p.length()), u);
        }
    }
    return total;
}

namespace {

struct VertexEnd {
    int edge;
    bool at_start;
};

std::vector<VertexEnd> ends_of(const Graph& g, VertexId v) {
    std::vector<VertexEnd> ends;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edges()[e].first == v) ends.push_back({e, true});
        if (g.edges()[e].second == v) ends.push_back({e, false});
    }
    return ends;
}

// Value and into-edge derivative at one edge end of a solution.
ValueSlope end_data(const MetricGraph& mg, const EdgeSolution& sol, bool at_start) {
    if (at_start) return {sol.value0, sol.slope0};
    const ValueSlope u = evaluate_edge(mg, sol, mg.lengths[sol.edge]);
    return {u.value, -u.slope};
}

} // namespace

double vertex_residual(const MetricGraph& mg, const std::vector<EdgeSolution>& sols) {
    double worst = 0.0;
    for (VertexId v = 0; v < mg.graph.vertex_count(); ++v) {
        const std::vector<VertexEnd> ends = ends_of(mg.graph, v);
        std::vector<ValueSlope> data;
        for (const VertexEnd& e : ends) data.push_back(end_data(mg, sols[e.edge], e.at_start));
        const VertexCondition& c = mg.conditions[v];
        switch (c.kind) {
        case VertexKind::Kirchhoff: {
            double flux = 0.0;
            for (const ValueSlope& d : data) {
                flux += d.slope;
                worst = std::max(worst, std::fabs(d.value - data[0].value));
            }
            worst = std::max(worst, std::fabs(flux));
            break;
        }
        case VertexKind::Robin:
            worst = std::max(worst,
                             std::fabs(data[0].slope - std::tan(c.alpha) * data[0].value));
            break;
        case VertexKind::Dirichlet:
            worst = std::max(worst, std::fabs(data[0].value));
            break;
        }
    }
    return worst;
}

double vertex_value(const MetricGraph& mg, const std::vector<EdgeSolution>& sols, VertexId v) {
    const std::vector<VertexEnd> ends = ends_of(mg.graph, v);
    return end_data(mg, sols[ends.front().edge], ends.front().at_start).value;
}

double MetricEigenpair::k() const { return std::sqrt(std::max(lambda, 0.0)); }

// ---------------------------------------------------------------- secular system

namespace {

// 2E x 2E real system: unknowns (psi(0), psi'(0)) per edge in the canonical
// direction, rows from continuity + Kirchhoff flux + Robin/Dirichlet.
Matrix vertex_system(const MetricGraph& mg, double lambda) {
    const int ne = mg.graph.edge_count();
    std::vector<Transfer> full(ne);
    for (int e = 0; e < ne; ++e) full[e] = edge_transfer(mg, e, lambda);

    // per end: coefficients of value and into-edge derivative
    struct Coef {
        double va, vb, da, db;
    };
    auto coef = [&](const VertexEnd& end) -> Coef {
        if (end.at_start) return {1.0, 0.0, 0.0, 1.0};
        const Transfer& t = full[end.edge];
        return {t.c, t.s, -t.cp, -t.sp};
    };

    Matrix a(2 * ne, 2 * ne);
    int row = 0;
    for (VertexId v = 0; v < mg.graph.vertex_count(); ++v) {
        const std::vector<VertexEnd> ends = ends_of(mg.graph, v);
        const VertexCondition& c = mg.conditions[v];
        if (c.kind == VertexKind::Dirichlet) {
            const Coef k0 = coef(ends[0]);
            a(row, 2 * ends[0].edge) = k0.va;
            a(row, 2 * ends[0].edge + 1) = k0.vb;
            ++row;
        } else if (c.kind == VertexKind::Robin) {
            const Coef k0 = coef(ends[0]);
            const double t = std::tan(c.alpha);
            a(row, 2 * ends[0].edge) = k0.da - t * k0.va;
            a(row, 2 * ends[0].edge + 1) = k0.db - t * k0.vb;
            ++row;
        } else {
            const Coef k0 = coef(ends[0]);
            for (std::size_t i = 1; i < ends.size(); ++i) {
                const Coef ki = coef(ends[i]);
                a(row, 2 * ends[i].edge) += ki.va;
                a(row, 2 * ends[i].edge + 1) += ki.vb;
                a(row, 2 * ends[0].edge) -= k0.va;
                a(row, 2 * ends[0].edge + 1) -= k0.vb;
                ++row;
            }
            for (const VertexEnd& end : ends) {
                const Coef ki = coef(end);
                a(row, 2 * end.edge) += ki.da;
                a(row, 2 * end.edge + 1) += ki.db;
            }
            ++row;
        }
    }
    return a;
}

// Deep hyperbolic regimes put factors of cosh(w L) between the two columns
// of an edge; without column scaling the equilibrated determinant drops to
// rounding noise and rank detection turns meaningless. The scaling is a
// positive diagonal on both sides, so zeros and signs are untouched.
struct ScaledSystem {
    Matrix a;
    std::vector<double> col_scale; // x_true[j] = col_scale[j] * x_scaled[j]
};

ScaledSystem scaled_vertex_system(const MetricGraph& mg, double lambda) {
    ScaledSystem s{vertex_system(mg, lambda), {}};
    const int n = s.a.cols();
    s.col_scale.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        double m = 0.0;
        for (int i = 0; i < s.a.rows(); ++i) m = std::max(m, std::fabs(s.a(i, j)));
        // shrink oversized columns only; amplifying a near-null column would
        // wipe out the very rank deficiency the scan is looking for
        const double scale = 1.0 / std::max(m, 1.0);
        s.col_scale[j] = scale;
        for (int i = 0; i < s.a.rows(); ++i) s.a(i, j) *= scale;
    }
    for (int i = 0; i < s.a.rows(); ++i) {
        double m = 0.0;
        for (int j = 0; j < n; ++j) m = std::max(m, std::fabs(s.a(i, j)));
        if (m > 0.0)
            for (int j = 0; j < n; ++j) s.a(i, j) /= m;
    }
    return s;
}

LogDet secular_det(const MetricGraph& mg, double lambda) {
    return lu_logdet(scaled_vertex_system(mg, lambda).a);
}

} // namespace

double secular_value(const MetricGraph& mg, double lambda) {
    const LogDet d = secular_det(mg, lambda);
    if (d.sign == 0) return 0.0;
    return d.sign * std::exp(std::max(d.log_abs, -700.0));
}

int secular_nullity(const MetricGraph& mg, double lambda) {
    const ScaledSystem s = scaled_vertex_system(mg, lambda);
    const NullspaceResult ns = qr_nullspace(s.a, 1e-8);
    return s.a.rows() - ns.rank;
}

double spectral_floor(const MetricGraph& mg) {
    // Q[f] >= (min q)||f||^2 - sum_v |tan a_v| f(v)^2 and the trace bound
    // f(v)^2 <= ||f||^2 / L + ||f||^2/t + t ||f'||^2 give the closed form below.
    double t_neg = 0.0;
    for (const VertexCondition& c : mg.conditions)
        if (c.kind == VertexKind::Robin) t_neg += std::max(0.0, -std::tan(c.alpha));
    return std::min(0.0, mg.min_potential()) - t_neg / mg.min_length() - t_neg * t_neg - 1.0;
}

// ---------------------------------------------------------------- eigenvalue scan

namespace {

double lambda_of(double t) { return t >= 0.0 ? t * t : -(t * t); }

struct ScanRoot {
    double t;
    int nullity;
};

double bisect_sign_change(const MetricGraph& mg, double ta, double tb, int sign_a) {
    for (int it = 0; it < 200 && tb - ta > 1e-12; ++it) {
        const double tm = 0.5 * (ta + tb);
        const LogDet d = secular_det(mg, lambda_of(tm));
        if (d.sign == 0) return tm;
        if (d.sign == sign_a)
            ta = tm;
        else
            tb = tm;
    }
    return 0.5 * (ta + tb);
}

double golden_min_logabs(const MetricGraph& mg, double ta, double tb) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = ta, b = tb;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = secular_det(mg, lambda_of(x1)).log_abs;
    double f2 = secular_det(mg, lambda_of(x2)).log_abs;
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = secular_det(mg, lambda_of(x1)).log_abs;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = secular_det(mg, lambda_of(x2)).log_abs;
        }
    }
    return 0.5 * (a + b);
}

std::vector<ScanRoot> scan_roots(const MetricGraph& mg, double t_lo, double t_hi, double step) {
    const int cells = std::max(1, static_cast<int>(std::ceil((t_hi - t_lo) / step)));
    std::vector<double> ts(cells + 1);
    std::vector<int> signs(cells + 1);
    std::vector<double> logabs(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        ts[i] = t_lo + (t_hi - t_lo) * (static_cast<double>(i) / cells);
        const LogDet d = secular_det(mg, lambda_of(ts[i]));
        signs[i] = d.sign;
        logabs[i] = d.log_abs;
    }

    std::vector<double> found;
    for (int i = 0; i <= cells; ++i)
        if (signs[i] == 0 || logabs[i] < -60.0) found.push_back(ts[i]);
    for (int i = 0; i < cells; ++i)
        if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1])
            found.push_back(bisect_sign_change(mg, ts[i], ts[i + 1], signs[i]));
    // Local minima of |det| without a sign change at the grid: either an
    // even-multiplicity root or a close root pair hiding inside a cell.
    // A micro-scan picks up hidden sign changes; the golden/nullity fallback
    // covers genuine tangential roots.
    for (int i = 1; i < cells; ++i) {
        if (signs[i - 1] != signs[i] || signs[i] != signs[i + 1] || signs[i] == 0) continue;
        if (logabs[i] > logabs[i - 1] || logabs[i] > logabs[i + 1]) continue;
        const int micro = 32;
        bool micro_hit = false;
        double prev_t = ts[i - 1];
        int prev_sign = signs[i - 1];
        for (int s = 1; s <= micro; ++s) {
            const double x = ts[i - 1] + (ts[i + 1] - ts[i - 1]) * s / micro;
            const LogDet d = secular_det(mg, lambda_of(x));
            if (d.sign != 0 && prev_sign != 0 && d.sign != prev_sign) {
                found.push_back(bisect_sign_change(mg, prev_t, x, prev_sign));
                micro_hit = true;
            }
            prev_t = x;
            prev_sign = d.sign;
        }
        if (!micro_hit) {
            const double tm = golden_min_logabs(mg, ts[i - 1], ts[i + 1]);
            if (secular_nullity(mg, lambda_of(tm)) >= 1) found.push_back(tm);
        }
    }

    std::sort(found.begin(), found.end());
    std::vector<ScanRoot> roots;
    for (double t : found) {
        if (!roots.empty() && t - roots.back().t < 1e-8) continue;
        const int nullity = std::max(1, secular_nullity(mg, lambda_of(t)));
        roots.push_back({t, nullity});
    }
    return roots;
}

} // namespace

std::vector<MetricEigenpair> find_eigenvalues(const MetricGraph& mg, double lambda_max) {
    const double floor = spectral_floor(mg);
    if (lambda_max <= floor) return {};
    const double t_lo = -std::sqrt(-floor);
    const double t_hi = lambda_max >= 0.0 ? std::sqrt(lambda_max) : -std::sqrt(-lambda_max);
    double step = mg.min_length() / 16.0;

    const double k_top = std::max(t_hi, 0.0);
    const double weyl_expect = mg.total_length() * k_top / kPi;
    const double weyl_slack = mg.graph.vertex_count() + cycle_dimension(mg.graph) + 2;

    for (int attempt = 0; attempt < 3; ++attempt, step /= 4.0) {
        const std::vector<ScanRoot> roots = scan_roots(mg, t_lo, t_hi, step);
        int count = 0;
        for (const ScanRoot& r : roots) count += r.nullity;
        if (std::fabs(count - weyl_expect) > weyl_slack) continue; // missed roots: refine

        std::vector<MetricEigenpair> out;
        int index = 1;
        for (const ScanRoot& r : roots) {
            for (int copy = 0; copy < r.nullity; ++copy) {
                MetricEigenpair p;
                p.lambda = lambda_of(r.t);
                p.index = index++;
                p.multiplicity = r.nullity;
                p.multiplicity_flag = r.nullity > 1;
                out.push_back(p);
            }
        }
        return out;
    }
    throw ScanResolutionFailure("find_eigenvalues: Weyl audit failed at the finest grid");
}

std::vector<MetricEigenpair> find_first_eigenvalues(const MetricGraph& mg, int count) {
    double k_guess =
        (count + mg.graph.vertex_count() + cycle_dimension(mg.graph) + 4) * kPi /
        mg.total_length();
    k_guess = std::max(k_guess, 1.0);
    for (int round = 0; round < 5; ++round, k_guess *= 1.5) {
        std::vector<MetricEigenpair> pairs = find_eigenvalues(mg, k_guess * k_guess);
        if (static_cast<int>(pairs.size()) >= count) {
            pairs.resize(count);
            return pairs;
        }
    }
    throw ScanResolutionFailure("find_first_eigenvalues: ceiling escalation exhausted");
}

// ---------------------------------------------------------------- eigenfunctions

namespace {

std::vector<EdgeSolution> solutions_from_coeffs(const MetricGraph& mg, const Vector& x,
                                                double lambda) {
    std::vector<EdgeSolution> sols;
    for (int e = 0; e < mg.graph.edge_count(); ++e)
        sols.push_back({e, x[2 * e], x[2 * e + 1], lambda});
    return sols;
}

void normalize_solutions(const MetricGraph& mg, std::vector<EdgeSolution>& sols) {
    const double nrm = std::sqrt(l2_norm_squared(mg, sols));
    for (EdgeSolution& s : sols) {
        s.value0 /= nrm;
        s.slope0 /= nrm;
    }
    double sup = 0.0;
    for (const EdgeSolution& s : sols) sup = std::max(sup, edge_sup(mg, s));
    for (const EdgeSolution& s : sols) {
        if (std::fabs(s.value0) > 1e-8 * sup) {
            if (s.value0 < 0.0)
                for (EdgeSolution& t : sols) {
                    t.value0 = -t.value0;
                    t.slope0 = -t.slope0;
                }
            break;
        }
        if (std::fabs(s.slope0) > 1e-8 * sup) {
            if (s.slope0 < 0.0)
                for (EdgeSolution& t : sols) {
                    t.value0 = -t.value0;
                    t.slope0 = -t.slope0;
                }
            break;
        }
    }
}

std::vector<Vector> nullspace_with_fallback(const MetricGraph& mg, double lambda) {
    const ScaledSystem s = scaled_vertex_system(mg, lambda);
    for (double tol : {1e-8, 1e-6, 1e-5}) {
        NullspaceResult ns = qr_nullspace(s.a, tol);
        if (!ns.basis.empty()) {
            for (Vector& x : ns.basis)
                for (std::size_t j = 0; j < x.size(); ++j) x[j] *= s.col_scale[j];
            return ns.basis;
        }
    }
    throw ScanResolutionFailure("eigenfunction: no nullspace at the located eigenvalue");
}

} // namespace

MetricEigenpair eigenfunction(const MetricGraph& mg, const MetricEigenpair& pair) {
    if (pair.multiplicity > 1)
        throw DegenerateChoice("eigenfunction: nullity " + std::to_string(pair.multiplicity) +
                               " > 1; pick a basis vector via eigenfunction_basis");
    const std::vector<Vector> basis = nullspace_with_fallback(mg, pair.lambda);
    MetricEigenpair out = pair;
    out.solutions = solutions_from_coeffs(mg, basis.front(), pair.lambda);
    normalize_solutions(mg, out.solutions);
    out.residual = vertex_residual(mg, out.solutions);
    out.sup = 0.0;
    for (const EdgeSolution& s : out.solutions) out.sup = std::max(out.sup, edge_sup(mg, s));
    return out;
}

std::vector<MetricEigenpair> eigenfunction_basis(const MetricGraph& mg,
                                                 const MetricEigenpair& pair) {
    std::vector<MetricEigenpair> out;
    for (const Vector& x : nullspace_with_fallback(mg, pair.lambda)) {
        MetricEigenpair p = pair;
        p.solutions = solutions_from_coeffs(mg, x, pair.lambda);
        normalize_solutions(mg, p.solutions);
        p.residual = vertex_residual(mg, p.solutions);
        p.sup = 0.0;
        for (const EdgeSolution& s : p.solutions) p.sup = std::max(p.sup, edge_sup(mg, s));
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------- zeros & nodal count

std::vector<double> edge_zeros(const MetricGraph& mg, const EdgeSolution& sol, double sup_hint) {
    const double len = mg.lengths[sol.edge];
    const double sup_here = edge_sup(mg, sol);
    const double reference = sup_hint > 0.0 ? sup_hint : sup_here;
    if (sup_here <= 1e-8 * reference)
        throw IdenticallyZeroEdge("edge_zeros: solution vanishes identically on edge " +
                                  std::to_string(sol.edge));

    std::vector<double> zeros;
    ValueSlope u{sol.value0, sol.slope0};
    const double margin = 1e-9 * len;
    for (const Piece& p : pieces_of(mg.potentials[sol.edge], len)) {
        const double delta = sol.lambda - p.q;
        std::vector<double> local;
        piece_value_zeros(delta, p.length(), u.value, u.slope, 0.0, local);
        for (double z : local) {
            const double x = p.x0 + z;
            if (x > margin && x < len - margin) {
                if (zeros.empty() || x - zeros.back() > margin) zeros.push_back(x);
            }
        }
        u = apply(piece_transfer(delta, p.length()), u);
    }
    return zeros;
}

MetricNodalCount metric_nodal_count_detail(const MetricGraph& mg, const MetricEigenpair& pair) {
    if (pair.solutions.empty())
        throw Error("metric_nodal_count: eigenfunction not filled; call eigenfunction() first");
    const int ne = mg.graph.edge_count();
    double sup_global = 0.0;
    std::vector<double> sups(ne);
    for (int e = 0; e < ne; ++e) {
        sups[e] = edge_sup(mg, pair.solutions[e]);
        sup_global = std::max(sup_global, sups[e]);
    }

    MetricNodalCount out;
    std::vector<bool> zero_edge(ne, false);
    std::vector<std::vector<double>> zeros(ne);
    for (int e = 0; e < ne; ++e) {
        if (sups[e] <= 1e-8 * sup_global) {
            zero_edge[e] = true;
            out.zero_edge = true;
            continue;
        }
        zeros[e] = edge_zeros(mg, pair.solutions[e], sup_global);
    }

    // segment ids: edge e contributes zeros[e].size()+1 segments
    std::vector<int> seg_base(ne, -1);
    int total = 0;
    for (int e = 0; e < ne; ++e) {
        if (zero_edge[e]) continue;
        seg_base[e] = total;
        total += static_cast<int>(zeros[e].size()) + 1;
    }
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](int x, int y) { parent[find(y)] = find(x); };

    for (VertexId v = 0; v < mg.graph.vertex_count(); ++v) {
        const double val = vertex_value(mg, pair.solutions, v);
        if (std::fabs(val) <= 1e-8 * sup_global) {
            if (mg.conditions[v].kind != VertexKind::Dirichlet) out.vertex_zero = true;
            continue; // a vertex zero separates; no unions across it
        }
        int first_seg = -1;
        for (const VertexEnd& end : ends_of(mg.graph, v)) {
            if (zero_edge[end.edge]) continue;
            const int seg =
                seg_base[end.edge] +
                (end.at_start ? 0 : static_cast<int>(zeros[end.edge].size()));
            if (first_seg < 0)
                first_seg = seg;
            else
                unite(first_seg, seg);
        }
    }

    std::vector<bool> seen(total, false);
    for (int s = 0; s < total; ++s) {
        const int r = find(s);
        if (!seen[r]) {
            seen[r] = true;
            ++out.domains;
        }
    }
    return out;
}

int metric_nodal_count(const MetricGraph& mg, const MetricEigenpair& pair) {
    const MetricNodalCount d = metric_nodal_count_detail(mg, pair);
    if (d.zero_edge)
        throw IdenticallyZeroEdge("metric_nodal_count: eigenfunction vanishes on an edge");
    if (d.vertex_zero) throw ZeroAtVertex("metric_nodal_count: eigenfunction vanishes at a vertex");
    return d.domains;
}

// ---------------------------------------------------------------- cut to tree

namespace {

double argmax_abs_on_edge(const MetricGraph& mg, const EdgeSolution& sol) {
    // Search the interior band only: when |psi| is monotone on the edge the
    // sup sits at a vertex, and a cut point at the vertex would degenerate
    // the segment. Any interior point with psi != 0 is a valid cut.
    const double len = mg.lengths[sol.edge];
    const double lo_band = len / 16.0, hi_band = len * 15.0 / 16.0;
    const int samples = 256;
    double best_x = 0.5 * len;
    double best = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double x = lo_band + (hi_band - lo_band) * (i + 0.5) / samples;
        const double v = std::fabs(evaluate_edge(mg, sol, x).value);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    // golden-section polish around the best sample
    double a = std::max(lo_band, best_x - len / samples);
    double b = std::min(hi_band, best_x + len / samples);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = -std::fabs(evaluate_edge(mg, sol, x1).value);
    double f2 = -std::fabs(evaluate_edge(mg, sol, x2).value);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = -std::fabs(evaluate_edge(mg, sol, x1).value);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = -std::fabs(evaluate_edge(mg, sol, x2).value);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

CutResult cut_to_tree(const MetricGraph& mg, const MetricEigenpair& pair,
                      const std::vector<EdgePair>& cut_edges) {
    if (cut_edges.empty()) {
        if (cycle_dimension(mg.graph) != 0)
            throw Error("cut_to_tree: graph has cycles but the cut set is empty");
        return CutResult{mg, {}, {}, pair.solutions};
    }
    if (pair.solutions.empty())
        throw Error("cut_to_tree: eigenfunction not filled; call eigenfunction() first");

    std::vector<int> cut_idx;
    for (const EdgePair& e : cut_edges) {
        const int idx = mg.graph.edge_index(e.first, e.second);
        if (idx < 0) throw Error("cut_to_tree: cut edge not in the graph");
        cut_idx.push_back(idx);
    }

    double sup_global = 0.0;
    for (const EdgeSolution& s : pair.solutions)
        sup_global = std::max(sup_global, edge_sup(mg, s));

    const int nv = mg.graph.vertex_count();
    std::vector<EdgePair> tree_edges;
    std::vector<double> tree_lengths;
    std::vector<PiecewisePotential> tree_pots;
    std::vector<EdgeSolution> tree_sols;

    for (int e = 0; e < mg.graph.edge_count(); ++e) {
        if (std::find(cut_idx.begin(), cut_idx.end(), e) != cut_idx.end()) continue;
        tree_edges.push_back(mg.graph.edges()[e]);
        tree_lengths.push_back(mg.lengths[e]);
        tree_pots.push_back(mg.potentials[e]);
        EdgeSolution s = pair.solutions[e];
        s.edge = static_cast<int>(tree_edges.size()) - 1;
        tree_sols.push_back(s);
    }

    std::vector<CutResult::RobinDatum> robin_data;
    std::vector<std::pair<int, double>> cut_points;
    std::vector<VertexCondition> tree_conds = mg.conditions;
    for (std::size_t j = 0; j < cut_idx.size(); ++j) {
        const int e = cut_idx[j];
        const double len = mg.lengths[e];
        const EdgeSolution& sol = pair.solutions[e];
        const double xj = argmax_abs_on_edge(mg, sol);
        if (std::fabs(evaluate_edge(mg, sol, xj).value) <= 1e-8 * sup_global)
            throw NoNonzeroCutPoint("cut_to_tree: eigenfunction vanishes along cut edge " +
                                    std::to_string(e));

        const VertexId u_plus = nv + 2 * static_cast<int>(j);
        const VertexId u_minus = u_plus + 1;
        const auto [p, qv] = mg.graph.edges()[e];
        const std::vector<Piece> pieces = pieces_of(mg.potentials[e], len);

        // segment p -> u_plus on [0, xj], original orientation
        tree_edges.push_back({p, u_plus});
        tree_lengths.push_back(xj);
        tree_pots.push_back(potential_from_pieces(restrict_pieces(pieces, 0.0, xj)));
        EdgeSolution s1{static_cast<int>(tree_edges.size()) - 1, sol.value0, sol.slope0,
                        sol.lambda};
        tree_sols.push_back(s1);

        // segment qv -> u_minus on [xj, L], mirrored orientation
        tree_edges.push_back({qv, u_minus});
        tree_lengths.push_back(len - xj);
        tree_pots.push_back(potential_from_pieces(
            mirror_pieces(restrict_pieces(pieces, xj, len), len - xj)));
        const ValueSlope at_l = evaluate_edge(mg, sol, len);
        EdgeSolution s2{static_cast<int>(tree_edges.size()) - 1, at_l.value, -at_l.slope,
                        sol.lambda};
        tree_sols.push_back(s2);

        cut_points.push_back({e, xj});
    }

    // build the tree graph first so segment solutions can be evaluated on it
    Graph tg(nv + 2 * static_cast<int>(cut_idx.size()), tree_edges);
    tree_conds.resize(tg.vertex_count());
    MetricGraph tentative{tg, tree_lengths, tree_conds, tree_pots};

    for (std::size_t j = 0; j < cut_idx.size(); ++j) {
        const VertexId u_plus = nv + 2 * static_cast<int>(j);
        const VertexId u_minus = u_plus + 1;
        // locate the two segment solutions (they end at u_plus / u_minus)
        const EdgeSolution* s1 = nullptr;
        const EdgeSolution* s2 = nullptr;
        for (const EdgeSolution& s : tree_sols) {
            if (tg.edges()[s.edge].second == u_plus) s1 = &s;
            if (tg.edges()[s.edge].second == u_minus) s2 = &s;
        }
        const ValueSlope d1 = evaluate_edge(tentative, *s1, tree_lengths[s1->edge]);
        const ValueSlope d2 = evaluate_edge(tentative, *s2, tree_lengths[s2->edge]);
        const double a_plus = -d1.slope / d1.value;  // inward derivative over value
        const double a_minus = -d2.slope / d2.value;
        tree_conds[u_plus] = {VertexKind::Robin, std::atan(a_plus)};
        tree_conds[u_minus] = {VertexKind::Robin, std::atan(a_minus)};
        robin_data.push_back({u_plus, a_plus, u_minus, a_minus});
    }

    MetricGraph tree = make_metric_graph(std::move(tg), std::move(tree_lengths),
                                         std::move(tree_conds), std::move(tree_pots));
    return CutResult{std::move(tree), std::move(robin_data), std::move(cut_points),
                     std::move(tree_sols)};
}

// ---------------------------------------------------------------- shooting sweep

namespace {

struct ShootState {
    double p = 1.0;  // value
    double d = 0.0;  // derivative in the direction of travel (towards root)
    int zeros = 0;
};

ShootState leaf_state(const VertexCondition& c) {
    switch (c.kind) {
    case VertexKind::Dirichlet: return {0.0, 1.0, 0};
    case VertexKind::Robin: return {std::cos(c.alpha), std::sin(c.alpha), 0};
    case VertexKind::Kirchhoff: return {1.0, 0.0, 0};
    }
    return {1.0, 0.0, 0};
}

// Propagate along an edge from `from` towards `to`, counting interior zeros.
ShootState propagate_edge(const MetricGraph& mg, int edge, VertexId from, ShootState st,
                          double lambda) {
    const double len = mg.lengths[edge];
    std::vector<Piece> pieces = pieces_of(mg.potentials[edge], len);
    if (mg.graph.edges()[edge].first != from) pieces = mirror_pieces(pieces, len);

    for (const Piece& p : pieces) {
        const double delta = lambda - p.q;
        std::vector<double> zs;
        piece_value_zeros(delta, p.length(), st.p, st.d, 1e-14 * len, zs);
        st.zeros += static_cast<int>(zs.size());
        const ValueSlope next = apply(piece_transfer(delta, p.length()), {st.p, st.d});
        st.p = next.value;
        st.d = next.slope;
        const double scale = std::hypot(st.p, st.d);
        if (scale > 0.0) {
            st.p /= scale;
            st.d /= scale;
        }
    }
    return st;
}

} // namespace

ShootingResult shooting_sweep(const MetricGraph& mt, double lambda, VertexId root) {
    if (!is_tree(mt.graph)) throw NotATree("shooting_sweep: metric graph is not a tree");
    if (mt.graph.degree(root) != 1)
        throw Error("shooting_sweep: root must be a boundary vertex");

    const RootedTree rt = root_tree(mt.graph, root);
    std::vector<ShootState> at_parent(mt.graph.vertex_count());
    int zeros_total = 0;

    for (VertexId v : rt.topo_order) {
        if (v == root) break; // root is last in topo order
        ShootState st;
        if (rt.children[v].empty()) {
            st = leaf_state(mt.conditions[v]);
        } else {
            // merge incoming subtrees: R_out = sum of incoming R values
            bool pole = false;
            double r_sum = 0.0;
            for (VertexId w : rt.children[v]) {
                const ShootState& in = at_parent[w];
                if (std::fabs(in.p) <= 1e-14 * std::hypot(in.p, in.d)) {
                    pole = true;
                } else {
                    r_sum += in.d / in.p;
                }
            }
            if (pole) {
                st = {0.0, 1.0, 0};
            } else {
                const double scale = std::hypot(1.0, r_sum);
                st = {1.0 / scale, r_sum / scale, 0};
            }
        }
        const int e = mt.graph.edge_index(v, rt.parent[v]);
        ShootState moved = propagate_edge(mt, e, v, st, lambda);
        zeros_total += moved.zeros;
        moved.zeros = 0;
        at_parent[v] = moved;
    }

    const ShootState& final = at_parent[rt.children[root].front()];
    ShootingResult out;
    out.interior_zeros = zeros_total;
    if (std::fabs(final.p) <= 1e-14 * std::hypot(final.p, final.d)) {
        out.root_pole = true;
        out.root_value = std::numeric_limits<double>::infinity();
    } else {
        out.root_value = final.d / final.p;
    }
    return out;
}

int shooting_count_below(const MetricGraph& mt, double lambda, VertexId root) {
    const ShootingResult r = shooting_sweep(mt, lambda, root);
    const VertexCondition& c = mt.conditions[root];
    if (c.kind == VertexKind::Dirichlet) return r.interior_zeros + (r.root_pole ? 1 : 0);
    const double level = -std::tan(c.kind == VertexKind::Robin ? c.alpha : 0.0);
    if (r.root_pole) return r.interior_zeros + 1;
    return r.interior_zeros + (r.root_value < level ? 1 : 0);
}

std::vector<double> shooting_eigenvalues(const MetricGraph& mt, double a, double b,
                                         VertexId root) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    const int count_a = shooting_count_below(mt, a, root);
    const int count_b = shooting_count_below(mt, b, root);
    std::vector<double> out;
    for (int target = count_a + 1; target <= count_b; ++target) {
        double lo = a, hi = b;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * scale; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (shooting_count_below(mt, mid, root) >= target)
                hi = mid;
            else
                lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

// ---------------------------------------------------------------- star helpers

double star_secular(const std::vector<double>& lengths, double k) {
    double sum = 0.0;
    for (double l : lengths) {
        const double x = k * l;
        const double nearest = std::round(x / kPi) * kPi;
        if (std::fabs(x - nearest) < tol::kPoleTol * std::max(1.0, l))
            throw PoleProximity("star_secular: k L within pole tolerance of a multiple of pi");
        sum += std::cos(x) / std::sin(x);
    }
    return sum;
}

MetricGraph build_star_counterexample(int m, int n_edges) {
    if (m < 2) throw Error("build_star_counterexample: m must be at least 2");
    if (n_edges < 3) throw Error("build_star_counterexample: at least 3 edges required");
    static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107};
    if (n_edges - 2 > static_cast<int>(std::size(primes)))
        throw Error("build_star_counterexample: too many edges");

    std::vector<EdgePair> edges;
    std::vector<double> lengths;
    for (int j = 1; j <= n_edges; ++j) {
        edges.push_back({0, j});
        if (j == 1)
            lengths.push_back(1.0);
        else if (j == 2)
            lengths.push_back(1.0 / m);
        else
            // Slightly below 1 so each extra edge contributes exactly m-1
            // cotangent poles under m*pi, matching the predicted index
            // (m-1)(N-1)+2 of the anomalous eigenvalue.
            lengths.push_back(1.0 - std::sqrt(static_cast<double>(primes[j - 3])) / 100.0);
    }
    std::vector<VertexCondition> conds(n_edges + 1);
    for (int j = 1; j <= n_edges; ++j) conds[j] = {VertexKind::Dirichlet, 0.0};
    return make_metric_graph(Graph(n_edges + 1, edges), std::move(lengths), std::move(conds));
}

// ---------------------------------------------------------------- quadratic form

double quadratic_form_metric(const MetricGraph& mg, const std::vector<EdgeSolution>& f) {
    if (static_cast<int>(f.size()) != mg.graph.edge_count())
        throw Error("quadratic_form_metric: one edge function per edge required");

    double q_total = 0.0;
    double sup = 0.0;
    for (const EdgeSolution& sol : f) sup = std::max(sup, edge_sup(mg, sol));

    for (const EdgeSolution& sol : f) {
        ValueSlope u{sol.value0, sol.slope0};
        for (const Piece& p : pieces_of(mg.potentials[sol.edge], mg.lengths[sol.edge])) {
            const double delta = sol.lambda - p.q;
            const PieceIntegrals pi = piece_integrals(delta, p.length());
            const double i_ff = u.value * u.value * pi.cc + 2.0 * u.value * u.slope * pi.cs +
                                u.slope * u.slope * pi.ss;
            const double i_dd = u.value * u.value * pi.dcc + 2.0 * u.value * u.slope * pi.dcs +
                                u.slope * u.slope * pi.dss;
            q_total += i_dd + p.q * i_ff;
            u = apply(piece_transfer(delta, p.length()), u);
        }
    }
    for (VertexId v = 0; v < mg.graph.vertex_count(); ++v) {
        if (mg.graph.degree(v) != 1) continue;
        const VertexCondition& c = mg.conditions[v];
        const double val = vertex_value(mg, f, v);
        if (c.kind == VertexKind::Robin) {
            q_total += std::tan(c.alpha) * val * val;
        } else if (c.kind == VertexKind::Dirichlet) {
            if (std::fabs(val) > 1e-9 * std::max(1.0, sup))
                throw DirichletForm("quadratic_form_metric: nonzero value at a Dirichlet vertex");
        }
    }
    return q_total;
}

} // namespace nodal
