#include "nodal/riccati.hpp"

#include "nodal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace nodal {

RiccatiSweep riccati_sweep(const RootedTree& t, const Potential& q, double lambda) {
    const int n = t.graph.vertex_count();
    if (static_cast<int>(q.q.size()) != n) throw Error("riccati_sweep: potential size mismatch");

    RiccatiSweep s;
    s.lambda = lambda;
    s.r.resize(n);
    for (VertexId v : t.topo_order) {
        double sum = 0.0;
        bool pole_here = false;
        for (VertexId w : t.children[v]) {
            const RiccatiValue& rw = s.r[w];
            if (rw.pole) continue; // 1/inf = 0
            if (rw.value == 0.0) {
                pole_here = true;
                break;
            }
            sum += 1.0 / rw.value;
        }
        if (pole_here) {
            s.r[v] = {0.0, true};
        } else {
            s.r[v] = {q.q[v] - lambda - sum, false};
        }
        if (v != t.root && (s.r[v].pole || std::fabs(s.r[v].value) < tol::kPoleTol))
            s.valid = false;
    }
    const RiccatiValue& root = s.r[t.root];
    s.root_value = root.pole ? std::numeric_limits<double>::quiet_NaN() : root.value;
    if (root.pole) s.valid = false;
    s.n_less = 0;
    for (VertexId v = 0; v < n; ++v)
        if (v != t.root && !s.r[v].pole && s.r[v].value < 0.0) ++s.n_less;
    return s;
}

int eigencount_below(const RootedTree& t, const Potential& q, double lambda) {
    // The sweep values are the LDL^T pivots of H - lambda I in topo order, so
    // the negative count is the inertia. An exact pole means a singular
    // leading minor; step off it deterministically.
    double nudge = 1e-12 * std::max(1.0, std::fabs(lambda));
    for (int attempt = 0; attempt < 40; ++attempt) {
        const double x = lambda + (attempt == 0 ? 0.0 : nudge);
        if (attempt > 0) nudge *= 4.0;
        const RiccatiSweep s = riccati_sweep(t, q, x);
        bool exact_pole = false;
        for (const RiccatiValue& rv : s.r)
            if (rv.pole) exact_pole = true;
        if (exact_pole || std::isnan(s.root_value)) continue;
        int count = s.n_less + (s.root_value < 0.0 ? 1 : 0);
        return count;
    }
    throw BracketingFailure("eigencount_below: could not step off a pole at lambda = " +
                            std::to_string(lambda));
}

namespace {

// Bisects [lo,hi] with count(hi) == count(lo) + 1 down to an eigenvalue.
double bisect_single(const RootedTree& t, const Potential& q, double lo, double hi, int count_lo,
                     double width_tol) {
    for (int it = 0; it < 200 && hi - lo > width_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eigencount_below(t, q, mid) <= count_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

void locate_in_cell(const RootedTree& t, const Potential& q, double lo, double hi, int count_lo,
                    int count_hi, double width_tol, std::vector<double>& out) {
    const int d = count_hi - count_lo;
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(bisect_single(t, q, lo, hi, count_lo, width_tol));
        return;
    }
    if (hi - lo <= width_tol) {
        // degenerate eigenvalue: emit with multiplicity
        for (int i = 0; i < d; ++i) out.push_back(0.5 * (lo + hi));
        return;
    }
    // quarter the cell until eigenvalues separate
    double prev = lo;
    int count_prev = count_lo;
    for (int s = 1; s <= 4; ++s) {
        const double x = (s == 4) ? hi : lo + (hi - lo) * (s / 4.0);
        const int count_x = (s == 4) ? count_hi : eigencount_below(t, q, x);
        locate_in_cell(t, q, prev, x, count_prev, count_x, width_tol, out);
        prev = x;
        count_prev = count_x;
    }
}

} // namespace

std::vector<double> locate_eigenvalues(const RootedTree& t, const Potential& q, double a,
                                       double b) {
    if (!(a < b)) throw Error("locate_eigenvalues: empty interval");
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    const double lo = a - 1e-12 * scale;
    const double hi = b + 1e-12 * scale;
    const double width_tol = 1e-13 * scale;

    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) * 64.0)));
    std::vector<double> grid(cells + 1);
    std::vector<int> counts(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        grid[i] = lo + (hi - lo) * (static_cast<double>(i) / cells);
        counts[i] = eigencount_below(t, q, grid[i]);
    }
    for (int i = 0; i < cells; ++i)
        if (counts[i + 1] < counts[i])
            throw BracketingFailure("locate_eigenvalues: non-monotone inertia count");

    std::vector<double> out;
    for (int i = 0; i < cells; ++i)
        locate_in_cell(t, q, grid[i], grid[i + 1], counts[i], counts[i + 1], width_tol, out);
    return out;
}

int nodal_count_via_riccati(const RootedTree& t, const Potential& q, double lambda_n) {
    double lo, hi;
    std::tie(lo, hi) = gershgorin_interval(t.graph, q);
    const double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});

    const RiccatiSweep s = riccati_sweep(t, q, lambda_n);
    // a vanishing non-root R_v means the eigenvector dies at a vertex and the
    // root value blows up through 1/R_v, so flag that before judging the root
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v) {
        if (v == t.root) continue;
        if (s.r[v].pole || std::fabs(s.r[v].value) < 1e-8 * scale)
            throw NonGenericSweep("nodal_count_via_riccati: R vanishes at vertex " +
                                  std::to_string(v));
    }
    if (std::isnan(s.root_value) || std::fabs(s.root_value) > 1e-6 * scale)
        throw Error("nodal_count_via_riccati: lambda is not an eigenvalue (root value " +
                    std::to_string(s.root_value) + ")");

    // Stability cross-check either side of the eigenvalue; N_r^< is constant
    // between poles of R_r. Steep instances can put an R_v sign flip inside
    // the default window, so shrink it before declaring the sweep non-generic.
    bool stable = false;
    for (double eps = 1e-6 * scale; eps >= 0.9e-10 * scale; eps *= 1e-2) {
        const RiccatiSweep left = riccati_sweep(t, q, lambda_n - eps);
        const RiccatiSweep right = riccati_sweep(t, q, lambda_n + eps);
        if (left.valid && right.valid && left.n_less == s.n_less && right.n_less == s.n_less) {
            stable = true;
            break;
        }
    }
    if (!stable) throw NonGenericSweep("nodal_count_via_riccati: N_r^< unstable near lambda");

    return s.n_less + 1;
}

Vector eigenvector_from_riccati(const RootedTree& t, const RiccatiSweep& sweep) {
    const int n = t.graph.vertex_count();
    if (n < 2) throw Error("eigenvector_from_riccati: tree must have at least 2 vertices");
    for (VertexId v = 0; v < n; ++v) {
        if (v == t.root) continue;
        if (sweep.r[v].pole || std::fabs(sweep.r[v].value) < tol::kPoleTol)
            throw NonGenericSweep("eigenvector_from_riccati: R vanishes at vertex " +
                                  std::to_string(v));
    }

    Vector psi(n, 0.0);
    psi[t.root] = 1.0;
    // reverse topo order: parents first
    for (auto it = t.topo_order.rbegin(); it != t.topo_order.rend(); ++it) {
        const VertexId v = *it;
        if (v == t.root) continue;
        psi[v] = psi[t.parent[v]] / sweep.r[v].value;
    }
    const double nn = norm2(psi);
    for (double& x : psi) x /= nn;
    normalize_sign_convention(psi);
    return psi;
}

} // namespace nodal
