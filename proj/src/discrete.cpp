#include "nodal/discrete.hpp"

#include "nodal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nodal {

Matrix assemble_hamiltonian(const Graph& g, const Potential& q) {
    const int n = g.vertex_count();
    if (static_cast<int>(q.q.size()) != n)
        throw Error("assemble_hamiltonian: potential size mismatch");
    Matrix h(n, n);
    for (int v = 0; v < n; ++v) h(v, v) = q.q[v];
    for (const auto& [u, v] : g.edges()) {
        h(u, v) = -1.0;
        h(v, u) = -1.0;
    }
    return h;
}

void normalize_sign_convention(Vector& psi) {
    const double vanish = tol::kVanishTolScale * norm_inf(psi);
    for (double x : psi) {
        if (std::fabs(x) > vanish) {
            if (x < 0.0)
                for (double& y : psi) y = -y;
            return;
        }
    }
}

Spectrum eigen_decompose(const Matrix& h) {
    const int n = h.rows();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(h(i, j) - h(j, i)) > 1e-12 * std::max(1.0, frobenius_norm(h)))
                throw Error("eigen_decompose: matrix not symmetric");

    const SymmetricEigensystem es = jacobi_eigensystem(h);

    Spectrum s;
    s.eigenvalues = es.eigenvalues;
    s.h_norm = frobenius_norm(h);
    s.eigenvectors.reserve(n);
    for (int col = 0; col < n; ++col) {
        Vector psi(n);
        for (int i = 0; i < n; ++i) psi[i] = es.eigenvectors_cols(i, col);
        const double nn = norm2(psi);
        for (double& x : psi) x /= nn;
        normalize_sign_convention(psi);
        s.eigenvectors.push_back(std::move(psi));
    }
    double worst = 0.0;
    for (int col = 0; col < n; ++col) {
        Vector r = matvec(h, s.eigenvectors[col]);
        for (int i = 0; i < n; ++i) r[i] -= s.eigenvalues[col] * s.eigenvectors[col][i];
        worst = std::max(worst, norm2(r));
    }
    s.residual_bound = worst;
    return s;
}

SignPattern sign_of(const Vector& psi) {
    const double vanish = tol::kVanishTolScale * norm_inf(psi);
    SignPattern s;
    s.signs.resize(psi.size());
    for (std::size_t v = 0; v < psi.size(); ++v) {
        if (std::fabs(psi[v]) <= vanish)
            throw ZeroSign("sign_of: eigenvector vanishes at vertex " + std::to_string(v));
        s.signs[v] = psi[v] > 0.0 ? 1 : -1;
    }
    return s;
}

int nodal_count(const Graph& g, const Vector& psi) {
    return sign_components(g, sign_of(psi));
}

int nodal_count_support(const Graph& g, const Vector& psi) {
    const double vanish = tol::kVanishTolScale * norm_inf(psi);
    std::vector<int> signs(psi.size(), 0);
    std::vector<bool> include(psi.size(), false);
    for (std::size_t v = 0; v < psi.size(); ++v) {
        if (std::fabs(psi[v]) > vanish) {
            include[v] = true;
            signs[v] = psi[v] > 0.0 ? 1 : -1;
        }
    }
    return sign_components_on_support(g, signs, include);
}

GenericityReport check_genericity(const Spectrum& s, int n) {
    const int count = static_cast<int>(s.eigenvalues.size());
    if (n < 1 || n > count) throw Error("check_genericity: index out of range");
    const double gap_tol = tol::kGapTolScale * std::max(1.0, s.h_norm);

    GenericityReport r;
    r.n = n;
    double gap = std::numeric_limits<double>::infinity();
    if (n > 1) gap = std::min(gap, s.eigenvalues[n - 1] - s.eigenvalues[n - 2]);
    if (n < count) gap = std::min(gap, s.eigenvalues[n] - s.eigenvalues[n - 1]);
    r.simple = gap > gap_tol;

    const Vector& psi = s.eigenvectors[n - 1];
    const double vanish = tol::kVanishTolScale * norm_inf(psi);
    r.nonvanishing = true;
    for (double x : psi)
        if (std::fabs(x) <= vanish) r.nonvanishing = false;

    r.generic = r.simple && r.nonvanishing;
    return r;
}

std::vector<NodalReport> verify_bounds(const Graph& g, const Potential& q) {
    const Spectrum s = eigen_decompose(assemble_hamiltonian(g, q));
    const int ell = cycle_dimension(g);
    std::vector<NodalReport> reports;
    for (int n = 1; n <= g.vertex_count(); ++n) {
        const GenericityReport gr = check_genericity(s, n);
        NodalReport r;
        r.n = n;
        r.lambda = s.eigenvalues[n - 1];
        r.ell = ell;
        r.generic = gr.generic;
        if (gr.generic) {
            r.nu = nodal_count(g, s.eigenvectors[n - 1]);
            r.lower_ok = r.nu >= n - ell;
            r.upper_ok = r.nu <= n;
        } else {
            // strong domains over the nonvanishing support, informational only
            r.nu = nodal_count_support(g, s.eigenvectors[n - 1]);
            r.lower_ok = false;
            r.upper_ok = false;
        }
        reports.push_back(r);
    }
    return reports;
}

SurgeryResult cut_with_surgery(const Graph& g, const Potential& q, const Vector& phi,
                               VertexId v1, VertexId v2) {
    if (g.edge_index(v1, v2) < 0) throw Error("cut_with_surgery: no such edge");
    std::vector<EdgePair> remaining;
    const EdgePair cut{std::min(v1, v2), std::max(v1, v2)};
    for (const EdgePair& e : g.edges())
        if (e != cut) remaining.push_back(e);

    const double vanish = tol::kVanishTolScale * norm_inf(phi);
    if (std::fabs(phi[v1]) <= vanish || std::fabs(phi[v2]) <= vanish)
        throw VanishingEndpoint("cut_with_surgery: eigenvector vanishes at a cut endpoint");

    SurgeryResult out{
        [&]() -> Graph {
            try {
                return Graph(g.vertex_count(), remaining);
            } catch (const DisconnectedGraph&) {
                throw DisconnectingCut("cut_with_surgery: removing the edge disconnects the graph");
            }
        }(),
        Potential{q.q}, phi[v2] / phi[v1]};
    out.p.q[v1] = q.q[v1] - out.alpha;
    out.p.q[v2] = q.q[v2] - 1.0 / out.alpha;
    return out;
}

double quadratic_form(const Graph& g, const Potential& q, const Vector& psi) {
    double s = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) s += q.q[v] * psi[v] * psi[v];
    for (const auto& [u, v] : g.edges()) s -= 2.0 * psi[u] * psi[v];
    return s;
}

std::pair<double, double> gershgorin_interval(const Graph& g, const Potential& q) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int v = 0; v < g.vertex_count(); ++v) {
        lo = std::min(lo, q.q[v] - g.degree(v));
        hi = std::max(hi, q.q[v] + g.degree(v));
    }
    return {lo, hi};
}

} // namespace nodal
