#include "nodal/verify.hpp"

#include "nodal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nodal {

Graph random_connected_graph(CounterRng& rng, int vertex_count, int ell) {
    std::vector<EdgePair> edges;
    for (int v = 1; v < vertex_count; ++v) {
        const int parent = rng.uniform_int(0, v - 1);
        edges.push_back({std::min(parent, v), std::max(parent, v)});
    }
    // candidate extra edges: every non-adjacent pair
    std::vector<EdgePair> candidates;
    for (int u = 0; u < vertex_count; ++u)
        for (int v = u + 1; v < vertex_count; ++v)
            if (std::find(edges.begin(), edges.end(), EdgePair{u, v}) == edges.end())
                candidates.push_back({u, v});
    const int extra = std::min<int>(ell, static_cast<int>(candidates.size()));
    for (int i = 0; i < extra; ++i) {
        const int j = rng.uniform_int(i, static_cast<int>(candidates.size()) - 1);
        std::swap(candidates[i], candidates[j]);
        edges.push_back(candidates[i]);
    }
    return Graph(vertex_count, edges);
}

DiscreteInstance random_discrete_instance(CounterRng& rng, const EnsembleConfig& cfg) {
    const int v = rng.uniform_int(cfg.vertex_min, cfg.vertex_max);
    const int ell = rng.uniform_int(cfg.ell_min, cfg.ell_max);
    Graph g = random_connected_graph(rng, v, ell);
    Potential q;
    q.q.resize(v);
    for (double& x : q.q) x = rng.uniform(cfg.potential_min, cfg.potential_max);
    return {std::move(g), std::move(q)};
}

MetricGraph random_metric_instance(CounterRng& rng, const EnsembleConfig& cfg) {
    const int v = rng.uniform_int(cfg.vertex_min, cfg.vertex_max);
    const int ell = rng.uniform_int(cfg.ell_min, cfg.ell_max);
    Graph g = random_connected_graph(rng, v, ell);
    std::vector<double> lengths(g.edge_count());
    for (double& l : lengths) l = rng.uniform(cfg.length_min, cfg.length_max);
    std::vector<PiecewisePotential> pots(g.edge_count());
    if (cfg.potential_min != 0.0 || cfg.potential_max != 0.0) {
        for (PiecewisePotential& p : pots)
            p.values = {rng.uniform(cfg.potential_min, cfg.potential_max)};
    }
    return make_metric_graph(std::move(g), std::move(lengths), {}, std::move(pots));
}

std::vector<VerificationRecord> run_discrete_ensemble(const EnsembleConfig& cfg) {
    CounterRng rng(cfg.seed);
    std::vector<VerificationRecord> records;
    for (int i = 0; i < cfg.instance_count; ++i) {
        const DiscreteInstance inst = random_discrete_instance(rng, cfg);
        const std::vector<NodalReport> reports = verify_bounds(inst.graph, inst.q);
        for (const NodalReport& r : reports) {
            VerificationRecord rec;
            rec.instance = i;
            rec.n = r.n;
            rec.ell = r.ell;
            rec.nu = r.nu;
            rec.lambda = r.lambda;
            rec.generic = r.generic;
            rec.lower_ok = r.lower_ok;
            rec.upper_ok = r.upper_ok;
            records.push_back(rec);
        }
    }
    return records;
}

MetricGenericity metric_genericity(const std::vector<MetricEigenpair>& pairs, int index_1based,
                                   const MetricNodalCount& detail) {
    const int i = index_1based - 1;
    const MetricEigenpair& p = pairs[i];
    MetricGenericity g;
    const double gap_tol = 1e-8 * std::max(1.0, std::fabs(p.lambda));
    bool simple = !p.multiplicity_flag;
    if (i > 0 && p.lambda - pairs[i - 1].lambda <= gap_tol) simple = false;
    if (i + 1 < static_cast<int>(pairs.size()) && pairs[i + 1].lambda - p.lambda <= gap_tol)
        simple = false;
    g.simple = simple;
    g.nonvanishing = !detail.vertex_zero && !detail.zero_edge;
    g.generic = g.simple && g.nonvanishing;
    return g;
}

std::vector<VerificationRecord> run_metric_ensemble(const EnsembleConfig& cfg) {
    CounterRng rng(cfg.seed);
    std::vector<VerificationRecord> records;
    for (int i = 0; i < cfg.instance_count; ++i) {
        const MetricGraph mg = random_metric_instance(rng, cfg);
        const int ell = cycle_dimension(mg.graph);
        try {
            const std::vector<MetricEigenpair> pairs =
                find_first_eigenvalues(mg, cfg.eigenvalue_budget);
            for (int n = 1; n <= static_cast<int>(pairs.size()); ++n) {
                VerificationRecord rec;
                rec.instance = i;
                rec.n = n;
                rec.ell = ell;
                rec.lambda = pairs[n - 1].lambda;
                if (pairs[n - 1].multiplicity_flag) {
                    rec.generic = false;
                    records.push_back(rec);
                    continue;
                }
                const MetricEigenpair filled = eigenfunction(mg, pairs[n - 1]);
                const MetricNodalCount detail = metric_nodal_count_detail(mg, filled);
                rec.nu = detail.domains;
                rec.generic = metric_genericity(pairs, n, detail).generic;
                if (rec.generic) {
                    rec.lower_ok = rec.nu >= n - ell;
                    rec.upper_ok = rec.nu <= n;
                }
                records.push_back(rec);
            }
        } catch (const ScanResolutionFailure&) {
            VerificationRecord rec;
            rec.instance = i;
            rec.ell = ell;
            rec.failed = true;
            records.push_back(rec);
        }
    }
    return records;
}

InterlacingAuditResult interlacing_audit(const Vector& base, const Vector& other,
                                         InterlacingMode mode) {
    InterlacingAuditResult out;
    double margin = std::numeric_limits<double>::infinity();
    switch (mode) {
    case InterlacingMode::RankOne:
        for (std::size_t n = 0; n < other.size(); ++n) {
            margin = std::min(margin, other[n] - base[n]);
            if (n + 1 < base.size()) margin = std::min(margin, base[n + 1] - other[n]);
        }
        break;
    case InterlacingMode::Cut:
        for (std::size_t k = 0; k < std::min(base.size(), other.size()); ++k)
            margin = std::min(margin, base[k] - other[k]);
        break;
    case InterlacingMode::CutShifted:
        for (std::size_t j = 1; j < base.size() && j - 1 < other.size(); ++j)
            margin = std::min(margin, base[j] - other[j - 1]);
        break;
    }
    out.worst_margin = margin;
    out.ok = margin >= -1e-9;
    return out;
}

Vector restricted_spectrum(const Matrix& h, const Vector& g) {
    const int n = h.rows();
    Vector w = g;
    const double gn = norm2(w);
    if (gn == 0.0) throw Error("restricted_spectrum: zero constraint vector");
    for (double& x : w) x /= gn;

    // Householder reflection mapping e1 <-> w; columns 2..n span w-perp.
    Vector u = w;
    u[0] -= 1.0;
    const double un = norm2(u);
    Matrix basis(n, n - 1);
    if (un < 1e-14) {
        for (int j = 1; j < n; ++j) basis(j, j - 1) = 1.0;
    } else {
        for (double& x : u) x /= un;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < n; ++i)
                basis(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * u[i] * u[j];
    }

    Matrix reduced(n - 1, n - 1);
    for (int a = 0; a < n - 1; ++a) {
        Vector col(n, 0.0);
        for (int i = 0; i < n; ++i) col[i] = basis(i, a);
        const Vector hcol = matvec(h, col);
        for (int b = 0; b < n - 1; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += basis(i, b) * hcol[i];
            reduced(b, a) = s;
        }
    }
    // symmetrize away rounding before the eigensolve
    for (int a = 0; a < n - 1; ++a)
        for (int b = a + 1; b < n - 1; ++b) {
            const double m = 0.5 * (reduced(a, b) + reduced(b, a));
            reduced(a, b) = m;
            reduced(b, a) = m;
        }
    return jacobi_eigensystem(reduced).eigenvalues;
}

DiscretePerturbation perturb_to_generic(const Graph& g, const Potential& q, int n,
                                        CounterRng& rng) {
    auto all_generic = [&](const Potential& cand) {
        const Spectrum s = eigen_decompose(assemble_hamiltonian(g, cand));
        for (int k = 1; k <= n; ++k)
            if (!check_genericity(s, k).generic) return false;
        return true;
    };
    if (all_generic(q)) return {q, {0.0, 0}};

    int retries = 0;
    for (double mag = 1e-6; mag <= 1e-3 * (1.0 + 1e-12); mag *= 10.0) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Potential cand = q;
            for (double& x : cand.q) x += mag * rng.uniform(-1.0, 1.0);
            ++retries;
            if (all_generic(cand)) return {cand, {mag, retries}};
        }
    }
    throw PerturbationExhausted("perturb_to_generic: no generic potential within jitter cap");
}

MetricPerturbation perturb_to_generic_metric(const MetricGraph& mg, int n, CounterRng& rng) {
    auto all_generic = [&](const MetricGraph& cand) {
        const std::vector<MetricEigenpair> pairs = find_first_eigenvalues(cand, n);
        for (int k = 1; k <= n; ++k) {
            if (pairs[k - 1].multiplicity_flag) return false;
            const MetricEigenpair filled = eigenfunction(cand, pairs[k - 1]);
            const MetricNodalCount detail = metric_nodal_count_detail(cand, filled);
            if (!metric_genericity(pairs, k, detail).generic) return false;
        }
        return true;
    };
    if (all_generic(mg)) return {mg, {0.0, 0}};

    int retries = 0;
    for (double mag = 1e-6; mag <= 1e-3 * (1.0 + 1e-12); mag *= 10.0) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> lengths = mg.lengths;
            for (double& l : lengths) l *= 1.0 + mag * rng.uniform(-1.0, 1.0);
            ++retries;
            MetricGraph cand =
                make_metric_graph(mg.graph, std::move(lengths), mg.conditions, mg.potentials);
            if (all_generic(cand)) return {std::move(cand), {mag, retries}};
        }
    }
    throw PerturbationExhausted("perturb_to_generic_metric: no generic lengths within jitter cap");
}

std::vector<double> fd_oracle(const MetricGraph& mg, double mesh_size) {
    if (mesh_size > mg.min_length() / 8.0)
        throw Error("fd_oracle: mesh size must be at most min edge length / 8");

    const int nv = mg.graph.vertex_count();
    const int ne = mg.graph.edge_count();
    // node numbering: graph vertices first, then interior nodes per edge
    std::vector<int> interior_base(ne);
    std::vector<int> divisions(ne);
    int total = nv;
    for (int e = 0; e < ne; ++e) {
        divisions[e] = std::max(2, static_cast<int>(std::round(mg.lengths[e] / mesh_size)));
        interior_base[e] = total;
        total += divisions[e] - 1;
    }

    Matrix stiff(total, total);
    Vector mass(total, 0.0);

    for (int e = 0; e < ne; ++e) {
        const double h = mg.lengths[e] / divisions[e];
        auto node = [&](int j) { // j in [0, divisions]
            if (j == 0) return mg.graph.edges()[e].first;
            if (j == divisions[e]) return mg.graph.edges()[e].second;
            return interior_base[e] + j - 1;
        };
        auto q_at = [&](double x) {
            const PiecewisePotential& p = mg.potentials[e];
            if (p.empty()) return 0.0;
            for (std::size_t i = 0; i < p.breakpoints.size(); ++i)
                if (x < p.breakpoints[i]) return p.values[i];
            return p.values.back();
        };
        for (int j = 0; j < divisions[e]; ++j) {
            const int a = node(j), b = node(j + 1);
            stiff(a, a) += 1.0 / h;
            stiff(b, b) += 1.0 / h;
            stiff(a, b) -= 1.0 / h;
            stiff(b, a) -= 1.0 / h;
            stiff(a, a) += q_at(j * h) * h / 2.0;
            stiff(b, b) += q_at((j + 1) * h) * h / 2.0;
            mass[a] += h / 2.0;
            mass[b] += h / 2.0;
        }
    }
    std::vector<bool> keep(total, true);
    for (int v = 0; v < nv; ++v) {
        if (mg.conditions[v].kind == VertexKind::Robin)
            stiff(v, v) += std::tan(mg.conditions[v].alpha);
        else if (mg.conditions[v].kind == VertexKind::Dirichlet)
            keep[v] = false;
    }

    std::vector<int> remap;
    for (int i = 0; i < total; ++i)
        if (keep[i]) remap.push_back(i);
    const int m = static_cast<int>(remap.size());
    Matrix a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = stiff(remap[i], remap[j]) / std::sqrt(mass[remap[i]] * mass[remap[j]]);
    return jacobi_eigensystem(a).eigenvalues;
}

} // namespace nodal
