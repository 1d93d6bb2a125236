#pragma once

#include "nodal/graph.hpp"
#include "nodal/linalg.hpp"

#include <utility>
#include <vector>

namespace nodal {

enum class VertexKind { Kirchhoff, Robin, Dirichlet };

/// Robin stores the angle of psi'(0) = tan(alpha) psi(0), derivative taken
/// from the vertex into the edge. Neumann is alpha = 0 (same as Kirchhoff at
/// a boundary vertex); Dirichlet is the cos(alpha) = 0 limit.
struct VertexCondition {
    VertexKind kind = VertexKind::Kirchhoff;
    double alpha = 0.0;

    bool operator==(const VertexCondition&) const = default;
};

/// Piecewise-constant potential on [0, L] along the canonical edge direction
/// (lower vertex id -> higher vertex id). Empty means q = 0.
struct PiecewisePotential {
    std::vector<double> breakpoints; // strictly ascending, interior to (0, L)
    std::vector<double> values;      // breakpoints.size() + 1 entries

    bool empty() const { return values.empty(); }
    bool operator==(const PiecewisePotential&) const = default;
};

struct MetricGraph {
    Graph graph;
    std::vector<double> lengths;                // per edge index
    std::vector<VertexCondition> conditions;    // per vertex
    std::vector<PiecewisePotential> potentials; // per edge index

    double total_length() const;
    double min_length() const;
    double min_potential() const; // minimum over all pieces, 0 for empty

    bool operator==(const MetricGraph&) const = default;
};

/// Validates lengths, vertex conditions (Robin/Dirichlet only on degree-1
/// vertices) and potential pieces. Empty conditions/potentials default to
/// Kirchhoff everywhere / zero potential.
MetricGraph make_metric_graph(Graph g, std::vector<double> lengths,
                              std::vector<VertexCondition> conditions = {},
                              std::vector<PiecewisePotential> potentials = {});

/// Cauchy data at x = 0 of a solution of -psi'' + q psi = lambda psi on one
/// edge, in the canonical direction.
struct EdgeSolution {
    int edge = -1;
    double value0 = 0.0;
    double slope0 = 0.0;
    double lambda = 0.0;
};

struct ValueSlope {
    double value = 0.0;
    double slope = 0.0;
};

ValueSlope evaluate_edge(const MetricGraph& mg, const EdgeSolution& sol, double x);
/// Same point seen from the reversed directed edge: position L - x, negated slope.
ValueSlope evaluate_edge_reversed(const MetricGraph& mg, const EdgeSolution& sol, double x_rev);

/// Exact sup of |psi| over the edge (piece endpoints and interior extrema).
double edge_sup(const MetricGraph& mg, const EdgeSolution& sol);

double l2_norm_squared(const MetricGraph& mg, const std::vector<EdgeSolution>& sols);

/// Worst violation of the vertex conditions (continuity, Kirchhoff flux,
/// Robin/Dirichlet) over all vertices.
double vertex_residual(const MetricGraph& mg, const std::vector<EdgeSolution>& sols);

/// Value at a vertex, read from the lowest-index incident edge.
double vertex_value(const MetricGraph& mg, const std::vector<EdgeSolution>& sols, VertexId v);

struct MetricEigenpair {
    double lambda = 0.0;
    int index = 0; // 1-based global position in the spectrum
    int multiplicity = 1;
    bool multiplicity_flag = false;
    std::vector<EdgeSolution> solutions; // per edge; empty until eigenfunction() fills it
    double residual = 0.0;               // vertex residual of the filled solution
    double sup = 0.0;                    // sup norm of the filled solution

    double k() const;
};

/// Determinant of the vertex-condition system in the per-edge fundamental
/// basis (cos/sin type for lambda > q, cosh/sinh below, affine at equality),
/// row-equilibrated. Zeros, counted with nullity, are the eigenvalues.
double secular_value(const MetricGraph& mg, double lambda);

/// Dimension of the nullspace of the vertex-condition system at lambda.
int secular_nullity(const MetricGraph& mg, double lambda);

/// All eigenvalues up to lambda_max (and every negative eigenvalue above the
/// quadratic-form lower bound). Degenerate eigenvalues appear once per
/// multiplicity, consecutively, with multiplicity_flag set.
std::vector<MetricEigenpair> find_eigenvalues(const MetricGraph& mg, double lambda_max);

/// First `count` eigenvalues; extends the scan ceiling as needed.
std::vector<MetricEigenpair> find_first_eigenvalues(const MetricGraph& mg, int count);

/// Fills solutions by nullspace extraction; unit L2 norm. Throws
/// DegenerateChoice when the nullity exceeds one (use eigenfunction_basis).
MetricEigenpair eigenfunction(const MetricGraph& mg, const MetricEigenpair& pair);

/// One filled eigenpair per nullspace basis vector.
std::vector<MetricEigenpair> eigenfunction_basis(const MetricGraph& mg,
                                                 const MetricEigenpair& pair);

/// Interior zeros of the solution on its edge, ascending, endpoints excluded.
/// sup_hint is the global sup norm used to flag identically-zero edges; pass
/// a non-positive value to compare against the edge's own sup.
std::vector<double> edge_zeros(const MetricGraph& mg, const EdgeSolution& sol,
                               double sup_hint = -1.0);

struct MetricNodalCount {
    int domains = 0;
    bool vertex_zero = false; // eigenfunction vanishes at a vertex
    bool zero_edge = false;   // eigenfunction vanishes identically on an edge
    bool non_generic() const { return vertex_zero || zero_edge; }
};

/// Domain count over the nonvanishing support, with non-genericity flags.
MetricNodalCount metric_nodal_count_detail(const MetricGraph& mg, const MetricEigenpair& pair);

/// Strict variant: throws ZeroAtVertex / IdenticallyZeroEdge when the
/// eigenfunction vanishes at a vertex or on a whole edge.
int metric_nodal_count(const MetricGraph& mg, const MetricEigenpair& pair);

struct CutResult {
    MetricGraph tree;
    struct RobinDatum {
        VertexId u_plus;
        double a_plus;
        VertexId u_minus;
        double a_minus;
    };
    std::vector<RobinDatum> robin_data;
    std::vector<std::pair<int, double>> cut_points; // (edge index in g, x_j)
    std::vector<EdgeSolution> tree_solution;        // eigenfunction carried to the tree
};

/// Cuts each co-tree edge at an interior maximum of |psi| and equips the new
/// boundary vertices with the matching Robin data a_{j+-} = psi'/psi (inward
/// derivatives), so the eigenfunction solves the tree problem unchanged.
CutResult cut_to_tree(const MetricGraph& mg, const MetricEigenpair& pair,
                      const std::vector<EdgePair>& cut_edges);

struct ShootingResult {
    double root_value = 0.0; // R(lambda, root), derivative towards the root
    bool root_pole = false;  // the shooting solution vanishes at the root
    int interior_zeros = 0;  // zeros of the solution strictly inside edges
};

/// Closed-form Riccati transfer sweep on a metric tree from the leaves
/// towards a boundary root; counts the interior zeros it passes.
ShootingResult shooting_sweep(const MetricGraph& mt, double lambda, VertexId root);

/// Number of eigenvalues strictly below lambda, by oscillation counting.
int shooting_count_below(const MetricGraph& mt, double lambda, VertexId root);

/// Eigenvalues in [a, b] via bisection on shooting_count_below.
std::vector<double> shooting_eigenvalues(const MetricGraph& mt, double a, double b, VertexId root);

/// sum_j cot(k L_j); throws PoleProximity within kPoleTol of a cotangent pole.
double star_secular(const std::vector<double>& lengths, double k);

/// Dirichlet star with L_1 = 1, L_2 = 1/m and N-2 pairwise incommensurate
/// lengths slightly below 1; k = m*pi is an eigenvalue whose eigenfunction
/// lives on edges 1 and 2 only, sitting at global index (m-1)(N-1)+2.
MetricGraph build_star_counterexample(int m, int n_edges);

/// sum_e int |f'|^2 + int q |f|^2 + boundary Robin terms, with exact
/// per-piece antiderivatives. Throws DirichletForm if f is nonzero at a
/// Dirichlet vertex.
double quadratic_form_metric(const MetricGraph& mg, const std::vector<EdgeSolution>& f);

/// Quadratic-form lower bound for the spectrum (used as the scan floor).
double spectral_floor(const MetricGraph& mg);

} // namespace nodal
