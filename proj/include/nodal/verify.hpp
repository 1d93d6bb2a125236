#pragma once

#include "nodal/discrete.hpp"
#include "nodal/metric.hpp"
#include "nodal/rng.hpp"

#include <cstdint>
#include <vector>

namespace nodal {

struct EnsembleConfig {
    enum class Model { Discrete, Metric };
    Model model = Model::Discrete;
    int instance_count = 0;
    int vertex_min = 4, vertex_max = 12;
    int ell_min = 0, ell_max = 0;
    double potential_min = 0.0, potential_max = 0.0; // uniform law; equal bounds = constant
    double length_min = 0.5, length_max = 1.5;       // metric only
    int eigenvalue_budget = 10;                      // metric only
    std::uint64_t seed = 0;
};

struct VerificationRecord {
    int instance = 0;
    int n = 0;
    int ell = 0;
    int nu = 0;
    double lambda = 0.0;
    bool generic = false;
    bool lower_ok = false;
    bool upper_ok = false;
    int cut_index_m = 0; // index of the preserved eigenvalue after a cut; 0 if not run
    bool failed = false; // instance-level numerical failure
};

/// Random spanning tree by parent attachment plus ell extra edges between
/// non-adjacent vertex pairs; ell is clamped to the available pairs.
Graph random_connected_graph(CounterRng& rng, int vertex_count, int ell);

struct DiscreteInstance {
    Graph graph;
    Potential q;
};
DiscreteInstance random_discrete_instance(CounterRng& rng, const EnsembleConfig& cfg);
MetricGraph random_metric_instance(CounterRng& rng, const EnsembleConfig& cfg);

std::vector<VerificationRecord> run_discrete_ensemble(const EnsembleConfig& cfg);
std::vector<VerificationRecord> run_metric_ensemble(const EnsembleConfig& cfg);

enum class InterlacingMode {
    RankOne,   // lambda_n <= rho_n <= lambda_{n+1}
    Cut,       // mu_k <= lambda_k
    CutShifted // mu_{j-1} <= lambda_j
};

struct InterlacingAuditResult {
    bool ok = false;
    double worst_margin = 0.0; // most negative slack observed
};

InterlacingAuditResult interlacing_audit(const Vector& base, const Vector& other,
                                         InterlacingMode mode);

/// Spectrum of h restricted to the orthogonal complement of g (one linear
/// constraint), via a Householder basis of g-perp.
Vector restricted_spectrum(const Matrix& h, const Vector& g);

struct PerturbationLog {
    double magnitude = 0.0;
    int retries = 0;
};

struct DiscretePerturbation {
    Potential q;
    PerturbationLog log;
};
/// Additive q-jitter, magnitude 1e-6 escalating x10 up to 1e-3, until
/// eigenpairs 1..n all pass check_genericity.
DiscretePerturbation perturb_to_generic(const Graph& g, const Potential& q, int n,
                                        CounterRng& rng);

struct MetricPerturbation {
    MetricGraph mg;
    PerturbationLog log;
};
/// Multiplicative length jitter with the same escalation schedule.
MetricPerturbation perturb_to_generic_metric(const MetricGraph& mg, int n, CounterRng& rng);

/// Second-order finite differences (lumped P1 elements) on each edge with
/// Kirchhoff flux stencils at the vertices; full ascending spectrum of the
/// mesh operator. Test oracle only.
std::vector<double> fd_oracle(const MetricGraph& mg, double mesh_size);

/// Genericity verdict used by the metric ensembles: simple to gap tolerance,
/// no multiplicity flag, eigenfunction nonvanishing at vertices and edges.
struct MetricGenericity {
    bool simple = false;
    bool nonvanishing = false;
    bool generic = false;
};
MetricGenericity metric_genericity(const std::vector<MetricEigenpair>& pairs, int index_1based,
                                   const MetricNodalCount& detail);

} // namespace nodal
