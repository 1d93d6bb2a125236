#pragma once

#include "nodal/graph.hpp"
#include "nodal/linalg.hpp"

#include <vector>

namespace nodal {

/// Vertex potential q_v. Must cover every vertex of the target graph.
struct Potential {
    Vector q;
};

namespace tol {
// Scale factors for the genericity checks; both scale-invariant. Defaults per
// the module contract; the CLI exposes overrides.
inline double kGapTolScale = 1e-8;    // * max(1, ||H||_F)
inline double kVanishTolScale = 1e-8; // * ||psi||_inf
} // namespace tol

struct Spectrum {
    Vector eigenvalues;                 // ascending
    std::vector<Vector> eigenvectors;   // unit norm, sign-normalized
    double residual_bound = 0.0;        // max_n ||H psi - lambda psi||_2
    double h_norm = 0.0;                // ||H||_F, for scale-relative tolerances
};

struct GenericityReport {
    int n = 0; // 1-based index
    bool simple = false;
    bool nonvanishing = false;
    bool generic = false;
};

struct NodalReport {
    int n = 0;
    double lambda = 0.0;
    int nu = 0;
    int ell = 0;
    bool lower_ok = false;
    bool upper_ok = false;
    bool generic = false;
};

struct SurgeryResult {
    Graph gamma;
    Potential p;
    double alpha = 0.0;
};

/// H_{jk} = -1 for j~k, q_j on the diagonal, 0 otherwise.
Matrix assemble_hamiltonian(const Graph& g, const Potential& q);

/// Full eigensystem of a symmetric matrix (cyclic Jacobi). Deterministic
/// ordering; the first eigenvector component above vanish_tol is positive.
Spectrum eigen_decompose(const Matrix& h);

/// Sign of each entry of psi; throws ZeroSign when an entry is below
/// kVanishTolScale * ||psi||_inf.
SignPattern sign_of(const Vector& psi);

/// Flips psi so that its first component above vanish_tol is positive.
void normalize_sign_convention(Vector& psi);

int nodal_count(const Graph& g, const Vector& psi);

/// Strong-domain count over the nonvanishing support (informational for
/// non-generic eigenvectors).
int nodal_count_support(const Graph& g, const Vector& psi);

GenericityReport check_genericity(const Spectrum& s, int n);

std::vector<NodalReport> verify_bounds(const Graph& g, const Potential& q);

/// Deletes edge (v1,v2) and compensates the endpoints of the cut with
/// alpha = phi_{v2}/phi_{v1}: p_{v1} = q_{v1} - alpha, p_{v2} = q_{v2} - 1/alpha.
/// phi stays an eigenvector of the cut operator with unchanged eigenvalue.
SurgeryResult cut_with_surgery(const Graph& g, const Potential& q, const Vector& phi,
                               VertexId v1, VertexId v2);

double quadratic_form(const Graph& g, const Potential& q, const Vector& psi);

/// Gershgorin enclosure of the spectrum of assemble_hamiltonian(g, q).
std::pair<double, double> gershgorin_interval(const Graph& g, const Potential& q);

} // namespace nodal
