#pragma once

#include "nodal/discrete.hpp"
#include "nodal/graph.hpp"

#include <vector>

namespace nodal {

namespace tol {
inline constexpr double kPoleTol = 1e-12; // guard band around R_v = 0 in sweep arithmetic
}

/// Value of one Riccati variable: finite, or an explicit pole marker
/// (never a floating infinity).
struct RiccatiValue {
    double value = 0.0;
    bool pole = false;
};

/// One bottom-up evaluation of R_v = q_v - lambda - sum_{w child of v} 1/R_w.
struct RiccatiSweep {
    double lambda = 0.0;
    std::vector<RiccatiValue> r; // indexed by vertex; r[root] repeats root_value
    double root_value = 0.0;
    int n_less = 0; // N_r^<: negative finite R_v over non-root vertices
    bool valid = true; // no non-root |R_v| within kPoleTol of a pole
};

RiccatiSweep riccati_sweep(const RootedTree& t, const Potential& q, double lambda);

/// Eigenvalues of H strictly below lambda, by Sylvester inertia of the sweep
/// pivots (negative R_v count including the root). Nudges lambda slightly off
/// poles; the nudge is deterministic.
int eigencount_below(const RootedTree& t, const Potential& q, double lambda);

/// All eigenvalues of H in [a,b]. Grid scan with per-cell inertia counts,
/// subdivision of cells holding more than one eigenvalue, then bisection on
/// the sign of root_value within each single-eigenvalue bracket.
std::vector<double> locate_eigenvalues(const RootedTree& t, const Potential& q, double a,
                                       double b);

/// nu(lambda_n) = N_r^< + 1; cross-checked at lambda_n +- 1e-6 * scale.
int nodal_count_via_riccati(const RootedTree& t, const Potential& q, double lambda_n);

/// Reconstructs the eigenvector from a sweep with root_value ~ 0:
/// psi_root = 1, psi_v = psi_parent / R_v going down the tree. Unit norm,
/// sign-normalized like eigen_decompose.
Vector eigenvector_from_riccati(const RootedTree& t, const RiccatiSweep& sweep);

} // namespace nodal
