#pragma once

#include <cstdint>
#include <vector>

namespace nodal {

/// Dense row-major matrix of doubles. Small sizes only; everything here is O(n^3) at most.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

using Vector = std::vector<double>;

Vector matvec(const Matrix& a, const Vector& x);
double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
double frobenius_norm(const Matrix& a);

/// Eigensystem of a symmetric matrix via cyclic Jacobi rotations.
/// Eigenvalues ascending; eigenvectors_cols(i, n) is component i of the n-th eigenvector.
struct SymmetricEigensystem {
    Vector eigenvalues;
    Matrix eigenvectors_cols;
    double off_diagonal_residual = 0.0; // final off-diagonal Frobenius norm
};

/// Throws ConvergenceFailure if the off-diagonal norm does not reach
/// 1e-14 * ||A||_F within the sweep cap.
SymmetricEigensystem jacobi_eigensystem(Matrix a, int max_sweeps = 100);

/// Signed log-determinant via LU with partial pivoting.
/// sign == 0 marks an exactly singular pivot.
struct LogDet {
    int sign = 0;
    double log_abs = 0.0;
};
LogDet lu_logdet(Matrix a);

/// Rank and orthonormal nullspace basis via Householder QR with column pivoting.
/// Rank counts diagonal entries of R above rel_tol * |R_00|.
struct NullspaceResult {
    int rank = 0;
    std::vector<Vector> basis; // orthonormal, one vector per nullspace dimension
    double smallest_diag = 0.0; // |R| diagonal magnitude at the rank boundary
};
NullspaceResult qr_nullspace(const Matrix& a, double rel_tol);

} // namespace nodal
