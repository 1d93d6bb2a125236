#include "nodal/linalg.hpp"

#include "nodal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nodal {

Vector matvec(const Matrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymmetricEigensystem jacobi_eigensystem(Matrix a, int max_sweeps) {
    const int n = a.rows();
    Matrix v = Matrix::identity(n);
    const double scale = std::max(frobenius_norm(a), 1e-300);
    const double target = 1e-14 * scale;

    if (n == 1) return {{a(0, 0)}, v, 0.0};

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-16 * scale) continue;
                converged = false;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    const double off = off_diagonal_norm(a);
    if (off > target && !converged)
        throw ConvergenceFailure("jacobi_eigensystem: off-diagonal norm " + std::to_string(off) +
                                 " above target after sweep cap");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) < a(j, j); });

    SymmetricEigensystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors_cols = Matrix(n, n);
    for (int col = 0; col < n; ++col) {
        out.eigenvalues[col] = a(order[col], order[col]);
        for (int i = 0; i < n; ++i) out.eigenvectors_cols(i, col) = v(i, order[col]);
    }
    out.off_diagonal_residual = off;
    return out;
}

LogDet lu_logdet(Matrix a) {
    const int n = a.rows();
    LogDet r{1, 0.0};
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::fabs(a(i, k)) > best) {
                best = std::fabs(a(i, k));
                piv = i;
            }
        }
        if (best == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            r.sign = -r.sign;
        }
        const double pivot = a(k, k);
        if (pivot < 0.0) r.sign = -r.sign;
        r.log_abs += std::log(std::fabs(pivot));
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / pivot;
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return r;
}

NullspaceResult qr_nullspace(const Matrix& a_in, double rel_tol) {
    // Householder QR with column pivoting on a copy; nullspace from the
    // triangular factor by back substitution over the trailing columns.
    Matrix a = a_in;
    const int m = a.rows(), n = a.cols();
    const int kmax = std::min(m, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> colnorm2(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) colnorm2[j] += a(i, j) * a(i, j);

    double r00 = 0.0;
    int rank = 0;
    double smallest = 0.0;
    for (int k = 0; k < kmax; ++k) {
        int best = k;
        for (int j = k + 1; j < n; ++j)
            if (colnorm2[j] > colnorm2[best]) best = j;
        if (best != k) {
            for (int i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
            std::swap(colnorm2[k], colnorm2[best]);
            std::swap(perm[k], perm[best]);
        }
        double sigma = 0.0;
        for (int i = k; i < m; ++i) sigma += a(i, k) * a(i, k);
        sigma = std::sqrt(sigma);
        if (k == 0) r00 = std::max(sigma, 1e-300);
        smallest = sigma;
        if (sigma <= rel_tol * r00) break;
        ++rank;
        // Householder vector stored in place below the diagonal.
        const double alpha = (a(k, k) >= 0.0) ? -sigma : sigma;
        std::vector<double> w(m - k, 0.0);
        w[0] = a(k, k) - alpha;
        for (int i = k + 1; i < m; ++i) w[i - k] = a(i, k);
        double wnorm2 = 0.0;
        for (double x : w) wnorm2 += x * x;
        a(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) a(i, k) = 0.0;
        if (wnorm2 > 0.0) {
            for (int j = k + 1; j < n; ++j) {
                double proj = 0.0;
                for (int i = k; i < m; ++i) proj += w[i - k] * a(i, j);
                const double f = 2.0 * proj / wnorm2;
                for (int i = k; i < m; ++i) a(i, j) -= f * w[i - k];
            }
        }
        for (int j = k + 1; j < n; ++j) {
            colnorm2[j] -= a(k, j) * a(k, j);
            if (colnorm2[j] < 0.0) colnorm2[j] = 0.0;
        }
    }

    NullspaceResult out;
    out.rank = rank;
    out.smallest_diag = smallest;
    for (int j = rank; j < n; ++j) {
        Vector y(rank, 0.0);
        for (int i = rank - 1; i >= 0; --i) {
            double s = a(i, j);
            for (int t = i + 1; t < rank; ++t) s -= a(i, t) * y[t];
            y[i] = s / a(i, i);
        }
        Vector x(n, 0.0);
        x[perm[j]] = 1.0;
        for (int i = 0; i < rank; ++i) x[perm[i]] = -y[i];
        // Gram-Schmidt against basis vectors found so far.
        for (const Vector& b : out.basis) {
            const double p = dot(b, x);
            for (int i = 0; i < n; ++i) x[i] -= p * b[i];
        }
        const double nx = norm2(x);
        if (nx > 1e-12) {
            for (double& v : x) v /= nx;
            out.basis.push_back(std::move(x));
        }
    }
    return out;
}

} // namespace nodal
