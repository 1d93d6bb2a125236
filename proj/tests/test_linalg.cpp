#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nodal/linalg.hpp"
#include "nodal/rng.hpp"

#include <cmath>

using namespace nodal;

namespace {

Matrix random_symmetric(CounterRng& rng, int n) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double x = rng.uniform(-1.0, 1.0);
            a(i, j) = x;
            a(j, i) = x;
        }
    return a;
}

} // namespace

TEST_CASE("jacobi: diagonal matrix returns its sorted diagonal") {
    Matrix a(3, 3);
    a(0, 0) = 5.0;
    a(1, 1) = -2.0;
    a(2, 2) = 1.0;
    const SymmetricEigensystem es = jacobi_eigensystem(a);
    CHECK(es.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(es.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(es.eigenvalues[2] == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("jacobi: eigen property and orthogonality on random symmetric matrices") {
    CounterRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(2, 12);
        const Matrix a = random_symmetric(rng, n);
        const SymmetricEigensystem es = jacobi_eigensystem(a);
        const double scale = frobenius_norm(a);
        for (int col = 0; col < n; ++col) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v[i] = es.eigenvectors_cols(i, col);
            Vector r = matvec(a, v);
            for (int i = 0; i < n; ++i) r[i] -= es.eigenvalues[col] * v[i];
            CHECK(norm2(r) <= 1e-12 * std::max(1.0, scale));
            CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
            for (int col2 = col + 1; col2 < n; ++col2) {
                double d = 0.0;
                for (int i = 0; i < n; ++i) d += v[i] * es.eigenvectors_cols(i, col2);
                CHECK(std::fabs(d) <= 1e-11);
            }
        }
        // trace and Frobenius invariants
        double trace = 0.0, fro2 = 0.0, sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += a(i, i);
            sum += es.eigenvalues[i];
            sum2 += es.eigenvalues[i] * es.eigenvalues[i];
        }
        fro2 = scale * scale;
        CHECK(sum == doctest::Approx(trace).epsilon(1e-11));
        CHECK(sum2 == doctest::Approx(fro2).epsilon(1e-11));
    }
}

TEST_CASE("lu_logdet: 2x2 and singular cases") {
    Matrix a(2, 2);
    a(0, 0) = 3.0;
    a(0, 1) = 1.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;
    const LogDet d = lu_logdet(a);
    CHECK(d.sign == 1);
    CHECK(std::exp(d.log_abs) == doctest::Approx(10.0).epsilon(1e-13));

    Matrix s(2, 2);
    s(0, 0) = 1.0;
    s(0, 1) = 2.0;
    s(1, 0) = 2.0;
    s(1, 1) = 4.0;
    CHECK(lu_logdet(s).sign == 0);
}

TEST_CASE("lu_logdet: sign tracks permutations") {
    Matrix a(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0; // det = -1
    const LogDet d = lu_logdet(a);
    CHECK(d.sign == -1);
    CHECK(std::exp(d.log_abs) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qr_nullspace: detects rank and returns a null vector") {
    // rank-2 3x3 matrix with known nullspace direction (1, 1, -1)
    Matrix a(3, 3);
    const double rows[2][3] = {{1.0, 0.0, 1.0}, {0.0, 2.0, 2.0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = rows[i][j];
    for (int j = 0; j < 3; ++j) a(2, j) = rows[0][j] + rows[1][j];
    const NullspaceResult ns = qr_nullspace(a, 1e-10);
    CHECK(ns.rank == 2);
    REQUIRE(ns.basis.size() == 1);
    const Vector r = matvec(a, ns.basis[0]);
    CHECK(norm2(r) <= 1e-12);
}

TEST_CASE("qr_nullspace: full-rank matrix has empty basis") {
    CounterRng rng(3);
    Matrix a = random_symmetric(rng, 6);
    for (int i = 0; i < 6; ++i) a(i, i) += 10.0;
    const NullspaceResult ns = qr_nullspace(a, 1e-10);
    CHECK(ns.rank == 6);
    CHECK(ns.basis.empty());
}

TEST_CASE("counter rng is reproducible and in range") {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform(-2.0, 3.0);
        CHECK(x == b.uniform(-2.0, 3.0));
        CHECK(x >= -2.0);
        CHECK(x < 3.0);
    }
    CounterRng c(43);
    CHECK(c.next_u64() != CounterRng(42).next_u64());
}
