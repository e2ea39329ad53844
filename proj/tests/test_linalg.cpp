#include <doctest.h>

#include "quasih/linalg.hpp"
#include "quasih/rng.hpp"
#include "test_helpers.hpp"

using namespace quasih;
using namespace quasih::test;

namespace {

CMat random_hermitian(CounterRng& rng, std::size_t dim) {
    CMat g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.next_cgauss();
    CMat h = g + g.adjoint();
    h *= cplx(0.5, 0.0);
    return h;
}

}  // namespace

TEST_CASE("herm_eig: identity and diagonal cases") {
    const HermEig id = herm_eig(CMat::identity(2));
    CHECK(near(id.values[0], 1.0, tol_eig));
    CHECK(near(id.values[1], 1.0, tol_eig));
    CHECK(near(std::abs(dot(id.vectors[0], id.vectors[1])), 0.0, tol_eig));

    const HermEig d = herm_eig(CMat::diag2(3.0, 5.0));
    CHECK(near(d.values[0], 3.0, tol_eig));
    CHECK(near(d.values[1], 5.0, tol_eig));
    CHECK(vec_near(d.vectors[0], CVec(1.0, 0.0), tol_eig));
    CHECK(vec_near(d.vectors[1], CVec(0.0, 1.0), tol_eig));
}

TEST_CASE("herm_eig: [[2, i], [-i, 2]] has eigenvalues 1 and 3") {
    // characteristic polynomial: lambda^2 - 4 lambda + 3
    const cplx i(0.0, 1.0);
    const HermEig e = herm_eig(CMat::mat2(2.0, i, -i, 2.0));
    CHECK(near(e.values[0], 1.0, tol_eig));
    CHECK(near(e.values[1], 3.0, tol_eig));
    for (int k = 0; k < 2; ++k) {
        const CVec mv = CMat::mat2(2.0, i, -i, 2.0) * e.vectors[k];
        CHECK(vec_near(mv, cplx(e.values[k], 0.0) * e.vectors[k], tol_eig));
    }
}

TEST_CASE("herm_eig: rejects non-Hermitian input and fixes the phase") {
    CHECK_THROWS_AS(herm_eig(CMat::mat2(0.0, 1.0, 0.0, 0.0)), NotHermitian);
    CounterRng rng(11);
    for (int rep = 0; rep < 25; ++rep) {
        const HermEig e = herm_eig(random_hermitian(rng, rep % 2 ? 2 : 4));
        for (const CVec& v : e.vectors) {
            std::size_t imax = 0;
            for (std::size_t k = 1; k < v.dim(); ++k)
                if (std::abs(v[k]) > std::abs(v[imax]) + 1e-15) imax = k;
            CHECK(v[imax].real() > 0.0);
            CHECK(near(v[imax].imag(), 0.0, tol_eig));
        }
    }
}

TEST_CASE("herm_eig: spectral reconstruction at both dimensions") {
    CounterRng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const CMat m = random_hermitian(rng, rep % 2 ? 2 : 4);
        const HermEig e = herm_eig(m);
        CMat rec(m.dim());
        for (std::size_t k = 0; k < m.dim(); ++k) {
            CMat proj = outer(e.vectors[k], e.vectors[k]);
            proj *= cplx(e.values[k], 0.0);
            rec += proj;
        }
        CHECK(mat_near(rec, m, tol_eig));
        for (std::size_t a = 0; a < m.dim(); ++a)
            for (std::size_t b = 0; b < m.dim(); ++b)
                CHECK(near(dot(e.vectors[a], e.vectors[b]), a == b ? 1.0 : 0.0, tol_eig));
    }
}

TEST_CASE("psd_sqrt: diagonal, identity, and metric-shaped cases") {
    CHECK(mat_near(psd_sqrt(CMat::diag2(4.0, 9.0)), CMat::diag2(2.0, 3.0), tol_eig));
    CHECK(mat_near(psd_sqrt(CMat::identity(2)), CMat::identity(2), tol_eig));

    // diagonal metric with x = 1, a1 = sqrt(1.6), a2 = sqrt(0.4)
    const double a1 = std::sqrt(1.6), a2 = std::sqrt(0.4);
    const CMat eta = CMat::diag2(a2 / a1, a1 / a2);
    CHECK(mat_near(psd_sqrt(eta), CMat::diag2(std::sqrt(a2 / a1), std::sqrt(a1 / a2)), tol_eig));

    CHECK_THROWS_AS(psd_sqrt(CMat::diag2(-1.0, 1.0)), NotPSD);
}

TEST_CASE("psd_sqrt: squares back and commutes") {
    CounterRng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t dim = rep % 2 ? 4 : 2;
        CMat g(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.next_cgauss();
        const CMat m = g.adjoint() * g;
        const CMat r = psd_sqrt(m);
        CHECK(mat_near(r * r, m, tol_eig));
        CHECK(mat_near(r * m, m * r, tol_eig));
        CHECK(r.hermitian());
    }
}

TEST_CASE("expm: trivial and diagonal cases") {
    CHECK(mat_near(expm(CMat::zero(2), 3.7), CMat::identity(2), tol_exp));
    const double wp = 1.8, wm = 0.2, t = 0.9;
    const CMat e = expm(CMat::diag2(wp, wm), t);
    CHECK(near(e(0, 0), std::polar(1.0, -t * wp), tol_exp));
    CHECK(near(e(1, 1), std::polar(1.0, -t * wm), tol_exp));
    CHECK(near(e(0, 1), 0.0, tol_exp));
}

TEST_CASE("expm: group law and unitarity for Hermitian generators") {
    CounterRng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const CMat m = random_hermitian(rng, rep % 2 ? 2 : 4);
        const double t = 100.0 * rng.next_double() - 50.0;
        const double s = 100.0 * rng.next_double() - 50.0;
        CHECK(mat_near(expm(m, t) * expm(m, s), expm(m, t + s), tol_exp));
        const CMat u = expm(m, t);
        CHECK(mat_near(u.adjoint() * u, CMat::identity(m.dim()), tol_exp));
    }
}

TEST_CASE("mat_ops: adjoint, trace, inverse") {
    const cplx i(0.0, 1.0);
    CHECK(mat_near(CMat::mat2(0.0, i, 0.0, 0.0).adjoint(), CMat::mat2(0.0, 0.0, -i, 0.0),
                   tol_eig));
    CHECK(near(CMat::diag2(0.3, 0.7).trace(), 1.0, tol_eig));

    // inverse of a unitary is its adjoint
    const double c = std::cos(0.4), s = std::sin(0.4);
    const CMat w = CMat::mat2(c, s * i, s * i, c);
    CHECK(mat_near(w * w.adjoint(), CMat::identity(2), tol_eig));
    CHECK(mat_near(w.inverse(), w.adjoint(), tol_eig));

    CHECK_THROWS_AS(CMat::mat2(1.0, 1.0, 1.0, 1.0).inverse(), Singular);
}

TEST_CASE("kron2 and outer products") {
    const CMat k = kron2(CMat::diag2(1.0, 2.0), CMat::diag2(3.0, 4.0));
    CHECK(near(k(0, 0), 3.0, tol_eig));
    CHECK(near(k(1, 1), 4.0, tol_eig));
    CHECK(near(k(2, 2), 6.0, tol_eig));
    CHECK(near(k(3, 3), 8.0, tol_eig));

    const CMat o = outer(CVec(1.0, cplx(0.0, 1.0)), CVec(1.0, 0.0));
    CHECK(near(o(1, 0), cplx(0.0, 1.0), tol_eig));
    CHECK(near(o(0, 1), 0.0, tol_eig));
}
