#include <doctest.h>

#include <cmath>

#include "quasih/model.hpp"
#include "quasih/rng.hpp"
#include "test_helpers.hpp"

using namespace quasih;
using namespace quasih::test;

TEST_CASE("build_h1: direct substitutions") {
    CHECK(mat_near(build_h1(ModelParams::physical(1, 1, 0, 1, 1)),
                   CMat::mat2(1.0, 1.0, 1.0, 1.0), tol_eig));
    CHECK(mat_near(build_h1(ModelParams::physical(1, 1, 0.6, 1, 1)),
                   CMat::mat2(1.0, 1.6, 0.4, 1.0), tol_eig));
    const CMat h4 = build_h1(ModelParams::physical(1, 1, 0.6, 4, 1));
    CHECK(near(h4(0, 1), 3.2, tol_eig));
    CHECK(near(h4(1, 0), 0.8, tol_eig));
    // Hermitian exactly when kappa = 0
    CHECK(build_h1(ModelParams::physical(1, 1, 0, 1, 1)).hermitian());
    CHECK(!build_h1(ModelParams::physical(1, 1, 0.6, 1, 1)).hermitian());
}

TEST_CASE("ModelParams rejects the broken regime and bad weights") {
    CHECK_THROWS_AS(ModelParams::physical(1, 1, 1.0, 1, 1), InvalidRegime);   // kappa = g
    CHECK_THROWS_AS(ModelParams::physical(1, 1, -1.2, 1, 1), InvalidRegime);  // |kappa| > g
    CHECK_THROWS_AS(ModelParams::physical(1, 0.0, 0.0, 1, 1), InvalidRegime);
    CHECK_THROWS_AS(ModelParams::physical(0.0, 1, 0.0, 1, 1), InvalidRegime);
    CHECK_THROWS_AS(ModelParams::physical(1, 1, 0.0, 0, 1), InvalidRegime);
    CHECK_THROWS_AS(ModelParams::physical(1, 1, 0.0, 1, 0.0), InvalidRegime);
    CHECK_THROWS_AS(ModelParams(1, 1, 0.0, 1, 1.0, -2.0), InvalidRegime);
}

TEST_CASE("spectrum: omega_pm = nu +- sqrt(N) sqrt(g^2 - kappa^2)") {
    const SpectrumPair s0 = spectrum(ModelParams::physical(1, 1, 0, 1, 1));
    CHECK(near(s0.omega_plus, 2.0, tol_eig));
    CHECK(near(s0.omega_minus, 0.0, tol_eig));

    const SpectrumPair s = spectrum(ModelParams::physical(1, 1, 0.6, 1, 1));
    CHECK(near(s.omega_plus, 1.8, tol_eig));
    CHECK(near(s.omega_minus, 0.2, tol_eig));

    // similarity-symmetrized H1 has the same spectrum
    const ModelParams p = ModelParams::physical(1.3, 0.9, -0.4, 3, 1.7);
    const CMat root = psd_sqrt(metric(p).matrix);
    const HermEig e = herm_eig(root * build_h1(p) * root.inverse());
    CHECK(near(e.values[0], p.omega_minus, tol_eig));
    CHECK(near(e.values[1], p.omega_plus, tol_eig));

    // and they are the roots of det(H1 - lambda)
    const CMat h = build_h1(p);
    for (const double lam : {p.omega_minus, p.omega_plus})
        CHECK(near((h - cplx(lam, 0.0) * CMat::identity(2)).det(), 0.0, 10 * tol_eig));
}

TEST_CASE("bi_system: normalized eigenvector pairs") {
    const BiSystem b0 = bi_system(ModelParams::physical(1, 1, 0, 1, 1));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(vec_near(b0.v_plus, CVec(s, s), tol_eig));
    CHECK(vec_near(b0.v_minus, CVec(s, -s), tol_eig));
    CHECK(vec_near(b0.vstar_plus, b0.v_plus, tol_eig));
    CHECK(vec_near(b0.vstar_minus, b0.v_minus, tol_eig));

    // a1/a2 = 2 at g = 1, kappa = 0.6: v+ = (1, 0.5), v*+ = (0.5, 1)
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    const BiSystem b = bi_system(p);
    CHECK(vec_near(b.v_plus, CVec(1.0, 0.5), tol_eig));
    CHECK(vec_near(b.vstar_plus, CVec(0.5, 1.0), tol_eig));
    CHECK(near(dot(b.vstar_plus, b.v_plus), 1.0, tol_eig));
    CHECK(near(dot(b.vstar_minus, b.v_minus), 1.0, tol_eig));
    CHECK(near(dot(b.vstar_plus, b.v_minus), 0.0, tol_eig));
    CHECK(near(dot(b.vstar_minus, b.v_plus), 0.0, tol_eig));

    // eigenvector property for H1 and its adjoint
    const CMat h = build_h1(p);
    CHECK(vec_near(h * b.v_plus, cplx(p.omega_plus, 0.0) * b.v_plus, tol_eig));
    CHECK(vec_near(h * b.v_minus, cplx(p.omega_minus, 0.0) * b.v_minus, tol_eig));
    CHECK(vec_near(h.adjoint() * b.vstar_plus, cplx(p.omega_plus, 0.0) * b.vstar_plus, tol_eig));
    CHECK(vec_near(h.adjoint() * b.vstar_minus, cplx(p.omega_minus, 0.0) * b.vstar_minus,
                   tol_eig));
}

TEST_CASE("bi_system: spectral reconstruction over seeded draws") {
    CounterRng rng(33);
    for (int rep = 0; rep < 100; ++rep) {
        const double g = 0.5 + 1.5 * rng.next_double();
        const ModelParams p(0.5 + rng.next_double(), g, g * 0.9 * (2 * rng.next_double() - 1),
                            1 + static_cast<int>(4 * rng.next_double()), 1.0, 1.0);
        const BiSystem b = bi_system(p);
        const CMat rec = cplx(p.omega_plus, 0.0) * outer(b.v_plus, b.vstar_plus) +
                         cplx(p.omega_minus, 0.0) * outer(b.v_minus, b.vstar_minus);
        CHECK(mat_near(rec, build_h1(p), tol_eig));
    }
}

TEST_CASE("metric: matrix form, tags, and spectral form agree") {
    // x1 = x2 = x is diagonal
    const ModelParams pd = ModelParams::physical(1, 1, 0.6, 1, 1.4);
    const Metric2 md = metric(pd);
    CHECK(md.diagonal());
    CHECK(mat_near(md.matrix, CMat::diag2(1.4 * pd.a2 / pd.a1, 1.4 * pd.a1 / pd.a2), tol_eig));

    // kappa = 0, x = 1 is the identity
    CHECK(mat_near(metric(ModelParams::physical(1, 1, 0, 1, 1)).matrix, CMat::identity(2),
                   tol_eig));

    // general two-parameter form at x1 = 2, x2 = 1, a2/a1 = 1/2
    const ModelParams pg(1, 1, 0.6, 1, 2.0, 1.0);
    const Metric2 mg = metric(pg);
    CHECK(!mg.diagonal());
    CHECK(mat_near(mg.matrix, CMat::mat2(0.75, 0.5, 0.5, 3.0), tol_eig));

    // equals x1 |v+*><v+*| + x2 |v-*><v-*|
    const BiSystem b = bi_system(pg);
    const CMat spectral = cplx(pg.x1, 0.0) * outer(b.vstar_plus, b.vstar_plus) +
                          cplx(pg.x2, 0.0) * outer(b.vstar_minus, b.vstar_minus);
    CHECK(mat_near(mg.matrix, spectral, tol_eig));

    // strictly positive
    for (const double lam : herm_eig(mg.matrix).values) CHECK(lam > 0.0);
}

TEST_CASE("quasi_hermiticity_residual") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    CHECK(quasi_hermiticity_residual(p, metric(p)) <= tol_eig);

    Metric2 id;
    id.matrix = CMat::identity(2);
    CHECK(near(quasi_hermiticity_residual(p, id), 2.0 * 0.6, tol_eig));

    const ModelParams p4 = ModelParams::physical(1, 1, 0.6, 4, 1);
    CHECK(near(quasi_hermiticity_residual(p4, id), 2.0 * 0.6 * 2.0, tol_eig));

    const ModelParams ph = ModelParams::physical(1, 1, 0, 1, 1);
    CHECK(near(quasi_hermiticity_residual(ph, id), 0.0, tol_eig));
}

TEST_CASE("dyson_s: S^dag S = eta and h_W Hermitian with H1's spectrum") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1.3);
    const CMat s_id = dyson_s(p, Unitary2::identity());
    CHECK(mat_near(s_id, CMat::diag2(std::sqrt(1.3 * p.a2 / p.a1), std::sqrt(1.3 * p.a1 / p.a2)),
                   tol_eig));

    CounterRng rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        const Unitary2 w = random_unitary2(rng);
        const CMat s = dyson_s(p, w);
        CHECK(mat_near(s.adjoint() * s, metric(p).matrix, tol_eig));
        const CMat h = hermitian_counterpart(p, w);
        CHECK(h.hermitian(tol_eig));
        const HermEig e = herm_eig(h);
        CHECK(near(e.values[0], p.omega_minus, tol_eig));
        CHECK(near(e.values[1], p.omega_plus, tol_eig));
    }
}

TEST_CASE("propagator_h1 matches the matrix exponential") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    CHECK(mat_near(propagator_h1(p, 0.7), expm(build_h1(p), 0.7), tol_exp));
    CHECK(mat_near(propagator_h1(p, 0.0), CMat::identity(2), tol_eig));
}

TEST_CASE("random_unitary2: deterministic, valid, Haar |c|^2 moment") {
    const Unitary2 w1 = random_unitary2(1234);
    const Unitary2 w2 = random_unitary2(1234);
    CHECK(near(w1.a, w2.a, 0.0));
    CHECK(near(w1.d, w2.d, 0.0));
    CHECK(std::abs(random_unitary2(1235).a - w1.a) > 1e-6);

    CounterRng rng(99);
    double sum = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Unitary2 w = random_unitary2(rng);
        CHECK(w.constraint_residual() <= tol_eig);
        sum += std::norm(w.c);
    }
    CHECK(near(sum / 1000.0, 0.5, 0.05));
}

TEST_CASE("Unitary2 constructors and validation") {
    CHECK_THROWS_AS(Unitary2(1.0, 0.5, 0.0, 1.0), std::invalid_argument);
    const Unitary2 r = Unitary2::from_real_c(0.5);
    CHECK(near(r.c, 0.5, tol_eig));
    CHECK(near(r.d, std::sqrt(0.75), tol_eig));
    CHECK(r.constraint_residual() <= tol_eig);
    CHECK(Unitary2::diagonal(0.3, -1.2).constraint_residual() <= tol_eig);
    CHECK(Unitary2::antidiagonal(0.3, -1.2).constraint_residual() <= tol_eig);
}
