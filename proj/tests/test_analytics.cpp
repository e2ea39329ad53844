#include <doctest.h>

#include <cmath>
#include <numbers>

#include "quasih/analytics.hpp"
#include "quasih/quadrature.hpp"
#include "quasih/rng.hpp"
#include "test_helpers.hpp"

using namespace quasih;
using namespace quasih::test;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory demo_trajectory(double alpha, double c) {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    return {p, StateH1::from_alpha(alpha, 0.0, 0.0, p), Unitary2::from_real_c(c)};
}

}  // namespace

TEST_CASE("entropy: endpoints, maximum, interior value") {
    CHECK(near(entropy(0.5), std::log(2.0), 1e-15));
    CHECK(entropy(0.0) == 0.0);
    CHECK(entropy(1.0) == 0.0);
    CHECK(near(entropy(0.3), 0.6108643020548935, 1e-14));
    CHECK(entropy(1.0 + 0.5e-10) == 0.0);  // clamped inside the tolerance band
    CHECK_THROWS_AS(entropy(1.2), OutOfRange);
    CHECK_THROWS_AS(entropy(-0.1), OutOfRange);
}

TEST_CASE("entropy_curve: stationary family is constant ln 2") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    const Trajectory stat{p, StateH1::from_alpha(0.5, 0.2, 0.2, p), Unitary2::identity()};
    const EntropyCurve c = entropy_curve(stat, Side::NonHermitian, 128);
    for (const double v : c.values) CHECK(near(v, std::log(2.0), 1e-12));
    CHECK(estimate_period(synthetic_entropy_curve(0.5, 0.0, p.omega, 1024)).stationary);
    CHECK_THROWS_AS(entropy_curve(stat, Side::NonHermitian, 32), std::invalid_argument);
}

TEST_CASE("entropy_curve: figure-style synthetic curves") {
    // Q0 = 0.5, Delta = 0.2: min value E(0.3) attained 4 times over two periods
    const EntropyCurve c1 = synthetic_entropy_curve(0.5, 0.2, 0.8, 1024);
    const double vmin = *std::min_element(c1.values.begin(), c1.values.end());
    CHECK(near(vmin, 0.6108643020548935, 1e-9));
    CHECK(count_local_minima(c1) == 4);

    // Q0 = 0.6, Delta = 0.2: two local minima per period, single period per cycle
    CHECK(count_local_minima(synthetic_entropy_curve(0.6, 0.2, 0.8, 1024)) == 4);

    // Q0 = 0.8, Delta = 0.2: only one local minimum per population period
    CHECK(count_local_minima(synthetic_entropy_curve(0.8, 0.2, 0.8, 1024)) == 2);
}

TEST_CASE("estimate_period: doubling classification") {
    const double omega = demo_trajectory(0.3, 0.5).params.omega;

    // non-Hermitian entropy: period pi/(2 omega) regardless of initial data
    const EntropyCurve ep = entropy_curve(demo_trajectory(0.3, 0.5), Side::NonHermitian, 1024);
    const PeriodEstimate pp = estimate_period(ep);
    CHECK(!pp.stationary);
    CHECK(near(pp.period / (kPi / (2.0 * omega)), 1.0, 1e-6));

    // Hermitian entropy with Re(AB*) Re(cd*) != 0: period pi/omega
    const EntropyCurve eq = entropy_curve(demo_trajectory(0.3, 0.5), Side::Hermitian, 1024);
    const PeriodEstimate pq = estimate_period(eq);
    CHECK(near(pq.period / (kPi / omega), 1.0, 1e-6));
    CHECK(near(pq.period / pp.period, 2.0, 1e-4));

    // Re(cd*) = 0 keeps the short period
    const EntropyCurve e0 = entropy_curve(demo_trajectory(0.3, 0.0), Side::Hermitian, 1024);
    CHECK(near(estimate_period(e0).period / (kPi / (2.0 * omega)), 1.0, 1e-6));

    CHECK_THROWS_AS(estimate_period(synthetic_entropy_curve(0.6, 0.2, 1.0, 256)),
                    InsufficientSamples);
}

TEST_CASE("is_disentangled") {
    CHECK(is_disentangled(1.0, 0.0));
    CHECK(!is_disentangled(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)));
    CHECK_THROWS_AS(is_disentangled(0.0, 0.0), ZeroState);
}

TEST_CASE("disentanglement_times: product start meets the grid of quarter periods") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    const Trajectory tz{p, StateH1::from_alpha(0.0, 0, 0, p), Unitary2::identity()};
    const double horizon = 4.0 * kPi / p.omega;
    const DisentanglementReport rep = disentanglement_times(tz, Side::NonHermitian, horizon);
    CHECK(rep.classification == EntanglementClass::PeriodicTouch);

    // A(t) = 0 at omega t in pi Z
    REQUIRE(rep.a_zero_times.size() >= 4);
    for (std::size_t k = 0; k < rep.a_zero_times.size(); ++k)
        CHECK(near(rep.a_zero_times[k] * p.omega, kPi * static_cast<double>(k), 1e-8));
    // B(t) = 0 at the odd quarter periods
    for (std::size_t k = 0; k < rep.b_zero_times.size(); ++k)
        CHECK(near(rep.b_zero_times[k] * p.omega, kPi / 2.0 + kPi * static_cast<double>(k),
                   1e-8));

    // every reported root annihilates the product A(t) B(t)
    for (const double t : rep.all_times) {
        const auto [at, bt] = evolve_amplitudes(tz, t);
        CHECK(std::abs(at * bt) < 1e-10);
    }
}

TEST_CASE("disentanglement_times: real pair is entangled forever") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    const Trajectory tr{p, StateH1::from_alpha(0.3, 0, 0, p), Unitary2::identity()};
    const double horizon = 4.0 * kPi / p.omega;
    const DisentanglementReport rep = disentanglement_times(tr, Side::NonHermitian, horizon);
    CHECK(rep.classification == EntanglementClass::AlwaysEntangled);
    CHECK(rep.all_times.empty());

    // min over two periods of |A(t) B(t)| stays away from zero
    double amin = 1e300;
    for (int i = 0; i < 2048; ++i) {
        const auto [at, bt] = evolve_amplitudes(tr, horizon * i / 2048.0);
        amin = std::min(amin, std::abs(at * bt));
    }
    CHECK(amin > 1e-3);
}

TEST_CASE("disentanglement_times: Re(AB*) = 0 touches periodically") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    // phases pi/2 apart make AB* purely imaginary
    const Trajectory ti{p, StateH1::from_alpha(0.4, kPi / 2.0, 0.0, p), Unitary2::identity()};
    const double horizon = 4.0 * kPi / p.omega;
    const DisentanglementReport rep = disentanglement_times(ti, Side::NonHermitian, horizon);
    CHECK(rep.classification == EntanglementClass::PeriodicTouch);
    REQUIRE(!rep.all_times.empty());
    for (const double t : rep.all_times) {
        const auto [at, bt] = evolve_amplitudes(ti, t);
        CHECK(std::abs(at * bt) < 1e-10);
    }

    // the Hermitian side supports the same analysis
    CounterRng rng(10);
    const Trajectory th{p, ti.initial, random_unitary2(rng)};
    const DisentanglementReport reph = disentanglement_times(th, Side::Hermitian, horizon);
    for (const double t : reph.a_zero_times) {
        const auto [wa, wb] = hermitian_state(th, t);
        CHECK(std::abs(wa) < 1e-10);
    }
    for (const double t : reph.b_zero_times) {
        const auto [wa, wb] = hermitian_state(th, t);
        CHECK(std::abs(wb) < 1e-10);
    }
}

TEST_CASE("disentangling_w: produces a product state") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1.3);
    CounterRng rng(14);
    for (int rep = 0; rep < 25; ++rep) {
        const StateH1 s = StateH1::from_alpha(0.05 + 0.9 * rng.next_double(),
                                              2 * kPi * rng.next_double(),
                                              2 * kPi * rng.next_double(), p);
        const Trajectory traj{p, s, Unitary2::identity()};
        const Unitary2 w = disentangling_w(traj);
        CHECK(w.constraint_residual() <= tol_eig);
        const Trajectory tw{p, s, w};
        const auto [wa, wb] = hermitian_state(tw, 0.0);
        CHECK(is_disentangled(wa, wb));
    }

    // maximally symmetric state: all magnitudes 1/sqrt(2)
    const StateH1 sym = StateH1::from_alpha(0.5, 0.0, 0.0, p);
    const Unitary2 w = disentangling_w({p, sym, Unitary2::identity()});
    for (const cplx e : {w.a, w.b, w.c, w.d})
        CHECK(near(std::abs(e), 1.0 / std::sqrt(2.0), tol_norm));

    const StateH1 prod = StateH1::from_alpha(1.0, 0.0, 0.0, p);
    CHECK_THROWS_AS(disentangling_w({p, prod, Unitary2::identity()}), AlreadyProduct);
}

TEST_CASE("averaged_state: closed form and quadrature") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1.2);
    const double x = 1.2;

    // Re(AB*) = 0: z = 0 and q0 = 1/2 (maximally mixed on the populated block)
    const Trajectory tsep{p, StateH1::from_alpha(0.3, kPi / 2.0, 0.0, p),
                          Unitary2::from_real_c(0.6)};
    const AveragedState a0 = averaged_state(tsep);
    CHECK(near(a0.q0, 0.5, 1e-12));
    CHECK(near(std::abs(a0.z), 0.0, 1e-12));

    // c = 0, d = 1: |z| = x |Re(AB*)|
    const StateH1 s = StateH1::from_alpha(0.35, 0.4, -0.3, p);
    const Trajectory tdiag{p, s, Unitary2::identity()};
    const AveragedState a1 = averaged_state(tdiag);
    const double re = (s.A * std::conj(s.B)).real();
    CHECK(near(std::abs(a1.z), x * std::abs(re), 1e-12));
    CHECK(near(a1.q0, 0.5, 1e-12));

    // Simpson quadrature of rho_hw over one period reproduces (q0, z)
    CounterRng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const Trajectory traj{p, StateH1::from_alpha(0.05 + 0.9 * rng.next_double(),
                                                     2 * kPi * rng.next_double(),
                                                     2 * kPi * rng.next_double(), p),
                              random_unitary2(rng)};
        const AveragedState avg = averaged_state(traj);
        const double period = kPi / p.omega;
        auto entry = [&](std::size_t i, std::size_t j, bool real_part) {
            return simpson(
                       [&](double t) {
                           const cplx v = rho_hw(traj, t)(i, j);
                           return real_part ? v.real() : v.imag();
                       },
                       0.0, period, 2048) / period;
        };
        CHECK(near(entry(1, 1, true), avg.q0, tol_quad));          // e_B average
        CHECK(near(entry(0, 0, true), 1.0 - avg.q0, tol_quad));    // e_S average
        CHECK(near(cplx(entry(0, 1, true), entry(0, 1, false)), avg.z, tol_quad));
    }
}

TEST_CASE("concurrence: closed form, bounds, W-invariance, Wootters oracle") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1.1);
    const double x = 1.1;
    CounterRng rng(31);

    const StateH1 s = StateH1::from_alpha(0.3, 0.9, 0.2, p);
    const double expected = 2.0 * x * std::abs((s.A * std::conj(s.B)).real());

    double cmin = 2.0, cmax = -1.0;
    for (int rep = 0; rep < 200; ++rep) {
        const Trajectory traj{p, s, random_unitary2(rng)};
        const double c = concurrence(averaged_state(traj));
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    CHECK(cmax - cmin <= 1e-12);
    CHECK(near(cmin, expected, 1e-12));

    // Wootters oracle agrees at W = identity (q0 = 1/2 there)
    const AveragedState aid = averaged_state({p, s, Unitary2::identity()});
    CHECK(near(wootters_concurrence(embed_two_qubit(aid)), concurrence(aid), 1e-10));

    // for generic W the oracle returns 2|z| = sqrt(C^2 - (1-2q0)^2) exactly
    for (int rep = 0; rep < 20; ++rep) {
        const AveragedState avg = averaged_state({p, s, random_unitary2(rng)});
        const double woot = wootters_concurrence(embed_two_qubit(avg));
        CHECK(near(woot, 2.0 * std::abs(avg.z), 1e-10));
        const double c = concurrence(avg);
        CHECK(near(woot * woot + (1.0 - 2.0 * avg.q0) * (1.0 - 2.0 * avg.q0), c * c, 1e-10));
    }

    // separable iff Re(AB*) = 0; maximally entangled at Im(AB*) = 0, |A| = (a1/a2)|B|
    const AveragedState asep =
        averaged_state({p, StateH1::from_alpha(0.4, kPi / 2.0, 0.0, p), random_unitary2(rng)});
    CHECK(near(concurrence(asep), 0.0, 1e-12));
    const AveragedState amax =
        averaged_state({p, StateH1::from_alpha(0.5, 0.7, 0.7, p), random_unitary2(rng)});
    CHECK(near(concurrence(amax), 1.0, 1e-12));
}

TEST_CASE("wootters_concurrence: canonical two-qubit states") {
    // Bell state (|01> + |10>)/sqrt(2) has concurrence 1
    CMat bell(4);
    bell(1, 1) = bell(2, 2) = bell(1, 2) = bell(2, 1) = 0.5;
    CHECK(near(wootters_concurrence(bell), 1.0, 1e-12));

    // classical mixture of |01> and |10| is separable
    CMat mix(4);
    mix(1, 1) = 0.4;
    mix(2, 2) = 0.6;
    CHECK(near(wootters_concurrence(mix), 0.0, 1e-12));
}

TEST_CASE("classify_w") {
    const WEquivalenceClass w1 = classify_w(Unitary2::identity());
    CHECK(w1.variant == WClass::EqualStates);
    CHECK(near(w1.phases->first, 0.0, tol_eig));
    CHECK(near(w1.phases->second, 0.0, tol_eig));

    const WEquivalenceClass w2 = classify_w(Unitary2::antidiagonal(0.0, 0.0));
    CHECK(w2.variant == WClass::EqualEntropies);

    const WEquivalenceClass w3 = classify_w(Unitary2::from_real_c(0.5));
    CHECK(w3.variant == WClass::Generic);

    // generic W separates the two entropy curves at the demo parameters
    const Trajectory demo = demo_trajectory(0.3, 0.5);
    double gap = 0.0;
    for (int i = 0; i < 512; ++i) {
        const double t = 2.0 * kPi / demo.params.omega * i / 512.0;
        gap = std::max(gap, std::abs(entropy(population_p(demo, t)) -
                                     entropy(population_q(demo, t))));
    }
    CHECK(gap > 0.01);
}

TEST_CASE("classify_w equivalences hold pointwise") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    CounterRng rng(66);
    for (int rep = 0; rep < 20; ++rep) {
        const StateH1 s = StateH1::from_alpha(0.05 + 0.9 * rng.next_double(),
                                              2 * kPi * rng.next_double(),
                                              2 * kPi * rng.next_double(), p);
        const Unitary2 wd = Unitary2::diagonal(2 * kPi * rng.next_double(),
                                               2 * kPi * rng.next_double());
        const Unitary2 wa = Unitary2::antidiagonal(2 * kPi * rng.next_double(),
                                                   2 * kPi * rng.next_double());
        REQUIRE(classify_w(wd).variant == WClass::EqualStates);
        REQUIRE(classify_w(wa).variant == WClass::EqualEntropies);
        const Trajectory td{p, s, wd};
        const Trajectory ta{p, s, wa};
        for (int i = 0; i < 20; ++i) {
            const double t = 6.0 * rng.next_double();
            CHECK(near(population_q(td, t), population_p(td, t), 1e-10));
            CHECK(near(entropy(population_q(ta, t)), entropy(population_p(ta, t)), 1e-10));
        }
    }
}

TEST_CASE("product metrics: detection and factorization") {
    // diag(2, 3) factors with lambda_s = 1, lambda_b = diag(2, 3)
    Metric2 eta;
    eta.matrix = CMat::diag2(2.0, 3.0);
    CHECK(is_product_metric(eta));
    const MetricFactorization f = factor_metric(eta);
    CHECK(near(f.lambda_s(0, 0) * f.lambda_b(0, 0), 2.0, tol_eig));
    CHECK(near(f.lambda_s(1, 1) * f.lambda_b(1, 1), 3.0, tol_eig));
    CHECK(f.offblock_leakage <= 1e-12);
    CHECK(f.restriction_residual <= 1e-12);

    // model metric with x1 != x2 is not of product form
    const ModelParams pg(1, 1, 0.6, 1, 2.0, 1.0);
    CHECK(!is_product_metric(metric(pg)));
    CHECK_THROWS_AS(factor_metric(metric(pg)), NotDiagonal);

    // random diagonal metrics embed exactly
    CounterRng rng(70);
    for (int rep = 0; rep < 25; ++rep) {
        Metric2 m;
        m.matrix = CMat::diag2(0.1 + 3.0 * rng.next_double(), 0.1 + 3.0 * rng.next_double());
        const MetricFactorization g = factor_metric(m);
        CHECK(g.offblock_leakage <= 1e-12);
        CHECK(g.restriction_residual <= 1e-12);
    }
}

TEST_CASE("entanglement is conserved exactly by diagonal and anti-diagonal W") {
    const ModelParams p = ModelParams::physical(1, 1, 0.6, 1, 1);
    CounterRng rng(81);
    for (int rep = 0; rep < 30; ++rep) {
        const bool product = rep % 3 == 0;
        const StateH1 s = product ? StateH1::from_alpha(rep % 2 ? 0.0 : 1.0, 0.0, 0.0, p)
                                  : StateH1::from_alpha(0.05 + 0.9 * rng.next_double(),
                                                        2 * kPi * rng.next_double(),
                                                        2 * kPi * rng.next_double(), p);
        const Unitary2 w = rep % 2 ? Unitary2::diagonal(2 * kPi * rng.next_double(),
                                                        2 * kPi * rng.next_double())
                                   : Unitary2::antidiagonal(2 * kPi * rng.next_double(),
                                                            2 * kPi * rng.next_double());
        const auto [wa, wb] = hermitian_state({p, s, w}, 0.0);
        CHECK(is_disentangled(s.A, s.B) == is_disentangled(wa, wb));
    }
}
