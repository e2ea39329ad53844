#include "quasih/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "quasih/analytics.hpp"
#include "quasih/dynamics.hpp"
#include "quasih/dyson.hpp"
#include "quasih/model.hpp"
#include "quasih/quadrature.hpp"
#include "quasih/rng.hpp"

namespace quasih {

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams draw_params(CounterRng& rng, bool allow_general_metric) {
    const double g = 0.5 + 1.5 * rng.next_double();
    const double kappa = g * 0.9 * (2.0 * rng.next_double() - 1.0);
    const double nu = 0.5 + 1.5 * rng.next_double();
    const int n = 1 + static_cast<int>(rng.next_double() * 4.0);
    const double x1 = 0.5 + 1.5 * rng.next_double();
    const double x2 = allow_general_metric && rng.next_double() < 0.5
                          ? 0.5 + 1.5 * rng.next_double()
                          : x1;
    return {nu, g, kappa, n, x1, x2};
}

StateH1 draw_state(CounterRng& rng, const ModelParams& p) {
    const double alpha = 0.02 + 0.96 * rng.next_double();
    const double f1 = 2.0 * kPi * rng.next_double();
    const double f2 = 2.0 * kPi * rng.next_double();
    return StateH1::from_alpha(alpha, f1, f2, p);
}

// Generic in the period-classification sense: Re(AB*), Re(cd*) away from 0.
Trajectory draw_generic_trajectory(CounterRng& rng) {
    const ModelParams p = draw_params(rng, false);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const StateH1 s = draw_state(rng, p);
        const Unitary2 w = random_unitary2(rng);
        if (std::abs((s.A * std::conj(s.B)).real()) <= 0.05) continue;
        if (std::abs((w.c * std::conj(w.d)).real()) <= 0.05) continue;
        return {p, s, w};
    }
    throw std::runtime_error("draw_generic_trajectory: rejection sampling failed");
}

CMat random_hermitian(CounterRng& rng, std::size_t dim) {
    CMat g(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.next_cgauss();
    CMat h = g + g.adjoint();
    h *= cplx(0.5, 0.0);
    return h;
}

CMat random_positive2(CounterRng& rng) {
    CMat g(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = rng.next_cgauss();
    return g.adjoint() * g + cplx(0.05, 0.0) * CMat::identity(2);
}

// Moderate norms for the finite-difference-verified dyson checks.
ModelParams draw_params_mild(CounterRng& rng) {
    const double g = 0.5 + rng.next_double();
    const double kappa = g * 0.8 * (2.0 * rng.next_double() - 1.0);
    const double nu = 0.5 + rng.next_double();
    return {nu, g, kappa, 1, 1.0, 1.0};
}

CMat random_positive2_mild(CounterRng& rng) {
    CMat g(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = 0.5 * rng.next_cgauss();
    return g.adjoint() * g + cplx(0.3, 0.0) * CMat::identity(2);
}

struct Check {
    std::string name;
    double tolerance;
    std::function<double(CounterRng&, std::string&)> worst_residual;
};

// ---------------------------------------------------------------- linalg ----

double chk_spectral_reconstruction(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t dim = rep % 2 ? 4 : 2;
        const CMat m = random_hermitian(rng, dim);
        const HermEig eig = herm_eig(m);
        CMat rec(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            CMat proj = outer(eig.vectors[k], eig.vectors[k]);
            proj *= cplx(eig.values[k], 0.0);
            rec += proj;
        }
        worst = std::max(worst, (rec - m).max_norm());
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                const cplx d = dot(eig.vectors[a], eig.vectors[b]);
                worst = std::max(worst, std::abs(d - (a == b ? 1.0 : 0.0)));
            }
    }
    return worst;
}

double chk_psd_sqrt(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t dim = rep % 2 ? 4 : 2;
        CMat g(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.next_cgauss();
        const CMat m = g.adjoint() * g;
        const CMat r = psd_sqrt(m);
        worst = std::max(worst, (r * r - m).max_norm());
        worst = std::max(worst, (r * m - m * r).max_norm());
    }
    return worst;
}

double chk_expm_group(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 15; ++rep) {
        const CMat m = rep % 2 ? random_hermitian(rng, rep % 4 == 1 ? 2 : 4)
                               : build_h1(draw_params(rng, false));
        const double t = 100.0 * rng.next_double() - 50.0;
        const double s = 100.0 * rng.next_double() - 50.0;
        worst = std::max(worst, (expm(m, t) * expm(m, s) - expm(m, t + s)).max_norm());
    }
    return worst;
}

double chk_expm_unitarity(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const CMat m = random_hermitian(rng, rep % 2 ? 2 : 4);
        for (const double t : {0.3, 7.0, 50.0}) {
            const CMat u = expm(m, t);
            worst = std::max(worst, (u.adjoint() * u - CMat::identity(m.dim())).max_norm());
        }
    }
    return worst;
}

// ----------------------------------------------------------------- model ----

double chk_metric_positive(CounterRng& rng, std::string&) {
    double min_eig = 1e300;
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p = draw_params(rng, true);
        for (const double lam : herm_eig(metric(p).matrix).values)
            min_eig = std::min(min_eig, lam);
    }
    return min_eig > 0.0 ? 0.0 : -min_eig;
}

double chk_spectrum_invariance(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p = draw_params(rng, true);
        const Unitary2 w = random_unitary2(rng);
        const HermEig eig = herm_eig(hermitian_counterpart(p, w));
        worst = std::max(worst, std::abs(eig.values[0] - p.omega_minus));
        worst = std::max(worst, std::abs(eig.values[1] - p.omega_plus));
    }
    return worst;
}

double chk_hermitian_counterpart(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p = draw_params(rng, true);
        const CMat h = hermitian_counterpart(p, random_unitary2(rng));
        worst = std::max(worst, (h - h.adjoint()).max_norm());
    }
    return worst;
}

double chk_quasi_hermiticity(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p = draw_params(rng, true);
        worst = std::max(worst, quasi_hermiticity_residual(p, metric(p)));
    }
    return worst;
}

double chk_bi_system(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const BiSystem b = bi_system(p);
        worst = std::max(worst, std::abs(dot(b.vstar_plus, b.v_plus) - 1.0));
        worst = std::max(worst, std::abs(dot(b.vstar_minus, b.v_minus) - 1.0));
        worst = std::max(worst, std::abs(dot(b.vstar_plus, b.v_minus)));
        worst = std::max(worst, std::abs(dot(b.vstar_minus, b.v_plus)));
        CMat rec = cplx(p.omega_plus, 0.0) * outer(b.v_plus, b.vstar_plus) +
                   cplx(p.omega_minus, 0.0) * outer(b.v_minus, b.vstar_minus);
        worst = std::max(worst, (rec - build_h1(p)).max_norm());
        const CMat hdag = build_h1(p).adjoint();
        worst = std::max(worst,
                         (hdag * b.vstar_plus - cplx(p.omega_plus, 0.0) * b.vstar_plus).norm());
        worst = std::max(worst,
                         (hdag * b.vstar_minus - cplx(p.omega_minus, 0.0) * b.vstar_minus).norm());
    }
    return worst;
}

double chk_haar_moment(CounterRng& rng, std::string& note) {
    double sum = 0.0;
    double unit = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Unitary2 w = random_unitary2(rng);
        sum += std::norm(w.c);
        unit = std::max(unit, w.constraint_residual());
    }
    note = "mean |c|^2 = " + std::to_string(sum / 1000.0);
    if (unit > tol_eig) return unit;
    return std::abs(sum / 1000.0 - 0.5);
}

// -------------------------------------------------------------- dynamics ----

Trajectory draw_trajectory(CounterRng& rng) {
    const ModelParams p = draw_params(rng, false);
    return {p, draw_state(rng, p), random_unitary2(rng)};
}

double chk_eta_norm(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        // Includes general-metric draws: the flow is eta-unitary for any member.
        const ModelParams p = draw_params(rng, true);
        const StateH1 s = StateH1::normalized(rng.next_cgauss(), rng.next_cgauss(), p);
        const Trajectory traj{p, s, Unitary2::identity()};
        for (int i = 0; i < 200; ++i) {
            const double t = 4.0 * kPi / p.omega * rng.next_double();
            const auto [at, bt] = evolve_amplitudes(traj, t);
            worst = std::max(worst, std::abs(StateH1::eta_norm_sq(at, bt, p) - 1.0));
        }
    }
    return worst;
}

double chk_oracle_equivalence(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Trajectory traj = draw_trajectory(rng);
        const ModelParams& p = traj.params;
        const CMat h1 = build_h1(p);
        const CMat s = dyson_s(p, traj.w);
        const CVec psi0(traj.initial.A, traj.initial.B);
        for (int i = 0; i < 5; ++i) {
            const double t = 20.0 * rng.next_double();
            const CMat u = expm(h1, t);
            const CVec psi_oracle = u * psi0;
            const auto [at, bt] = evolve_amplitudes(traj, t);
            const cplx phase = std::polar(1.0, -t * p.nu);
            worst = std::max(worst, (CVec(phase * at, phase * bt) - psi_oracle).norm());
            worst = std::max(worst, (propagator_h1(p, t) - u).max_norm());

            const auto [ta, tb] = hermitian_state(traj, t);
            const CVec phi_oracle = s * psi_oracle;
            worst = std::max(worst, (CVec(phase * ta, phase * tb) - phi_oracle).norm());

            // the same state through the Hermitian-side propagator e^{-it h_W}
            const CVec phi0 = s * psi0;
            const CVec phi_hw = expm(hermitian_counterpart(p, traj.w), t) * phi0;
            worst = std::max(worst, (phi_hw - phi_oracle).norm());

            const CMat rho_h = outer(psi_oracle, psi_oracle) * metric(p).matrix;
            const CMat rho_oracle = s * rho_h * s.inverse();
            worst = std::max(worst, (rho_hw(traj, t) - rho_oracle).max_norm());

            const cplx amp = traj.w.c * std::sqrt(p.a2 / p.a1) * at +
                             traj.w.d * std::sqrt(p.a1 / p.a2) * bt;
            worst = std::max(worst, std::abs(p.x() * std::norm(amp) - population_q(traj, t)));
        }
    }
    return worst;
}

double chk_population_bounds(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const Trajectory traj = draw_trajectory(rng);
        const double period = kPi / traj.params.omega;
        for (int i = 0; i < 50; ++i) {
            const double t = 2.0 * period * rng.next_double();
            const double p = population_p(traj, t);
            const double q = population_q(traj, t);
            worst = std::max({worst, -p, p - 1.0, -q, q - 1.0, 0.0});
            worst = std::max(worst, std::abs(population_p(traj, t + period) - p));
            worst = std::max(worst, std::abs(population_q(traj, t + period) - q));
        }
        const double mp = simpson([&](double t) { return population_p(traj, t); }, 0.0,
                                  period, 2048) / period;
        const double mq = simpson([&](double t) { return population_q(traj, t); }, 0.0,
                                  period, 2048) / period;
        worst = std::max(worst, std::abs(mp - mean_p(traj)));
        worst = std::max(worst, std::abs(mq - mean_q(traj)));
    }
    return worst;
}

double chk_w_equality(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const StateH1 s = draw_state(rng, p);
        const Unitary2 diag = Unitary2::diagonal(2.0 * kPi * rng.next_double(),
                                                 2.0 * kPi * rng.next_double());
        const Unitary2 anti = Unitary2::antidiagonal(2.0 * kPi * rng.next_double(),
                                                     2.0 * kPi * rng.next_double());
        const Trajectory td{p, s, diag};
        const Trajectory ta{p, s, anti};
        for (int i = 0; i < 40; ++i) {
            const double t = 2.0 * kPi / p.omega * rng.next_double();
            worst = std::max(worst, std::abs(population_q(td, t) - population_p(td, t)));
            worst = std::max(worst, std::abs(population_q(ta, t) - (1.0 - population_p(ta, t))));
        }
    }
    return worst;
}

double chk_alpha_reflection(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const double alpha = rng.next_double();
        const double c = rng.next_double();
        const Unitary2 w = Unitary2::from_real_c(c);
        const Trajectory t1{p, StateH1::from_alpha(alpha, 0.0, 0.0, p), w};
        const Trajectory t2{p, StateH1::from_alpha(1.0 - alpha, 0.0, 0.0, p), w};
        const double q0 = mean_q(t1);
        worst = std::max(worst, std::abs(mean_q(t2) - q0));
        for (int i = 0; i < 25; ++i) {
            const double t = 2.0 * kPi / p.omega * rng.next_double();
            worst = std::max(worst,
                             std::abs((population_q(t1, t) - q0) + (population_q(t2, t) - q0)));
        }
    }
    return worst;
}

double chk_rho_hw(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const Trajectory traj = draw_trajectory(rng);
        const double period = kPi / traj.params.omega;
        for (int i = 0; i < 10; ++i) {
            const double t = 2.0 * period * rng.next_double();
            const CMat rho = rho_hw(traj, t);
            worst = std::max(worst, std::abs((rho * rho).trace() - 1.0));
            worst = std::max(worst, std::abs(rho.trace() - 1.0));
            worst = std::max(worst, (rho_hw(traj, t + period) - rho).max_norm());
            const HermEig eig = herm_eig(rho);
            worst = std::max(worst, std::abs(eig.values[0]));       // rank one
            worst = std::max(worst, std::abs(eig.values[1] - 1.0));
            worst = std::max(worst, std::abs(rho(1, 1).real() - population_q(traj, t)));
        }
    }
    return worst;
}

// ------------------------------------------------------------- analytics ----

double chk_period_doubling(CounterRng& rng, std::string& note) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Trajectory traj = draw_generic_trajectory(rng);
        const PeriodEstimate pp = estimate_period(entropy_curve(traj, Side::NonHermitian, 1024));
        const PeriodEstimate pq = estimate_period(entropy_curve(traj, Side::Hermitian, 1024));
        if (pp.stationary || pq.stationary) return 1.0;
        worst = std::max(worst, std::abs(pq.period / pp.period / 2.0 - 1.0));
    }
    note = "relative deviation of the period ratio from 2";
    return worst;
}

double chk_entropy_equality(CounterRng& rng, std::string& note) {
    double worst = 0.0;
    double min_generic_gap = 1e300;
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const StateH1 s = draw_state(rng, p);
        const Unitary2 diag = Unitary2::diagonal(2.0 * kPi * rng.next_double(),
                                                 2.0 * kPi * rng.next_double());
        const Unitary2 anti = Unitary2::antidiagonal(2.0 * kPi * rng.next_double(),
                                                     2.0 * kPi * rng.next_double());
        if (classify_w(diag).variant != WClass::EqualStates) return 1.0;
        if (classify_w(anti).variant != WClass::EqualEntropies) return 1.0;
        const Trajectory td{p, s, diag};
        const Trajectory ta{p, s, anti};
        for (int i = 0; i < 40; ++i) {
            const double t = 2.0 * kPi / p.omega * rng.next_double();
            worst = std::max(worst, std::abs(population_q(td, t) - population_p(td, t)));
            worst = std::max(worst, std::abs(entropy(population_q(ta, t)) -
                                             entropy(population_p(ta, t))));
        }
    }
    for (int rep = 0; rep < 100; ++rep) {
        const Trajectory traj = draw_generic_trajectory(rng);
        if (classify_w(traj.w).variant != WClass::Generic) return 1.0;
        double gap = 0.0;
        for (int i = 0; i < 256; ++i) {
            const double t = 2.0 * kPi / traj.params.omega * i / 256.0;
            gap = std::max(gap, std::abs(entropy(population_q(traj, t)) -
                                         entropy(population_p(traj, t))));
        }
        min_generic_gap = std::min(min_generic_gap, gap);
    }
    note = "min generic entropy gap = " + std::to_string(min_generic_gap);
    if (min_generic_gap <= 1e-3) return 1.0;
    return worst;
}

double chk_concurrence_invariance(CounterRng& rng, std::string& note) {
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const StateH1 s = draw_state(rng, p);
        double cmin = 1e300, cmax = -1e300;
        for (int i = 0; i < 1000; ++i) {
            const Trajectory traj{p, s, random_unitary2(rng)};
            const double c = concurrence(averaged_state(traj));
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        worst = std::max(worst, cmax - cmin);
        // Wootters on the embedded averaged state obeys the exact relation
        // 2|z| = sqrt(C^2 - (1-2q0)^2); equality with C itself needs q0 = 1/2.
        for (int i = 0; i < 20; ++i) {
            const Trajectory traj{p, s, random_unitary2(rng)};
            const AveragedState avg = averaged_state(traj);
            const double c = concurrence(avg);
            const double woot = wootters_concurrence(embed_two_qubit(avg));
            const double expected =
                std::sqrt(std::max(c * c - (1.0 - 2.0 * avg.q0) * (1.0 - 2.0 * avg.q0), 0.0));
            worst = std::max(worst, std::abs(woot - expected));
        }
    }
    note = "spread over 1000 W plus Wootters relation residual";
    return worst;
}

double chk_concurrence_bounds(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const Trajectory traj{p, draw_state(rng, p), random_unitary2(rng)};
        const double c = concurrence(averaged_state(traj));
        worst = std::max({worst, -c, c - 1.0, 0.0});
        // W = identity: q0 = 1/2 and the Wootters oracle equals the closed form.
        const Trajectory tid{p, traj.initial, Unitary2::identity()};
        const AveragedState avg = averaged_state(tid);
        worst = std::max(worst,
                         std::abs(wootters_concurrence(embed_two_qubit(avg)) - concurrence(avg)));
    }
    for (int rep = 0; rep < 20; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const double f = 2.0 * kPi * rng.next_double();
        const Trajectory tmax{p, StateH1::from_alpha(0.5, f, f, p), random_unitary2(rng)};
        worst = std::max(worst, std::abs(concurrence(averaged_state(tmax)) - 1.0));
        const Trajectory tsep{p, StateH1::from_alpha(0.5, f + kPi / 2.0, f, p),
                              random_unitary2(rng)};
        worst = std::max(worst, concurrence(averaged_state(tsep)));
    }
    return worst;
}

double chk_entanglement_conservation(CounterRng& rng, std::string&) {
    for (int rep = 0; rep < 50; ++rep) {
        const ModelParams p = draw_params(rng, false);
        const bool product_start = rng.next_double() < 0.5;
        const StateH1 s = product_start
                              ? StateH1::from_alpha(rng.next_double() < 0.5 ? 0.0 : 1.0, 0.0,
                                                    0.0, p)
                              : draw_state(rng, p);
        const Unitary2 w = rng.next_double() < 0.5
                               ? Unitary2::diagonal(2.0 * kPi * rng.next_double(),
                                                    2.0 * kPi * rng.next_double())
                               : Unitary2::antidiagonal(2.0 * kPi * rng.next_double(),
                                                        2.0 * kPi * rng.next_double());
        const Trajectory traj{p, s, w};
        const auto [ta, tb] = hermitian_state(traj, 0.0);
        if (is_disentangled(s.A, s.B) != is_disentangled(ta, tb)) return 1.0;
    }
    return 0.0;
}

double chk_product_metric(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        Metric2 eta;
        eta.x1 = eta.x2 = 1.0;
        eta.matrix = CMat::diag2(0.1 + 3.0 * rng.next_double(), 0.1 + 3.0 * rng.next_double());
        if (!is_product_metric(eta)) return 1.0;
        const MetricFactorization f = factor_metric(eta);
        worst = std::max(worst, f.offblock_leakage);
        worst = std::max(worst, f.restriction_residual);
        for (const double lam : herm_eig(f.lambda_s).values) worst = std::max(worst, -lam);
        for (const double lam : herm_eig(f.lambda_b).values) worst = std::max(worst, -lam);

        ModelParams p = draw_params(rng, true);
        while (p.x1 == p.x2) p = draw_params(rng, true);
        if (is_product_metric(metric(p))) return 1.0;
    }
    return worst;
}

// ----------------------------------------------------------------- dyson ----

double chk_eta_positivity(CounterRng& rng, std::string&) {
    double min_eig = 1e300;
    for (int rep = 0; rep < 100; ++rep) {
        const MetricFlow flow{random_positive2(rng), draw_params(rng, false)};
        for (int i = 0; i <= 50; ++i) {
            const double t = 10.0 * i / 50.0;
            for (const double lam : herm_eig(eta_t(flow, t)).values)
                min_eig = std::min(min_eig, lam);
        }
    }
    return min_eig > 0.0 ? 0.0 : -min_eig;
}

double chk_dyson_round_trip(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const ModelParams p = draw_params_mild(rng);
        const CMat a0 = cplx(0.7, 0.0) * random_hermitian(rng, 2);
        const CMat a1 = cplx(0.7, 0.0) * random_hermitian(rng, 2);
        auto gen = [&](double t) { return a0 + cplx(std::cos(t), 0.0) * a1; };
        const double t_end = 3.0;
        const UnitaryPath path = solve_w_ode(gen, t_end, 1e-3);
        const MetricFlow flow{random_positive2_mild(rng), p};

        // Transformed equation i phi' = A(t) phi, phi(0) = S(0) psi(0).
        const StateH1 s0 = draw_state(rng, p);
        CVec psi0(s0.A, s0.B);
        CVec phi = psd_sqrt(flow.eta0) * psi0;
        const double h = 5e-4;
        const cplx mi(0.0, -1.0);
        auto rhs = [&](double t, const CVec& y) { return mi * (gen(t) * y); };
        double t = 0.0;
        while (t < t_end - 1e-12) {
            const double step = std::min(h, t_end - t);
            const CVec k1 = rhs(t, phi);
            const CVec k2 = rhs(t + 0.5 * step, phi + cplx(0.5 * step) * k1);
            const CVec k3 = rhs(t + 0.5 * step, phi + cplx(0.5 * step) * k2);
            const CVec k4 = rhs(t + step, phi + cplx(step) * k3);
            phi = phi + cplx(step / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
            t += step;
        }
        const CVec psi_rec = s_of_t(flow, path, t_end).inverse() * phi;
        const CVec psi_exact = expm(build_h1(p), t_end) * psi0;
        worst = std::max(worst, (psi_rec - psi_exact).norm());
    }
    return worst;
}

double chk_dyson_h_zero(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const ModelParams p = draw_params_mild(rng);
        const MetricFlow flow{rep == 0 ? CMat::identity(2) : random_positive2_mild(rng), p};
        const UnitaryPath id = UnitaryPath::identity();
        for (const double t : {0.0, 0.7, 2.5}) {
            const CMat h = h_of_t(flow, id, t);
            worst = std::max(worst, h.max_norm());
            worst = std::max(worst, (s_of_t(flow, id, t).adjoint() * s_of_t(flow, id, t) -
                                     eta_t(flow, t)).max_norm());
        }
    }
    return worst;
}

double chk_dyson_h_constant(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        const ModelParams p = draw_params_mild(rng);
        const CMat a0 = cplx(0.7, 0.0) * random_hermitian(rng, 2);
        const UnitaryPath path =
            UnitaryPath::closed_form([a0](double t) { return expm(a0, t); });
        const MetricFlow flow{random_positive2_mild(rng), p};
        for (const double t : {0.4, 1.7}) {
            worst = std::max(worst, (h_of_t(flow, path, t) - a0).max_norm());
            worst = std::max(worst, (h_from_w(path, t) - a0).max_norm());
            const CMat h = h_of_t(flow, path, t);
            worst = std::max(worst, (h - h.adjoint()).max_norm());
        }
    }
    return worst;
}

double chk_dyson_h_time_dep(CounterRng& rng, std::string&) {
    double worst = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
        const CMat a0 = cplx(0.7, 0.0) * random_hermitian(rng, 2);
        const CMat a1 = cplx(0.7, 0.0) * random_hermitian(rng, 2);
        auto gen = [a0, a1](double t) { return a0 + cplx(std::cos(t), 0.0) * a1; };
        const UnitaryPath path = solve_w_ode(gen, 3.0, 1e-3);
        for (const double t : {0.5, 1.5, 2.5}) {
            const CMat h = h_from_w(path, t);
            worst = std::max(worst, (h - gen(t)).max_norm());
            worst = std::max(worst, (h - h.adjoint()).max_norm());
        }
    }
    return worst;
}

std::vector<std::pair<std::string, Check>> all_checks() {
    std::vector<std::pair<std::string, Check>> checks;
    auto add = [&](const char* suite, const char* group, double tol, auto fn) {
        checks.push_back({suite, Check{std::string(suite) + "." + group, tol, fn}});
    };
    add("linalg", "spectral_reconstruction", tol_eig, chk_spectral_reconstruction);
    add("linalg", "psd_sqrt_identities", tol_eig, chk_psd_sqrt);
    add("linalg", "expm_group_law", tol_exp, chk_expm_group);
    add("linalg", "expm_unitarity", tol_exp, chk_expm_unitarity);
    add("model", "metric_positivity", 0.0, chk_metric_positive);
    add("model", "spectrum_invariance", tol_eig, chk_spectrum_invariance);
    add("model", "hermitian_counterpart", tol_eig, chk_hermitian_counterpart);
    add("model", "quasi_hermiticity", tol_eig, chk_quasi_hermiticity);
    add("model", "bi_orthonormal_system", tol_eig, chk_bi_system);
    add("model", "haar_moment", 0.05, chk_haar_moment);
    add("dynamics", "eta_norm_conservation", tol_norm, chk_eta_norm);
    add("dynamics", "oracle_equivalence", tol_exp, chk_oracle_equivalence);
    add("dynamics", "population_bounds_means", tol_quad, chk_population_bounds);
    add("dynamics", "diagonal_antidiagonal_w", 1e-10, chk_w_equality);
    add("dynamics", "alpha_reflection", tol_norm, chk_alpha_reflection);
    add("dynamics", "rho_hw_projector", tol_exp, chk_rho_hw);
    add("analytics", "period_doubling", 1e-4, chk_period_doubling);
    add("analytics", "entropy_equality_classes", 1e-10, chk_entropy_equality);
    add("analytics", "concurrence_w_invariance", 1e-10, chk_concurrence_invariance);
    add("analytics", "concurrence_bounds", 1e-10, chk_concurrence_bounds);
    add("analytics", "entanglement_conservation", 0.5, chk_entanglement_conservation);
    add("analytics", "product_metric_factorization", 1e-12, chk_product_metric);
    add("dyson", "eta_flow_positivity", 0.0, chk_eta_positivity);
    add("dyson", "round_trip_equivalence", 10.0 * tol_ode, chk_dyson_round_trip);
    add("dyson", "h_zero", tol_fd, chk_dyson_h_zero);
    add("dyson", "h_constant", tol_fd, chk_dyson_h_constant);
    add("dyson", "h_time_dependent", 1e-7, chk_dyson_h_time_dep);
    return checks;
}

}  // namespace

bool known_suite(const std::string& suite) {
    return suite == "all" || suite == "linalg" || suite == "model" || suite == "dynamics" ||
           suite == "analytics" || suite == "dyson";
}

std::vector<InvariantResult> run_verify(const std::string& suite, std::uint64_t seed) {
    if (!known_suite(suite)) throw std::invalid_argument("unknown verify suite: " + suite);
    std::vector<InvariantResult> results;
    std::uint64_t idx = 0;
    for (const auto& [tag, check] : all_checks()) {
        ++idx;
        if (suite != "all" && suite != tag) continue;
        CounterRng rng(seed + 0x1000 * idx);
        InvariantResult r;
        r.name = check.name;
        r.tolerance = check.tolerance;
        try {
            r.residual = check.worst_residual(rng, r.note);
            r.pass = check.tolerance == 0.0 ? r.residual == 0.0 : r.residual <= check.tolerance;
        } catch (const std::exception& e) {
            r.residual = std::numeric_limits<double>::infinity();
            r.pass = false;
            r.note = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace quasih
