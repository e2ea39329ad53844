#include "quasih/model.hpp"

#include <cmath>
#include <string>

#include "quasih/rng.hpp"

namespace quasih {

ModelParams::ModelParams(double nu_, double g_, double kappa_, int n_bath_, double x1_, double x2_)
    : nu(nu_), g(g_), kappa(kappa_), n_bath(n_bath_), x1(x1_), x2(x2_) {
    if (!(nu > 0.0)) throw InvalidRegime("nu must be positive");
    if (!(g > 0.0)) throw InvalidRegime("g must be positive");
    if (!(std::abs(kappa) < g))
        throw InvalidRegime("requires 0 <= |kappa| < g (got kappa=" + std::to_string(kappa) +
                            ", g=" + std::to_string(g) + ")");
    if (n_bath < 1) throw InvalidRegime("n_bath must be >= 1");
    if (!(x1 > 0.0) || !(x2 > 0.0)) throw InvalidRegime("metric weights must be positive");
    a1 = std::sqrt(g + kappa);
    a2 = std::sqrt(g - kappa);
    omega = std::sqrt(static_cast<double>(n_bath)) * std::sqrt(g * g - kappa * kappa);
    omega_plus = nu + omega;
    omega_minus = nu - omega;
}

double ModelParams::x() const {
    if (!diagonal_metric()) throw InvalidRegime("operation requires x1 == x2");
    return x1;
}

Unitary2::Unitary2(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
    if (constraint_residual() > tol_eig)
        throw std::invalid_argument("Unitary2: rows are not orthonormal");
}

double Unitary2::constraint_residual() const {
    const double r1 = std::abs(a * std::conj(c) + b * std::conj(d));
    const double r2 = std::abs(std::norm(a) + std::norm(b) - 1.0);
    const double r3 = std::abs(std::norm(c) + std::norm(d) - 1.0);
    return std::max({r1, r2, r3});
}

Unitary2 Unitary2::from_real_c(double c) {
    if (std::abs(c) > 1.0) throw std::invalid_argument("from_real_c: |c| must be <= 1");
    const double d = std::sqrt(1.0 - c * c);
    return {d, -c, c, d};
}

Unitary2 Unitary2::diagonal(double phi1, double phi2) {
    return {std::polar(1.0, phi1), 0.0, 0.0, std::polar(1.0, phi2)};
}

Unitary2 Unitary2::antidiagonal(double phi1, double phi2) {
    return {0.0, std::polar(1.0, phi1), std::polar(1.0, phi2), 0.0};
}

CMat build_h1(const ModelParams& p) {
    const double sqn = std::sqrt(static_cast<double>(p.n_bath));
    return CMat::mat2(p.nu, (p.g + p.kappa) * sqn, (p.g - p.kappa) * sqn, p.nu);
}

SpectrumPair spectrum(const ModelParams& p) { return {p.omega_plus, p.omega_minus}; }

BiSystem bi_system(const ModelParams& p) {
    const double s = 1.0 / std::sqrt(2.0);
    const double rp = std::sqrt(p.a1 / p.a2);
    const double rm = std::sqrt(p.a2 / p.a1);
    BiSystem b;
    b.v_plus = CVec(s * rp, s * rm);
    b.v_minus = CVec(s * rp, -s * rm);
    b.vstar_plus = CVec(s * rm, s * rp);
    b.vstar_minus = CVec(s * rm, -s * rp);
    return b;
}

Metric2 metric(const ModelParams& p) {
    const double sum = 0.5 * (p.x1 + p.x2);
    const double dif = 0.5 * (p.x1 - p.x2);
    Metric2 m;
    m.x1 = p.x1;
    m.x2 = p.x2;
    m.matrix = CMat::mat2(sum * p.a2 / p.a1, dif, dif, sum * p.a1 / p.a2);
    return m;
}

double quasi_hermiticity_residual(const ModelParams& p, const Metric2& eta) {
    const CMat h = build_h1(p);
    return (h.adjoint() * eta.matrix - eta.matrix * h).max_norm();
}

CMat dyson_s(const ModelParams& p, const Unitary2& w) {
    return w.mat() * psd_sqrt(metric(p).matrix);
}

CMat hermitian_counterpart(const ModelParams& p, const Unitary2& w) {
    const CMat s = dyson_s(p, w);
    return s * build_h1(p) * s.inverse();
}

CMat propagator_h1(const ModelParams& p, double t) {
    const cplx phase = std::polar(1.0, -t * p.nu);
    const double c = std::cos(p.omega * t);
    const double s = std::sin(p.omega * t);
    const cplx mis(0.0, -s);
    return CMat::mat2(phase * c, phase * mis * (p.a1 / p.a2), phase * mis * (p.a2 / p.a1),
                      phase * c);
}

Unitary2 random_unitary2(CounterRng& rng) {
    // QR of a 2x2 Ginibre draw via Gram-Schmidt; the positive-real-diagonal R
    // convention makes Q Haar-distributed.
    const cplx g11 = rng.next_cgauss();
    const cplx g21 = rng.next_cgauss();
    const cplx g12 = rng.next_cgauss();
    const cplx g22 = rng.next_cgauss();
    const double n1 = std::sqrt(std::norm(g11) + std::norm(g21));
    const cplx q11 = g11 / n1;
    const cplx q21 = g21 / n1;
    const cplx proj = std::conj(q11) * g12 + std::conj(q21) * g22;
    const cplx w12 = g12 - proj * q11;
    const cplx w22 = g22 - proj * q21;
    const double n2 = std::sqrt(std::norm(w12) + std::norm(w22));
    return {q11, w12 / n2, q21, w22 / n2};
}

Unitary2 random_unitary2(std::uint64_t seed) {
    CounterRng rng(seed);
    return random_unitary2(rng);
}

}  // namespace quasih
