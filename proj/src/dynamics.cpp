#include "quasih/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace quasih {

double StateH1::eta_norm_sq(cplx A, cplx B, const ModelParams& p) {
    const double sum = 0.5 * (p.x1 + p.x2);
    return sum * ((p.a2 / p.a1) * std::norm(A) + (p.a1 / p.a2) * std::norm(B)) +
           (p.x1 - p.x2) * (A * std::conj(B)).real();
}

StateH1 StateH1::strict(cplx A, cplx B, const ModelParams& p) {
    const double n = eta_norm_sq(A, B, p);
    if (std::abs(n - 1.0) > tol_norm)
        throw std::invalid_argument("StateH1: eta-norm deviates from 1 by " +
                                    std::to_string(std::abs(n - 1.0)));
    return {A, B};
}

StateH1 StateH1::normalized(cplx A, cplx B, const ModelParams& p) {
    const double n = eta_norm_sq(A, B, p);
    if (!(n > 0.0)) throw std::invalid_argument("StateH1: cannot normalize a null state");
    const double s = 1.0 / std::sqrt(n);
    return {s * A, s * B};
}

StateH1 StateH1::from_alpha(double alpha, double f1, double f2, const ModelParams& p) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("StateH1: alpha must lie in [0, 1]");
    const double x = p.x();
    const cplx A = std::polar(std::sqrt(alpha * p.a1 / (x * p.a2)), f1);
    const cplx B = std::polar(std::sqrt((1.0 - alpha) * p.a2 / (x * p.a1)), f2);
    return {A, B};
}

double Trajectory::alpha() const {
    return params.x() * (params.a2 / params.a1) * std::norm(initial.A);
}

Density2 Density2::checked(const CMat& m) {
    if (!m.hermitian()) throw std::invalid_argument("Density2: not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > tol_norm || std::abs(m.trace().imag()) > tol_norm)
        throw std::invalid_argument("Density2: trace is not 1");
    for (const double lam : herm_eig(m).values)
        if (lam < -tol_eig || lam > 1.0 + tol_eig)
            throw std::invalid_argument("Density2: eigenvalue outside [0, 1]");
    return {m};
}

std::pair<cplx, cplx> evolve_amplitudes(const Trajectory& traj, double t) {
    const ModelParams& p = traj.params;
    const double c = std::cos(p.omega * t);
    const double s = std::sin(p.omega * t);
    const cplx mi(0.0, -1.0);
    const cplx At = traj.initial.A * c + mi * traj.initial.B * (p.a1 / p.a2) * s;
    const cplx Bt = traj.initial.B * c + mi * traj.initial.A * (p.a2 / p.a1) * s;
    return {At, Bt};
}

ReducedRhoH reduced_rho_h(const Trajectory& traj, double t) {
    const ModelParams& p = traj.params;
    const auto [At, Bt] = evolve_amplitudes(traj, t);
    const double sum = 0.5 * (p.x1 + p.x2);
    const double dif = 0.5 * (p.x1 - p.x2);
    const cplx ab = At * std::conj(Bt);
    const cplx pop0 = sum * (p.a1 / p.a2) * std::norm(Bt) + dif * ab;
    const cplx pop1 = sum * (p.a2 / p.a1) * std::norm(At) + dif * std::conj(ab);
    if (p.diagonal_metric())
        return Density2::checked(CMat::diag2(pop0.real(), pop1.real()));
    const double mi = std::max(std::abs(pop0.imag()), std::abs(pop1.imag()));
    return ComplexSpectrumReport{pop0, pop1, mi > tol_norm, mi};
}

double population_p(const Trajectory& traj, double t) {
    const ModelParams& p = traj.params;
    const double x = p.x();
    const double alpha = traj.alpha();
    const double im = (std::conj(traj.initial.A) * traj.initial.B).imag();
    return 0.5 + (0.5 - alpha) * std::cos(2.0 * p.omega * t) -
           x * std::sin(2.0 * p.omega * t) * im;
}

double mean_p(const Trajectory& traj) {
    (void)traj.params.x();  // same precondition as population_p
    return 0.5;
}

std::pair<cplx, cplx> hermitian_state(const Trajectory& traj, double t) {
    const ModelParams& p = traj.params;
    const double x = p.x();
    const auto [At, Bt] = evolve_amplitudes(traj, t);
    const cplx gamma = std::sqrt(x * p.a2 / p.a1) * At;
    const cplx delta = std::sqrt(x * p.a1 / p.a2) * Bt;
    const Unitary2& w = traj.w;
    return {w.a * gamma + w.b * delta, w.c * gamma + w.d * delta};
}

CMat rho_hw(const Trajectory& traj, double t) {
    const auto [ta, tb] = hermitian_state(traj, t);
    const CVec phi(ta, tb);
    return outer(phi, phi);
}

double population_q(const Trajectory& traj, double t) {
    const ModelParams& p = traj.params;
    const double x = p.x();
    const double alpha = traj.alpha();
    const cplx ab = traj.initial.A * std::conj(traj.initial.B);
    const cplx cd = traj.w.c * std::conj(traj.w.d);
    const double c2 = std::norm(traj.w.c);
    const double cos2 = std::cos(2.0 * p.omega * t);
    const double sin2 = std::sin(2.0 * p.omega * t);
    return 0.5 + 2.0 * x * ab.real() * cd.real() +
           cos2 * ((0.5 - alpha) * (1.0 - 2.0 * c2) - 2.0 * x * ab.imag() * cd.imag()) +
           sin2 * ((1.0 - 2.0 * alpha) * cd.imag() + x * (1.0 - 2.0 * c2) * ab.imag());
}

double mean_q(const Trajectory& traj) {
    const double x = traj.params.x();
    const cplx ab = traj.initial.A * std::conj(traj.initial.B);
    const cplx cd = traj.w.c * std::conj(traj.w.d);
    return 0.5 + 2.0 * x * ab.real() * cd.real();
}

PathologyScan scan_rho_pathology(const Trajectory& traj, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("scan_rho_pathology: needs >= 2 samples");
    const ModelParams& p = traj.params;
    const double window = 2.0 * std::numbers::pi / p.omega;
    PathologyScan scan{0.0, 0.0, false};
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = window * static_cast<double>(i) / static_cast<double>(samples);
        const auto [at, bt] = evolve_amplitudes(traj, t);
        const cplx pop0 = 0.5 * (p.x1 + p.x2) * (p.a1 / p.a2) * std::norm(bt) +
                          0.5 * (p.x1 - p.x2) * at * std::conj(bt);
        const double im = std::abs(pop0.imag());
        if (im > scan.max_abs_imag) {
            scan.max_abs_imag = im;
            scan.t_at_max = t;
        }
    }
    scan.not_a_density_matrix = scan.max_abs_imag > tol_norm;
    return scan;
}

Genericity is_generic(const Trajectory& traj) {
    const cplx ab = traj.initial.A * std::conj(traj.initial.B);
    const cplx cd = traj.w.c * std::conj(traj.w.d);
    return {std::abs(ab.imag()) > tol_gen, std::abs(cd.imag()) > tol_gen};
}

Genericity is_generic_re(const Trajectory& traj) {
    const cplx ab = traj.initial.A * std::conj(traj.initial.B);
    const cplx cd = traj.w.c * std::conj(traj.w.d);
    return {std::abs(ab.real()) > tol_gen, std::abs(cd.real()) > tol_gen};
}

}  // namespace quasih
