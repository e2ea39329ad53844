// dynamics.hpp — closed-form time evolution on the quasi-Hermitian and
// Hermitian sides, and the reduced density matrices with populations p(t), q(t).
#pragma once

#include <utility>
#include <variant>

#include "quasih/model.hpp"

namespace quasih {

inline constexpr double tol_norm = 1e-10;
inline constexpr double tol_quad = 1e-8;
inline constexpr double tol_gen = 1e-12;

// Initial amplitudes on {|e_S>, |e_B>}, eta-normalized:
//   ((x1+x2)/2)((a2/a1)|A|^2 + (a1/a2)|B|^2) + (x1-x2) Re(A B*) = 1.
struct StateH1 {
    cplx A;
    cplx B;

    // Rejects amplitudes whose eta-norm deviates from 1 by more than tol_norm.
    static StateH1 strict(cplx A, cplx B, const ModelParams& p);
    // Rescales a raw pair onto the eta-unit sphere.
    static StateH1 normalized(cplx A, cplx B, const ModelParams& p);
    // A = sqrt(alpha a1/(x a2)) e^{i f1}, B = sqrt((1-alpha) a2/(x a1)) e^{i f2};
    // requires x1 == x2.
    static StateH1 from_alpha(double alpha, double f1, double f2, const ModelParams& p);

    static double eta_norm_sq(cplx A, cplx B, const ModelParams& p);

private:
    StateH1(cplx A_, cplx B_) : A(A_), B(B_) {}
};

struct Trajectory {
    ModelParams params;
    StateH1 initial;
    Unitary2 w;

    Trajectory(ModelParams p, StateH1 s, Unitary2 w_)
        : params(std::move(p)), initial(s), w(w_) {}

    // alpha = x (a2/a1) |A|^2 in [0, 1]; requires x1 == x2.
    double alpha() const;
};

// 2x2 density matrix (Hermitian, PSD within tolerance, unit trace).
struct Density2 {
    CMat matrix{2};
    static Density2 checked(const CMat& m);
};

// Diagnostic result of reducing rho_H with a non-diagonal metric: the two
// diagonal entries of the reduced operator in {|0_S>, |1_S>}, generally
// complex, plus a flag raised when an imaginary part exceeds tol_norm.
struct ComplexSpectrumReport {
    cplx pop_ground;   // |0_S><0_S| coefficient
    cplx pop_excited;  // |1_S><1_S| coefficient
    bool not_a_density_matrix;
    double max_abs_imag;
};

using ReducedRhoH = std::variant<Density2, ComplexSpectrumReport>;

// Closed-form pair (A(t), B(t)); the full state is e^{-i t nu} (A(t), B(t)).
std::pair<cplx, cplx> evolve_amplitudes(const Trajectory& traj, double t);

// Reduced state of the system oscillator on the quasi-Hermitian side, in the
// basis {|0_S>, |1_S>}. Diagonal metric: diag(p(t), 1-p(t)). Otherwise a
// ComplexSpectrumReport (the reduced operator is not a density matrix).
ReducedRhoH reduced_rho_h(const Trajectory& traj, double t);

// p(t) = 1/2 + (1/2 - alpha) cos(2 w t) - x sin(2 w t) Im(A* B); requires x1 == x2.
double population_p(const Trajectory& traj, double t);
double mean_p(const Trajectory& traj);  // exactly 1/2

// Amplitudes of |phi(t)> = W sqrt(eta) |psi(t)> up to the global phase
// e^{-i t nu}, i.e. (A~(t), B~(t)) with |A~|^2 + |B~|^2 = 1; requires x1 == x2.
std::pair<cplx, cplx> hermitian_state(const Trajectory& traj, double t);

// Rank-one projector |phi(t)><phi(t)| in {|e_S>, |e_B>}; requires x1 == x2.
CMat rho_hw(const Trajectory& traj, double t);

double population_q(const Trajectory& traj, double t);
double mean_q(const Trajectory& traj);  // q0 = 1/2 + 2 x Re(AB*) Re(cd*)

// Worst imaginary part of the reduced-state populations over a uniform grid of
// two population periods. Nonzero (and flagged) exactly in the x1 != x2 branch
// with generic initial data; identically zero for the diagonal metric family.
struct PathologyScan {
    double max_abs_imag;
    double t_at_max;
    bool not_a_density_matrix;
};
PathologyScan scan_rho_pathology(const Trajectory& traj, std::size_t samples);

// Phase genericity: AB* and cd* not real (imaginary parts above tol_gen).
struct Genericity {
    bool initial_generic;
    bool unitary_generic;
};
Genericity is_generic(const Trajectory& traj);

// Period-classification genericity: Re(AB*) and Re(cd*) nonzero. The entropy
// of the Hermitian side has the doubled period exactly when both hold.
Genericity is_generic_re(const Trajectory& traj);

}  // namespace quasih
