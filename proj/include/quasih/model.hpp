// model.hpp — single-excitation-sector Hamiltonian, its bi-orthonormal
// eigensystem, the metric family, and the family S = W*sqrt(eta) of similarity
// transforms to Hermitian counterparts.
//
// Basis order everywhere: {|e_S>, |e_B>} (excitation on the system oscillator,
// symmetric collective bath excitation).
#pragma once

#include <cstdint>
#include <stdexcept>

#include "quasih/linalg.hpp"

namespace quasih {

struct InvalidRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Physical constants and metric weights. Construction requires the unbroken
// regime 0 <= |kappa| < g (elsewhere the spectrum degenerates or turns complex)
// and positive metric weights.
struct ModelParams {
    double nu;        // oscillator frequency, > 0
    double g;         // coupling, > 0
    double kappa;     // non-Hermiticity parameter, |kappa| < g
    int n_bath;       // number of bath oscillators, >= 1
    double x1;        // metric weight on |v+*><v+*|
    double x2;        // metric weight on |v-*><v-*|

    // Derived, fixed at construction.
    double a1;           // sqrt(g + kappa)
    double a2;           // sqrt(g - kappa)
    double omega;        // sqrt(N) * sqrt(g^2 - kappa^2)
    double omega_plus;   // nu + omega
    double omega_minus;  // nu - omega

    ModelParams(double nu, double g, double kappa, int n_bath, double x1, double x2);
    static ModelParams physical(double nu, double g, double kappa, int n_bath, double x) {
        return {nu, g, kappa, n_bath, x, x};
    }

    bool diagonal_metric() const { return x1 == x2; }
    double x() const;  // the common weight; requires x1 == x2
};

// Member of the metric family, as a matrix in {|e_S>, |e_B>}.
struct Metric2 {
    CMat matrix{2};
    double x1 = 1.0;
    double x2 = 1.0;
    bool diagonal() const { return x1 == x2; }
};

// Eigenvectors of H1 and of H1^dag, normalized to <v*_i|v_j> = delta_ij.
struct BiSystem {
    CVec v_plus{2};
    CVec v_minus{2};
    CVec vstar_plus{2};
    CVec vstar_minus{2};
};

// General 2x2 unitary with the row-orthonormality constraints
// a c* + b d* = 0, |a|^2+|b|^2 = |c|^2+|d|^2 = 1.
struct Unitary2 {
    cplx a, b, c, d;

    Unitary2(cplx a, cplx b, cplx c, cplx d);
    static Unitary2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    // Real unitary [[d, -c],[c, d]] with c in [-1, 1]; the second row carries
    // the given real c and d = sqrt(1 - c^2) >= 0.
    static Unitary2 from_real_c(double c);
    static Unitary2 diagonal(double phi1, double phi2);
    static Unitary2 antidiagonal(double phi1, double phi2);

    CMat mat() const { return CMat::mat2(a, b, c, d); }
    double constraint_residual() const;
};

struct SpectrumPair {
    double omega_plus;
    double omega_minus;
};

CMat build_h1(const ModelParams& p);
SpectrumPair spectrum(const ModelParams& p);
BiSystem bi_system(const ModelParams& p);
Metric2 metric(const ModelParams& p);

// || H1^dag eta - eta H1 ||_max; zero exactly on the metric family.
double quasi_hermiticity_residual(const ModelParams& p, const Metric2& eta);

// S = W sqrt(eta); satisfies S^dag S = eta.
CMat dyson_s(const ModelParams& p, const Unitary2& w);

// Hermitian counterpart h_W = S H1 S^{-1}.
CMat hermitian_counterpart(const ModelParams& p, const Unitary2& w);

// Closed-form propagator e^{-i t H1}.
CMat propagator_h1(const ModelParams& p, double t);

// Haar-distributed 2x2 unitary, deterministic per seed.
Unitary2 random_unitary2(std::uint64_t seed);
Unitary2 random_unitary2(class CounterRng& rng);

}  // namespace quasih
