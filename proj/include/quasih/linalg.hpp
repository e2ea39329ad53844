// linalg.hpp — dense complex matrices at dimensions 2 and 4: closed-form and
// Jacobi Hermitian eigensolves, positive square roots, matrix exponentials.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace quasih {

using cplx = std::complex<double>;

// Absolute tolerances (max-norm) used throughout the library.
inline constexpr double tol_herm = 1e-12;
inline constexpr double tol_eig = 1e-12;
inline constexpr double tol_exp = 1e-10;
inline constexpr double tol_sing = 1e-14;

struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPSD : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complex vector of dimension 2 or 4.
class CVec {
public:
    explicit CVec(std::size_t dim);
    CVec(cplx a, cplx b) : dim_(2), e_{a, b, 0.0, 0.0} {}
    CVec(cplx a, cplx b, cplx c, cplx d) : dim_(4), e_{a, b, c, d} {}

    std::size_t dim() const { return dim_; }
    cplx& operator[](std::size_t i) { return e_[i]; }
    const cplx& operator[](std::size_t i) const { return e_[i]; }

    double norm() const;
    bool finite() const;

private:
    std::size_t dim_;
    std::array<cplx, 4> e_{};
};

cplx dot(const CVec& x, const CVec& y);   // <x|y>, conjugate-linear in x
CVec operator*(cplx s, const CVec& v);
CVec operator+(const CVec& x, const CVec& y);
CVec operator-(const CVec& x, const CVec& y);

// Complex matrix of dimension 2 or 4, row-major.
class CMat {
public:
    explicit CMat(std::size_t dim);
    static CMat zero(std::size_t dim) { return CMat(dim); }
    static CMat identity(std::size_t dim);
    static CMat mat2(cplx a, cplx b, cplx c, cplx d);
    static CMat diag2(cplx a, cplx b);

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }

    CMat adjoint() const;
    CMat conj() const;
    cplx trace() const;
    cplx det() const;       // dimension 2 only
    CMat inverse() const;   // dimension 2 closed form; Singular if |det| <= tol_sing
    double max_norm() const;
    bool finite() const;
    bool hermitian(double tol = tol_herm) const;

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cplx s);

private:
    std::size_t dim_;
    std::array<cplx, 16> e_{};
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(const CMat& a, const CMat& b);
CMat operator*(cplx s, CMat a);
CVec operator*(const CMat& m, const CVec& v);
CMat outer(const CVec& x, const CVec& y);  // |x><y|
CMat kron2(const CMat& a, const CMat& b);  // 2x2 (x) 2x2 -> 4x4

struct HermEig {
    std::vector<double> values;   // ascending
    std::vector<CVec> vectors;    // orthonormal; phase: largest-|.| entry real positive
};

// Hermitian eigendecomposition: closed-form quadratic at dim 2, cyclic Jacobi at dim 4.
HermEig herm_eig(const CMat& m);

// Unique positive square root of a Hermitian PSD matrix.
CMat psd_sqrt(const CMat& m);

// exp(-i t m) for arbitrary m, by scaling-and-squaring with a Taylor kernel.
CMat expm(const CMat& m, double t);

}  // namespace quasih
