#include "quasih/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quasih {

namespace {

void check_dim(std::size_t dim) {
    if (dim != 2 && dim != 4) throw DimensionMismatch("dimension must be 2 or 4");
}

void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw DimensionMismatch("operands have different dimensions");
}

}  // namespace

CVec::CVec(std::size_t dim) : dim_(dim) { check_dim(dim); }

double CVec::norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += std::norm(e_[i]);
    return std::sqrt(s);
}

bool CVec::finite() const {
    for (std::size_t i = 0; i < dim_; ++i)
        if (!std::isfinite(e_[i].real()) || !std::isfinite(e_[i].imag())) return false;
    return true;
}

cplx dot(const CVec& x, const CVec& y) {
    check_same(x.dim(), y.dim());
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

CVec operator*(cplx s, const CVec& v) {
    CVec r = v;
    for (std::size_t i = 0; i < v.dim(); ++i) r[i] = s * v[i];
    return r;
}

CVec operator+(const CVec& x, const CVec& y) {
    check_same(x.dim(), y.dim());
    CVec r = x;
    for (std::size_t i = 0; i < x.dim(); ++i) r[i] = x[i] + y[i];
    return r;
}

CVec operator-(const CVec& x, const CVec& y) {
    check_same(x.dim(), y.dim());
    CVec r = x;
    for (std::size_t i = 0; i < x.dim(); ++i) r[i] = x[i] - y[i];
    return r;
}

CMat::CMat(std::size_t dim) : dim_(dim) { check_dim(dim); }

CMat CMat::identity(std::size_t dim) {
    CMat m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::mat2(cplx a, cplx b, cplx c, cplx d) {
    CMat m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

CMat CMat::diag2(cplx a, cplx b) { return mat2(a, 0.0, 0.0, b); }

CMat CMat::adjoint() const {
    CMat r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

CMat CMat::conj() const {
    CMat r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(i, j));
    return r;
}

cplx CMat::trace() const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, i);
    return s;
}

cplx CMat::det() const {
    if (dim_ != 2) throw DimensionMismatch("det: closed form only at dimension 2");
    return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
}

CMat CMat::inverse() const {
    if (dim_ != 2) throw DimensionMismatch("inverse: closed form only at dimension 2");
    const cplx d = det();
    if (std::abs(d) <= tol_sing) throw Singular("inverse: |det| <= tol_sing");
    CMat r(2);
    r(0, 0) = (*this)(1, 1) / d;
    r(0, 1) = -(*this)(0, 1) / d;
    r(1, 0) = -(*this)(1, 0) / d;
    r(1, 1) = (*this)(0, 0) / d;
    return r;
}

double CMat::max_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
}

bool CMat::finite() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            const cplx v = (*this)(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    return true;
}

bool CMat::hermitian(double tol) const { return (*this - adjoint()).max_norm() <= tol; }

CMat& CMat::operator+=(const CMat& o) {
    check_same(dim_, o.dim_);
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] += o.e_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    check_same(dim_, o.dim_);
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] -= o.e_[i];
    return *this;
}

CMat& CMat::operator*=(cplx s) {
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] *= s;
    return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }

CMat operator*(const CMat& a, const CMat& b) {
    check_same(a.dim(), b.dim());
    CMat r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < a.dim(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

CMat operator*(cplx s, CMat a) { return a *= s; }

CVec operator*(const CMat& m, const CVec& v) {
    check_same(m.dim(), v.dim());
    CVec r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

CMat outer(const CVec& x, const CVec& y) {
    check_same(x.dim(), y.dim());
    CMat r(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < x.dim(); ++j) r(i, j) = x[i] * std::conj(y[j]);
    return r;
}

CMat kron2(const CMat& a, const CMat& b) {
    if (a.dim() != 2 || b.dim() != 2) throw DimensionMismatch("kron2 expects 2x2 factors");
    CMat r(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

namespace {

// Largest-magnitude component made real positive; ties go to the first such entry.
void fix_phase(CVec& v) {
    std::size_t imax = 0;
    double amax = -1.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const double a = std::abs(v[i]);
        if (a > amax + 1e-15) {
            amax = a;
            imax = i;
        }
    }
    if (amax <= 0.0) return;
    const cplx phase = v[imax] / amax;
    const cplx corr = std::conj(phase);
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] *= corr;
    v[imax] = cplx(std::abs(v[imax]), 0.0);  // kill residual imaginary roundoff
}

HermEig herm_eig2(const CMat& m) {
    const double alpha = m(0, 0).real();
    const double gamma = m(1, 1).real();
    const cplx beta = m(0, 1);
    const double babs = std::abs(beta);
    const double mid = 0.5 * (alpha + gamma);
    const double half = 0.5 * (alpha - gamma);
    const double r = std::hypot(half, babs);

    // Larger-magnitude root from the stable formula, the other from det/lambda.
    double lam_big = mid >= 0.0 ? mid + r : mid - r;
    double lam_small;
    if (std::abs(lam_big) > 0.0)
        lam_small = (alpha * gamma - babs * babs) / lam_big;
    else
        lam_small = 0.0;
    double lo = std::min(lam_big, lam_small);
    double hi = std::max(lam_big, lam_small);

    HermEig out;
    out.values = {lo, hi};
    if (r <= 1e-300) {  // scalar matrix, any orthonormal pair
        out.vectors = {CVec(1.0, 0.0), CVec(0.0, 1.0)};
        return out;
    }
    auto vec_for = [&](double lam) {
        // (beta, lam - alpha) and (lam - gamma, conj(beta)) are both eigenvectors;
        // pick the better-conditioned one.
        CVec v1(beta, cplx(lam - alpha, 0.0));
        CVec v2(cplx(lam - gamma, 0.0), std::conj(beta));
        CVec v = v1.norm() >= v2.norm() ? v1 : v2;
        const double n = v.norm();
        return (cplx(1.0 / n, 0.0)) * v;
    };
    CVec vlo = vec_for(lo);
    // Orthogonal complement in C^2: (-conj(b), conj(a)) is exactly orthogonal.
    CVec vhi(-std::conj(vlo[1]), std::conj(vlo[0]));
    fix_phase(vlo);
    fix_phase(vhi);
    out.vectors = {vlo, vhi};
    return out;
}

HermEig herm_eig4(const CMat& m) {
    CMat a = m;
    CMat v = CMat::identity(4);
    const double scale = std::max(1.0, a.max_norm());

    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t q = 0; q < 4; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && offdiag() > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                const cplx apq = a(p, q);
                const double rabs = std::abs(apq);
                if (rabs <= 1e-18 * scale) continue;
                // Phase factor turning the pivot real, then a real Jacobi rotation.
                const cplx ph = apq / rabs;  // a(p,q) = rabs * ph
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * rabs);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                // Column update: J has J(p,p)=c, J(p,q)=s*ph, J(q,p)=-s*conj(ph), J(q,q)=c
                // so that J^dag A J zeroes the (p,q) entry.
                for (std::size_t i = 0; i < 4; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(ph) * aiq;
                    a(i, q) = s * ph * aip + c * aiq;
                }
                for (std::size_t j = 0; j < 4; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj - s * ph * aqj;
                    a(q, j) = s * std::conj(ph) * apj + c * aqj;
                }
                for (std::size_t i = 0; i < 4; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(ph) * viq;
                    v(i, q) = s * ph * vip + c * viq;
                }
            }
        }
    }

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEig out;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t c = order[k];
        out.values.push_back(a(c, c).real());
        CVec vec(4);
        for (std::size_t i = 0; i < 4; ++i) vec[i] = v(i, c);
        fix_phase(vec);
        out.vectors.push_back(vec);
    }
    return out;
}

}  // namespace

HermEig herm_eig(const CMat& m) {
    if (!m.finite()) throw std::invalid_argument("herm_eig: non-finite entries");
    if (!m.hermitian()) throw NotHermitian("herm_eig: matrix is not Hermitian");
    return m.dim() == 2 ? herm_eig2(m) : herm_eig4(m);
}

CMat psd_sqrt(const CMat& m) {
    const HermEig eig = herm_eig(m);
    CMat r(m.dim());
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        const double lam = eig.values[k];
        if (lam < -tol_eig) throw NotPSD("psd_sqrt: negative eigenvalue");
        const double s = std::sqrt(std::max(lam, 0.0));
        CMat proj = outer(eig.vectors[k], eig.vectors[k]);
        proj *= cplx(s, 0.0);
        r += proj;
    }
    return r;
}

CMat expm(const CMat& m, double t) {
    if (!m.finite() || !std::isfinite(t)) throw std::invalid_argument("expm: non-finite input");
    CMat x = cplx(0.0, -t) * m;
    // Crude operator-norm bound, then scale so the Taylor kernel converges fast.
    const double bound = x.max_norm() * static_cast<double>(x.dim());
    int squarings = 0;
    if (bound > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(bound / 0.25)));
        x *= cplx(std::ldexp(1.0, -squarings), 0.0);
    }
    CMat sum = CMat::identity(m.dim());
    CMat term = CMat::identity(m.dim());
    for (int k = 1; k <= 20; ++k) {
        term = term * x;
        term *= cplx(1.0 / k, 0.0);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

}  // namespace quasih
