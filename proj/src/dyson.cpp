#include "quasih/dyson.hpp"

#include <cmath>
#include <utility>

namespace quasih {

MetricFlow::MetricFlow(CMat eta0_, ModelParams p) : eta0(std::move(eta0_)), params(std::move(p)) {
    if (eta0.dim() != 2) throw DimensionMismatch("MetricFlow: eta(0) must be 2x2");
    if (!eta0.hermitian()) throw NotHermitian("MetricFlow: eta(0) must be Hermitian");
    for (const double lam : herm_eig(eta0).values)
        if (lam <= 0.0) throw NotPSD("MetricFlow: eta(0) must be strictly positive");
}

CMat eta_t(const MetricFlow& flow, double t) {
    const CMat h = build_h1(flow.params);
    // e^{-itH^dag} = (e^{-i(-t)H})^dag with our expm convention exp(-i t m).
    const CMat left = expm(h, -t).adjoint();
    const CMat right = expm(h, -t);
    return left * flow.eta0 * right;
}

UnitaryPath UnitaryPath::identity() {
    return closed_form([](double) { return CMat::identity(2); });
}

UnitaryPath UnitaryPath::closed_form(MatrixFn w_of_t) {
    UnitaryPath p;
    p.closed_ = std::move(w_of_t);
    return p;
}

namespace {

CMat polar_unitary(const CMat& w) {
    // Right polar factor: U = W (W^dag W)^{-1/2}.
    return w * psd_sqrt(w.adjoint() * w).inverse();
}

CMat rk4_step(const UnitaryPath::MatrixFn& gen, const CMat& w, double t, double h) {
    const cplx mi(0.0, -1.0);
    auto rhs = [&](double s, const CMat& y) {
        const CMat a = gen(s);
        if (!a.hermitian(tol_herm)) throw NonHermitianGenerator("solve_w_ode: A(t) not Hermitian");
        return mi * (a * y);
    };
    const CMat k1 = rhs(t, w);
    const CMat k2 = rhs(t + 0.5 * h, w + cplx(0.5 * h) * k1);
    const CMat k3 = rhs(t + 0.5 * h, w + cplx(0.5 * h) * k2);
    const CMat k4 = rhs(t + h, w + cplx(h) * k3);
    CMat next = w + cplx(h / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
    return polar_unitary(next);
}

}  // namespace

UnitaryPath solve_w_ode(const UnitaryPath::MatrixFn& generator, double t_end, double h_ode) {
    if (!(h_ode > 0.0) || !(t_end >= 0.0))
        throw std::invalid_argument("solve_w_ode: bad step or horizon");
    UnitaryPath p;
    p.generator_ = generator;
    p.h_ode_ = h_ode;
    CMat w = CMat::identity(2);
    p.grid_.push_back(w);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h_ode - 1e-12));
    for (std::size_t k = 0; k < steps; ++k) {
        w = rk4_step(generator, w, static_cast<double>(k) * h_ode, h_ode);
        p.grid_.push_back(w);
    }
    return p;
}

CMat UnitaryPath::at(double t) const {
    if (closed_) return closed_(t);
    if (t < 0.0) {
        // Backward integration from 0; only used for derivative probes near 0.
        CMat w = CMat::identity(2);
        double s = 0.0;
        while (s - h_ode_ > t + 1e-15) {
            w = rk4_step(generator_, w, s, -h_ode_);
            s -= h_ode_;
        }
        if (t < s - 1e-15) w = rk4_step(generator_, w, s, t - s);
        return w;
    }
    const double pos = t / h_ode_;
    std::size_t k = std::min(static_cast<std::size_t>(pos), grid_.size() - 1);
    CMat w = grid_[k];
    double s = static_cast<double>(k) * h_ode_;
    while (t - s > h_ode_ + 1e-15) {  // beyond the precomputed horizon
        w = rk4_step(generator_, w, s, h_ode_);
        s += h_ode_;
    }
    if (t - s > 1e-15) w = rk4_step(generator_, w, s, t - s);
    return w;
}

CMat s_of_t(const MetricFlow& flow, const UnitaryPath& w_path, double t) {
    const CMat h = build_h1(flow.params);
    return w_path.at(t) * psd_sqrt(flow.eta0) * expm(h, -t);  // e^{+itH}
}

namespace {

CMat central_difference(const std::function<CMat(double)>& f, double t, double h) {
    CMat d = f(t + h) - f(t - h);
    d *= cplx(1.0 / (2.0 * h), 0.0);
    return d;
}

}  // namespace

CMat h_of_t(const MetricFlow& flow, const UnitaryPath& w_path, double t) {
    const CMat h1 = build_h1(flow.params);
    const CMat s = s_of_t(flow, w_path, t);
    const CMat sdot =
        central_difference([&](double u) { return s_of_t(flow, w_path, u); }, t, fd_step);
    const CMat sinv = s.inverse();
    return s * h1 * sinv + cplx(0.0, 1.0) * (sdot * sinv);
}

CMat h_from_w(const UnitaryPath& w_path, double t) {
    const CMat w = w_path.at(t);
    const CMat wdot = central_difference([&](double u) { return w_path.at(u); }, t, fd_step);
    return cplx(0.0, 1.0) * (wdot * w.adjoint());
}

}  // namespace quasih
