#include "quasih/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace quasih {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double entropy(double pop) {
    if (pop < -tol_norm || pop > 1.0 + tol_norm)
        throw OutOfRange("entropy: population " + std::to_string(pop) + " outside [0, 1]");
    const double q = std::clamp(pop, 0.0, 1.0);
    double s = 0.0;
    if (q > 0.0) s -= q * std::log(q);
    if (q < 1.0) s -= (1.0 - q) * std::log(1.0 - q);
    return s;
}

namespace {

EntropyCurve sample_curve(double window, std::size_t samples,
                          const std::function<double(double)>& pop) {
    if (samples < 64) throw std::invalid_argument("entropy_curve: needs at least 64 samples");
    EntropyCurve c;
    c.window = window;
    c.times.reserve(samples);
    c.values.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = window * static_cast<double>(i) / static_cast<double>(samples);
        c.times.push_back(t);
        c.values.push_back(entropy(pop(t)));
    }
    return c;
}

}  // namespace

EntropyCurve entropy_curve(const Trajectory& traj, Side side, std::size_t samples) {
    const double window = 2.0 * kPi / traj.params.omega;
    if (side == Side::NonHermitian)
        return sample_curve(window, samples, [&](double t) { return population_p(traj, t); });
    return sample_curve(window, samples, [&](double t) { return population_q(traj, t); });
}

EntropyCurve synthetic_entropy_curve(double q0, double delta, double omega,
                                     std::size_t samples) {
    const double window = 2.0 * kPi / omega;
    return sample_curve(window, samples,
                        [=](double t) { return q0 + delta * std::cos(2.0 * omega * t); });
}

namespace {

// Linear interpolation on the wrapping grid.
double curve_at(const EntropyCurve& c, double t) {
    const std::size_t n = c.values.size();
    double s = std::fmod(t, c.window);
    if (s < 0.0) s += c.window;
    const double pos = s / c.window * static_cast<double>(n);
    const std::size_t lo = std::min(static_cast<std::size_t>(pos), n - 1);
    const double frac = pos - static_cast<double>(lo);
    return c.values[lo] * (1.0 - frac) + c.values[(lo + 1) % n] * frac;
}

double shift_residual(const EntropyCurve& c, std::size_t shift) {
    const std::size_t n = c.values.size();
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        r = std::max(r, std::abs(c.values[(i + shift) % n] - c.values[i]));
    return r;
}

double interp_residual(const EntropyCurve& c, double period) {
    double r = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        r = std::max(r, std::abs(curve_at(c, c.times[i] + period) - c.values[i]));
    return r;
}

}  // namespace

PeriodEstimate estimate_period(const EntropyCurve& curve) {
    const std::size_t n = curve.values.size();
    if (n < 512)
        throw InsufficientSamples("estimate_period: needs >= 256 samples per population period");
    const auto [lo, hi] = std::minmax_element(curve.values.begin(), curve.values.end());
    const double range = *hi - *lo;
    if (range <= tol_per * std::max(1.0, std::abs(*hi))) return {0.0, true};

    std::size_t best_k = 1;
    double best_res = shift_residual(curve, 0);  // == 0, window itself always wraps
    for (std::size_t k = 64; k >= 2; --k) {
        if (n % k != 0) continue;
        const double res = shift_residual(curve, n / k);
        if (res <= tol_per * range) {
            best_k = k;
            best_res = res;
            break;
        }
    }
    const double p0 = curve.window / static_cast<double>(best_k);

    // Golden-section refinement in one grid-step bracket; kept only when it
    // strictly beats the divisor candidate.
    const double dt = curve.window / static_cast<double>(n);
    double a = p0 - dt, b = p0 + dt;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = interp_residual(curve, x1), f2 = interp_residual(curve, x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = interp_residual(curve, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = interp_residual(curve, x2);
        }
    }
    const double p_ref = 0.5 * (a + b);
    if (interp_residual(curve, p_ref) < best_res) return {p_ref, false};
    return {p0, false};
}

std::size_t count_local_minima(const EntropyCurve& curve) {
    const std::size_t n = curve.values.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = curve.values[i];
        if (v < curve.values[(i + n - 1) % n] && v < curve.values[(i + 1) % n]) ++count;
    }
    return count;
}

bool is_disentangled(cplx A, cplx B) {
    const double scale = std::norm(A) + std::norm(B);
    if (scale <= 0.0) throw ZeroState("is_disentangled: null state");
    return std::abs(A * B) <= tol_ent * scale;
}

namespace {

// Roots of U cos(w t) - i V sin(w t) = 0 in [0, horizon], or no roots when the
// phase condition Re(U V*) = 0 fails.
std::vector<double> amplitude_zero_times(cplx u, cplx v, double omega, double horizon) {
    std::vector<double> roots;
    const double su = std::abs(u);
    const double sv = std::abs(v);
    const double scale = std::max(su, sv);
    if (scale <= 0.0) return roots;
    auto collect = [&](double base) {
        // base in [0, pi): all roots are base + k pi over omega
        for (double th = base;; th += kPi) {
            const double t = th / omega;
            if (t > horizon + 1e-15) break;
            roots.push_back(t);
        }
    };
    if (su <= tol_ent * scale) {
        collect(0.0);  // sin(w t) = 0
        return roots;
    }
    if (sv <= tol_ent * scale) {
        collect(kPi / 2.0);  // cos(w t) = 0
        return roots;
    }
    const cplx uv = u * std::conj(v);
    if (std::abs(uv.real()) > tol_ent * su * sv) return roots;  // never vanishes
    const double tan_th = uv.imag() / std::norm(v);
    double base = std::atan(tan_th);
    if (base < 0.0) base += kPi;
    collect(base);
    return roots;
}

struct AmplitudePair {
    cplx u_a, v_a;  // e_S amplitude: u cos - i v sin
    cplx u_b, v_b;  // e_B amplitude
};

AmplitudePair side_amplitudes(const Trajectory& traj, Side side) {
    const ModelParams& p = traj.params;
    const cplx A = traj.initial.A;
    const cplx B = traj.initial.B;
    if (side == Side::NonHermitian) return {A, B * (p.a1 / p.a2), B, A * (p.a2 / p.a1)};
    const double x = p.x();
    const cplx g0 = std::sqrt(x * p.a2 / p.a1) * A;
    const cplx d0 = std::sqrt(x * p.a1 / p.a2) * B;
    const Unitary2& w = traj.w;
    return {w.a * g0 + w.b * d0, w.a * d0 + w.b * g0, w.c * g0 + w.d * d0, w.c * d0 + w.d * g0};
}

}  // namespace

DisentanglementReport disentanglement_times(const Trajectory& traj, Side side, double horizon) {
    if (side == Side::Hermitian) (void)traj.params.x();  // diagonal metric required
    const AmplitudePair amp = side_amplitudes(traj, side);
    DisentanglementReport rep{EntanglementClass::PeriodicTouch, {}, {}, {}};
    rep.a_zero_times = amplitude_zero_times(amp.u_a, amp.v_a, traj.params.omega, horizon);
    rep.b_zero_times = amplitude_zero_times(amp.u_b, amp.v_b, traj.params.omega, horizon);
    rep.all_times = rep.a_zero_times;
    rep.all_times.insert(rep.all_times.end(), rep.b_zero_times.begin(), rep.b_zero_times.end());
    std::sort(rep.all_times.begin(), rep.all_times.end());

    // Entangled forever iff neither amplitude can vanish at any time; decide on
    // the analytic criterion, not the horizon.
    auto family_has_roots = [](cplx u, cplx v) {
        const double su = std::abs(u), sv = std::abs(v);
        const double scale = std::max(su, sv);
        if (scale <= 0.0) return false;
        if (su <= tol_ent * scale || sv <= tol_ent * scale) return true;
        return std::abs((u * std::conj(v)).real()) <= tol_ent * su * sv;
    };
    const bool touches = family_has_roots(amp.u_a, amp.v_a) || family_has_roots(amp.u_b, amp.v_b);
    rep.classification =
        touches ? EntanglementClass::PeriodicTouch : EntanglementClass::AlwaysEntangled;
    return rep;
}

Unitary2 disentangling_w(const Trajectory& traj) {
    const ModelParams& p = traj.params;
    const cplx A = traj.initial.A;
    const cplx B = traj.initial.B;
    if (is_disentangled(A, B)) throw AlreadyProduct("disentangling_w: state is already a product");
    const double x = p.x();
    const cplx g0 = std::sqrt(x * p.a2 / p.a1) * A;
    const cplx d0 = std::sqrt(x * p.a1 / p.a2) * B;
    // Rows (d0, -g0) and (g0*, d0*): kills the e_S component of (g0, d0).
    return {d0, -g0, std::conj(g0), std::conj(d0)};
}

AveragedState averaged_state(const Trajectory& traj) {
    const double x = traj.params.x();
    const cplx ab = traj.initial.A * std::conj(traj.initial.B);
    const Unitary2& w = traj.w;
    const double q0 = 0.5 + 2.0 * x * ab.real() * (w.c * std::conj(w.d)).real();
    const cplx z = (w.a * std::conj(w.d) + w.b * std::conj(w.c)) * x * ab.real();
    return {q0, z};
}

CMat embed_two_qubit(const AveragedState& avg) {
    CMat rho(4);
    rho(1, 1) = avg.q0;        // |01> = e_B
    rho(2, 2) = 1.0 - avg.q0;  // |10> = e_S
    rho(2, 1) = avg.z;
    rho(1, 2) = std::conj(avg.z);
    return rho;
}

double concurrence(const AveragedState& avg) {
    const double gap = std::hypot(1.0 - 2.0 * avg.q0, 2.0 * std::abs(avg.z));
    return std::clamp(gap, 0.0, 1.0);
}

double wootters_concurrence(const CMat& rho4) {
    if (rho4.dim() != 4) throw DimensionMismatch("wootters_concurrence: expects a 4x4 state");
    const cplx i(0.0, 1.0);
    const CMat sy = CMat::mat2(0.0, -i, i, 0.0);
    const CMat syy = kron2(sy, sy);
    const CMat rho_tilde = syy * rho4.conj() * syy;
    const CMat root = psd_sqrt(rho4);
    const HermEig eig = herm_eig(root * rho_tilde * root);
    double c = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double lam = std::sqrt(std::max(eig.values[k], 0.0));
        c += (k == 3 ? lam : -lam);  // ascending order: largest enters positively
    }
    return std::max(c, 0.0);
}

WEquivalenceClass classify_w(const Unitary2& w) {
    if (std::abs(w.b) <= tol_eig && std::abs(w.c) <= tol_eig)
        return {WClass::EqualStates, std::make_pair(std::arg(w.a), std::arg(w.d))};
    if (std::abs(w.a) <= tol_eig && std::abs(w.d) <= tol_eig)
        return {WClass::EqualEntropies, std::make_pair(std::arg(w.b), std::arg(w.c))};
    return {WClass::Generic, std::nullopt};
}

bool is_product_metric(const Metric2& eta) {
    return std::abs(eta.matrix(0, 1)) <= tol_eig && std::abs(eta.matrix(1, 0)) <= tol_eig;
}

MetricFactorization factor_metric(const Metric2& eta) {
    if (!is_product_metric(eta))
        throw NotDiagonal("factor_metric: metric has off-diagonal entries");
    MetricFactorization f;
    f.lambda_s = CMat::identity(2);
    f.lambda_b = CMat::diag2(eta.matrix(0, 0).real(), eta.matrix(1, 1).real());
    f.embedding = kron2(f.lambda_s, f.lambda_b);

    // H1 sits on coordinates {0, 3} = {|v11>, |v22>}; leakage is any coupling
    // into the complement {1, 2}.
    double leak = 0.0;
    for (const std::size_t in : {std::size_t{0}, std::size_t{3}})
        for (const std::size_t out : {std::size_t{1}, std::size_t{2}}) {
            leak = std::max(leak, std::abs(f.embedding(out, in)));
            leak = std::max(leak, std::abs(f.embedding(in, out)));
        }
    f.offblock_leakage = leak;

    const CMat restr = CMat::mat2(f.embedding(0, 0), f.embedding(0, 3), f.embedding(3, 0),
                                  f.embedding(3, 3));
    f.restriction_residual = (restr - eta.matrix).max_norm();
    return f;
}

}  // namespace quasih
