// analytics.hpp — von Neumann entropy curves and their periods (the doubling
// phenomenon), system-bath entanglement, time-averaged states, concurrence,
// and the classifiers for product metrics and W-equivalence classes.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "quasih/dynamics.hpp"

namespace quasih {

inline constexpr double tol_per = 1e-7;   // relative, period matching
inline constexpr double tol_ent = 1e-10;  // disentanglement tests

struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroState : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlreadyProduct : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDiagonal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary entropy in nats, with the continuous extension 0 ln 0 = 0. Inputs
// within tol_norm of [0, 1] are clamped; anything further out is an error.
double entropy(double pop);

enum class Side { NonHermitian, Hermitian };

// Entropy samples on the uniform grid t_i = i * window / n over two population
// periods, window = 2 pi / omega (endpoint excluded; the curve wraps).
struct EntropyCurve {
    std::vector<double> times;
    std::vector<double> values;
    double window = 0.0;
};

EntropyCurve entropy_curve(const Trajectory& traj, Side side, std::size_t samples);

// Curve for a synthetic population Q(t) = q0 + delta * cos(2 omega t).
EntropyCurve synthetic_entropy_curve(double q0, double delta, double omega,
                                     std::size_t samples);

struct PeriodEstimate {
    double period = 0.0;
    bool stationary = false;
};

// Smallest P > 0 with max_t |f(t+P) - f(t)| <= tol_per * range(f), scanning the
// divisors of the sampling window and refining only when it strictly improves
// the residual. Constant curves report period 0 with the stationary flag.
PeriodEstimate estimate_period(const EntropyCurve& curve);

// Strict local minima over the (wrapping) sampled window.
std::size_t count_local_minima(const EntropyCurve& curve);

// A state A|e_S> + B|e_B> is a product state iff AB = 0.
bool is_disentangled(cplx A, cplx B);

enum class EntanglementClass { AlwaysEntangled, PeriodicTouch };

struct DisentanglementReport {
    EntanglementClass classification;
    std::vector<double> a_zero_times;  // e_S amplitude vanishes (state ~ |e_B>)
    std::vector<double> b_zero_times;  // e_B amplitude vanishes (state ~ |e_S>)
    std::vector<double> all_times;     // merged, sorted
};

// All instants in [0, horizon] at which the chosen side's state is a product
// state, solved in closed form from the vanishing-amplitude conditions.
DisentanglementReport disentanglement_times(const Trajectory& traj, Side side,
                                            double horizon);

// A unitary W making W sqrt(eta) |psi(0)> a product state; |a| = |d| ~ |B| and
// |b| = |c| ~ |A| up to the metric weights. AlreadyProduct if AB = 0.
Unitary2 disentangling_w(const Trajectory& traj);

// Time average of |phi(t)><phi(t)| over one period: q0 on the |e_B> diagonal,
// z the <e_S| . |e_B> entry, z = (a d* + b c*) x Re(A B*).
struct AveragedState {
    double q0;
    cplx z;
};

AveragedState averaged_state(const Trajectory& traj);

// 4x4 two-qubit embedding of the averaged state; H1 occupies span{|01>, |10>}
// of the ordered basis {|00>, |01>, |10>, |11>} with e_S = |10>, e_B = |01>.
CMat embed_two_qubit(const AveragedState& avg);

// W-invariant concurrence of the averaged state: the eigenvalue gap
// sqrt((1-2 q0)^2 + 4|z|^2), identically equal to 2 x |Re(A B*)|.
double concurrence(const AveragedState& avg);

// Full Wootters procedure on a 4x4 density matrix: lambda-spectrum of
// sqrt(sqrt(rho) rho~ sqrt(rho)) with rho~ = (sy x sy) rho* (sy x sy).
double wootters_concurrence(const CMat& rho4);

enum class WClass { EqualStates, EqualEntropies, Generic };

struct WEquivalenceClass {
    WClass variant;
    std::optional<std::pair<double, double>> phases;  // for the two phase forms
};

// Diagonal-phase W => the two reduced states coincide for every initial state;
// anti-diagonal-phase W => the two entropies coincide; anything else is generic.
WEquivalenceClass classify_w(const Unitary2& w);

bool is_product_metric(const Metric2& eta);

struct MetricFactorization {
    CMat lambda_s{2};
    CMat lambda_b{2};
    CMat embedding{4};           // lambda_s (x) lambda_b
    double offblock_leakage;     // coupling between span{|v11>,|v22>} and its complement
    double restriction_residual; // restriction vs eta, max-norm
};

// Factors a diagonal metric as the restriction of a product metric; the
// non-uniqueness is fixed by lambda_s = identity. NotDiagonal otherwise.
MetricFactorization factor_metric(const Metric2& eta);

}  // namespace quasih
