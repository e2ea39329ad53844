// dyson.hpp — time-dependent Dyson map machinery: the metric flow eta(t), the
// general transform S(t) = W(t) sqrt(eta(0)) e^{itH}, the induced Hermitian
// generator h(t) = S H S^{-1} + i S' S^{-1} = i W' W^dag, and the unitary-path
// ODE i W'(t) = A(t) W(t).
#pragma once

#include <functional>
#include <vector>

#include "quasih/model.hpp"

namespace quasih {

inline constexpr double fd_step = 1e-5;   // central differences
inline constexpr double tol_fd = 1e-6;
inline constexpr double tol_ode = 1e-8;
inline constexpr double default_h_ode = 1e-3;

struct NonHermitianGenerator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// eta(t) = e^{-itH^dag} eta(0) e^{itH}; positivity propagates from t = 0.
struct MetricFlow {
    CMat eta0{2};
    ModelParams params;

    MetricFlow(CMat eta0_, ModelParams p);
};

CMat eta_t(const MetricFlow& flow, double t);

// A differentiable family of 2x2 unitaries W(t), W(0) = 1. Either closed form
// or the reprojected RK4 solution of i W' = A(t) W on a fixed grid, evaluable
// at arbitrary t (partial final step; negative t integrates backwards).
class UnitaryPath {
public:
    using MatrixFn = std::function<CMat(double)>;

    static UnitaryPath identity();
    static UnitaryPath closed_form(MatrixFn w_of_t);

    CMat at(double t) const;

private:
    friend UnitaryPath solve_w_ode(const MatrixFn& generator, double t_end, double h_ode);
    UnitaryPath() = default;

    MatrixFn closed_;          // set for closed-form paths
    MatrixFn generator_;       // set for solved paths
    std::vector<CMat> grid_;   // W at k * h_ode, k = 0..n
    double h_ode_ = 0.0;
};

// Classical RK4 with per-step polar re-unitarization; NonHermitianGenerator if
// A(t) fails Hermiticity at an evaluation point.
UnitaryPath solve_w_ode(const UnitaryPath::MatrixFn& generator, double t_end,
                        double h_ode = default_h_ode);

// S(t) = W(t) sqrt(eta(0)) e^{itH}; satisfies S(t)^dag S(t) = eta(t).
CMat s_of_t(const MetricFlow& flow, const UnitaryPath& w_path, double t);

// h(t) = S H S^{-1} + i S' S^{-1} with S' from central differences.
CMat h_of_t(const MetricFlow& flow, const UnitaryPath& w_path, double t);

// h(t) = i W'(t) W(t)^dag with W' from central differences.
CMat h_from_w(const UnitaryPath& w_path, double t);

}  // namespace quasih
