// test_helpers.hpp — shared matchers for the numeric test suites.
#pragma once

#include <doctest.h>

#include "quasih/linalg.hpp"

namespace quasih::test {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

inline bool mat_near(const CMat& a, const CMat& b, double tol) {
    return a.dim() == b.dim() && (a - b).max_norm() <= tol;
}

inline bool vec_near(const CVec& a, const CVec& b, double tol) {
    return a.dim() == b.dim() && (a - b).norm() <= tol;
}

}  // namespace quasih::test
