// quadrature.hpp — composite Simpson rule used by the analytic-mean cross-checks.
#pragma once

#include <cstddef>
#include <stdexcept>

namespace quasih {

template <typename F>
double simpson(F&& f, double a, double b, std::size_t panels) {
    if (panels == 0 || panels % 2 != 0)
        throw std::invalid_argument("simpson: panel count must be even and positive");
    const double h = (b - a) / static_cast<double>(panels);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace quasih
