#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <limits>

namespace stit {

// Adaptive Gauss-Kronrod (G7,K15) integration. `tol` bounds the error
// estimate relative to the L1 norm of the integrand; `err` receives an
// absolute error estimate. Infinite limits are supported.
struct QuadratureConfig {
    double tol = 1e-12;
    unsigned max_depth = 15;
};

template <typename F>
double integrate(const F& f, double a, double b, const QuadratureConfig& q = {},
                 double* err = nullptr) {
    double error = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, q.max_depth, q.tol, &error);
    if (err) *err = error;
    return value;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace stit
