#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncbesq::quad {

struct Result {
    double value;
    double error;
};

// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-11, unsigned max_depth = 18) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return {0.0, 0.0};
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
    if (!std::isfinite(v)) throw std::runtime_error("integrate: non-finite result");
    return {v, err};
}

template <class F>
double integral(F&& f, double a, double b, double rel_tol = 1e-11) {
    return integrate(std::forward<F>(f), a, b, rel_tol).value;
}

inline constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace ncbesq::quad
