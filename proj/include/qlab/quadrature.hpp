#pragma once

#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace qlab {

// Adaptive integral of f over the finite interval (a, b). tanh-sinh copes
// with the integrable endpoint singularities the probability-space
// substitutions produce.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(std::forward<F>(f), a, b, tol);
}

}  // namespace qlab
