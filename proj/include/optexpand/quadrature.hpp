#ifndef OPTEXPAND_QUADRATURE_HPP
#define OPTEXPAND_QUADRATURE_HPP

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "optexpand/errors.hpp"

namespace optexpand::quadrature {

// Adaptive Gauss-Kronrod on a smooth integrand. Throws convergence_error
// if the error estimate does not reach the requested absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12) {
    if (a == b) return 0.0;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, 1e-14, &err);
    if (!(err <= abs_tol) || !std::isfinite(v))
        throw convergence_error("gauss_kronrod did not converge: error estimate " +
                                std::to_string(err));
    return v;
}

} // namespace optexpand::quadrature

#endif
