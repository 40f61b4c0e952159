// quadrature.hpp — adaptive Gauss-Kronrod wrapper with a convergence check

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "dephasim/errors.hpp"

namespace dephasim::detail {

// Integrates f over [a, b] to the requested relative tolerance and throws
// NumericalError with diagnostics when the error estimate does not reach it.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol, const std::string& what) {
    constexpr unsigned max_depth = 22;
    double error = 0.0;
    double l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol / 10.0, &error, &l1);
    double scale = std::max(std::abs(value), 1e-300);
    if (!(error <= rel_tol * scale) && error > 1e-305) {
        std::ostringstream msg;
        msg << "quadrature for " << what << " on [" << a << ", " << b
            << "] did not converge: estimated error " << error << ", value " << value
            << ", L1 " << l1 << ", relative tolerance " << rel_tol;
        throw NumericalError(msg.str());
    }
    return value;
}

} // namespace dephasim::detail
