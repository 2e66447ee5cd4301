#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace nk {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    // hard cap on the number of subintervals before QuadratureFailure
    std::size_t max_intervals = 1000000;
};

struct QuadResult {
    std::complex<double> value;
    double abs_error;
    std::size_t intervals;
};

// Globally adaptive Gauss-Kronrod (G7,K15) integration of a complex-valued
// integrand over the finite interval [a, b].  Refinement always splits the
// segment with the largest error estimate; the final value is re-summed in
// left-to-right segment order, so results are deterministic and conjugating
// the integrand conjugates the result bit-exactly.
//
// Terminates when the summed error estimate is <= max(abs_tol, rel_tol*|I|).
// Throws QuadratureFailure when max_intervals is exceeded first.
QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                              double a, double b,
                              double abs_tol, double rel_tol,
                              std::size_t max_intervals);

// Single (G7,K15) panel over [a, b]; err receives the |K15-G7| estimate.
std::complex<double> gk15_panel(const std::function<std::complex<double>(double)>& f,
                                double a, double b, double& err);

} // namespace nk
