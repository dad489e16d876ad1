#ifndef MODEINV_QUADRATURE_HPP
#define MODEINV_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "modeinv/numeric.hpp"

namespace modeinv {

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_intervals = 1 << 16;
};

struct QuadResult {
    cd value{};
    double est_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) on a complex-valued integrand.
/// `breakpoints` must be an increasing partition of the domain including both
/// endpoints; pass the zeros of any oscillatory factor so each panel starts
/// out resolvable.  No exception is thrown on non-convergence; check
/// `converged` (callers decide whether that is an error).
QuadResult integrate_gk(const std::function<cd(double)>& f,
                        const std::vector<double>& breakpoints,
                        const QuadOptions& opt = {});

/// Convenience overload over [a, b] with a single panel.
QuadResult integrate_gk(const std::function<cd(double)>& f, double a, double b,
                        const QuadOptions& opt = {});

/// Partition of [0, T] at the zeros of sin(b t), thinned so at most
/// `max_panels` panels are produced.  Always contains 0 and T.
std::vector<double> sine_zero_partition(double b, double T, int max_panels = 1024);

} // namespace modeinv

#endif
