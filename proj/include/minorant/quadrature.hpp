#ifndef MINORANT_QUADRATURE_HPP
#define MINORANT_QUADRATURE_HPP

#include <functional>

namespace minorant {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimated
    int panels = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 8000;
};

// Globally adaptive Gauss-Kronrod 7-15 on [a,b]. The Kronrod nodes are
// interior, so integrable endpoint singularities are never evaluated.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt = {});

// Same, but throws QuadratureFailure if the tolerance was not met.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opt = {});

// Integral over [0,b] of an integrand behaving like c*x^power near 0,
// power > -1. A substitution x = u^k flattens the singularity before the
// adaptive rule runs, which is what makes 1e-10 relative tolerances cheap
// for the angular integrals with grazing singularities.
QuadratureResult integrate_left_power(const std::function<double(double)>& f,
                                      double b, double power,
                                      const QuadratureOptions& opt = {});

double integrate_left_power_or_throw(const std::function<double(double)>& f,
                                     double b, double power,
                                     const QuadratureOptions& opt = {});

}  // namespace minorant

#endif
