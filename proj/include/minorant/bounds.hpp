#ifndef MINORANT_BOUNDS_HPP
#define MINORANT_BOUNDS_HPP

#include <optional>

#include "minorant/grid.hpp"
#include "minorant/kernel.hpp"

namespace minorant {

// Uniform hydrodynamic bounds feeding every certificate constant:
// rho_min is a lower bound on the local mass, E an upper bound on local
// mass + energy, Eprime on the gamma_tilde-weighted energy, H on |entropy|,
// W on the W^{2,inf} norm, (Lp_value, p_exponent) on an L^p norm.
struct AprioriBounds {
    double rho_min = 0.0;
    double E = 0.0;
    std::optional<double> Eprime;
    double H = 0.0;
    std::optional<double> Lp_value;
    std::optional<double> p_exponent;
    std::optional<double> W;

    void validate() const;  // throws InvalidBounds
};

struct LocalFunctionals {
    double rho = 0.0;     // mass
    double e = 0.0;       // energy int f |v|^2
    double eprime = 0.0;  // int f |v|^{gamma_tilde}
    double h = 0.0;       // entropy -int f log f, 0 log 0 = 0
    double lp = 0.0;      // L^p norm for the requested p
    double w = 0.0;       // W^{2,inf} surrogate from centered differences
};

LocalFunctionals local_functionals(const GridDistribution& f,
                                   double gamma_tilde, double p = 2.0);

// closed form for the entropy of a Maxwellian with mass rho, temperature
// theta in dimension N (test oracle)
double maxwellian_entropy(double rho, double theta, int dimension);

// C_L with explicit angular mass (used for split kernels); selects case (i)
// for gamma >= 0 or mollified kernels and case (ii) otherwise, where the
// L^p bound with p > N/(N+gamma) is required.
double loss_bound_CL_with_mass(double n_b, const CollisionKernel& kernel,
                               const AprioriBounds& bounds, double cst);

// C_L such that L[g](v) <= C_L <v>^{gamma+} for all g obeying `bounds`,
// cst being the calibrated universal constant. Requires nu < 0.
double loss_bound_CL(const CollisionKernel& kernel, const AprioriBounds& bounds,
                     double cst);

// C_S for the grazing part b 1_{theta <= eps} of a non-cutoff kernel.
double s_bound_CS(const CollisionKernel& kernel, const AprioriBounds& bounds,
                  double eps, double cst);

// Coefficient C with |Q^1_eps(f,f)(v)| <= C <v>^{gamma_tilde}. Uses the
// bridge ||f||_{L^1_gamma_tilde} <= E + Eprime.
double q1_bound_coefficient(const CollisionKernel& kernel,
                            const AprioriBounds& bounds, double eps,
                            double cst);

// Direct midpoint quadrature of L[g](v) = n_b (Phi * g)(v); oracle against
// loss_bound_CL. Cells where v coincides with a node contribute 0 when the
// kinetic factor is singular there.
double loss_evaluate(const CollisionKernel& kernel, const GridDistribution& g,
                     const Vec& v, bool upper_form = true);

// The recurring constant of the non-cutoff Duhamel estimates: C_f such that
// L_eps <= C_f n_bS <v>^{gamma+}, S_eps <= C_f m_bR <v>^{gamma+} and
// Q^1_eps <= C_f m_bR <v>^{gamma_tilde}. Assembled as the max of the three
// eps-free factors.
struct CfBreakdown {
    double loss_factor = 0.0;
    double cancellation_factor = 0.0;
    double q1_factor = 0.0;
    double value = 0.0;
};

CfBreakdown assemble_Cf(const CollisionKernel& kernel,
                        const AprioriBounds& bounds, double cst_CL,
                        double cst_Q1);

}  // namespace minorant

#endif
