#ifndef MINORANT_BKW_HPP
#define MINORANT_BKW_HPP

#include <optional>

#include "minorant/bounds.hpp"
#include "minorant/grid.hpp"
#include "minorant/kernel.hpp"

namespace minorant {

// Exact self-similar solution for Maxwell molecules, unit mass and energy N
// (temperature 1). S is the variance-scale shape parameter,
// S(t) = 1 - (1 - S0) exp(-rate t); pointwise nonnegativity needs
// S >= N/(N+2).
struct BKWState {
    int dimension = 3;
    double S0 = 0.72;
    double rate = 1.0;
    double t0 = 0.0;

    double S_at(double t) const;
    void validate() const;  // throws InvalidS
};

double bkw_evaluate(const BKWState& state, double t, const Vec& v);

// closed-form moment int f |v|^q dv via Gaussian moments
double bkw_moment(const BKWState& state, double t, double q);
// -int f log f by radial quadrature
double bkw_entropy(const BKWState& state, double t);
// ||f||_{L^p} by radial quadrature
double bkw_lp_norm(const BKWState& state, double t, double p);

GridDistribution bkw_grid(const BKWState& state, double t, int points_per_axis,
                          double v_max);

// Relaxation rate consistent with the collision kernel, so that the BKW
// profile solves the homogeneous equation: rate = m2 / 4 with
// m2 = int_{S^2} b sin^2 theta dsigma. Maxwell molecules in dimension 3.
double bkw_rate_maxwell(const CollisionKernel& kernel);

// Uniform-in-time hydrodynamic bounds of the BKW solution on [t_start, inf):
// rho_min = 1 and E = 1 + N exactly (conserved moments); H and Eprime from
// a sampled shape grid with an adjacent-sample margin; W from grid finite
// differences at t_start, where the profile is least smooth.
AprioriBounds bkw_bounds(const BKWState& state, double t_start,
                         double gamma_tilde = 2.0, int w_grid_points = 48,
                         double w_grid_vmax = 8.0,
                         std::optional<double> lp_exponent = std::nullopt);

}  // namespace minorant

#endif
