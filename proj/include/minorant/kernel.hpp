#ifndef MINORANT_KERNEL_HPP
#define MINORANT_KERNEL_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "minorant/quadrature.hpp"

namespace minorant {

// Angular part b(cos theta) of a tensorial collision kernel, evaluated as a
// function of the deviation angle theta in (0, pi].
class AngularProfile {
public:
    enum class Kind { Constant, InversePowerLaw, Tabulated };

    static AngularProfile constant(double value);
    // b(cos theta) = b0 theta^{-1-nu} / sin^{N-2}(theta), with the sine
    // factor evaluated along a bent angle that levels off before pi so the
    // profile stays bounded there (N >= 3). Exact for theta <= 3*pi/4.
    static AngularProfile inverse_power_law(double b0, double nu, int dimension);
    // two-column table (theta ascending, b value), linear interpolation,
    // constant extension beyond the table ends
    static AngularProfile tabulated(std::vector<double> theta,
                                    std::vector<double> value);
    static AngularProfile tabulated_from_file(const std::string& path);

    double operator()(double theta) const { return eval_(theta); }
    Kind kind() const { return kind_; }

private:
    AngularProfile(Kind kind, std::function<double(double)> eval)
        : kind_(kind), eval_(std::move(eval)) {}

    Kind kind_;
    std::function<double(double)> eval_;
};

struct CollisionKernel {
    int dimension = 3;          // N >= 2
    double gamma = 0.0;         // kinetic exponent, in (-N, 1]
    double nu = -1.0;           // angular singularity exponent, < 2
    double b0 = 1.0;            // amplitude of the grazing singularity
    double c_phi = 1.0;         // lower kinetic bound
    double C_phi = 1.0;         // upper kinetic bound
    bool mollified = false;     // flat kinetic factor for |z| <= 1
    AngularProfile profile = AngularProfile::constant(1.0);

    double gamma_plus() const { return gamma > 0.0 ? gamma : 0.0; }
    double gamma_tilde() const { return 2.0 + gamma > 0.0 ? 2.0 + gamma : 0.0; }

    // Kinetic factor Phi at |z|, using the upper (C_phi) or lower (c_phi)
    // form of the sandwich bounds.
    double phi(double z, bool upper_form) const;

    // Throws ConfigError on parameter-range violations, positivity failures
    // of the profile or a mismatch with the declared (b0, nu) asymptotic.
    void validate(double asymptotic_rel_tol = 0.05) const;
};

// Named presets. "constant" derives (nu, b0) = (-(N-1), value) so the
// declared asymptotic matches b*sin^{N-2}.
CollisionKernel make_hard_sphere_kernel(int dimension, double b_value = 1.0);
CollisionKernel make_power_law_kernel(int dimension, double gamma, double nu,
                                      double b0);

// surface measure of the unit sphere S^{d} in R^{d+1}
double sphere_area(int d);
// volume of the unit ball in R^{n}
double ball_volume(int n);

// n_b = |S^{N-2}| * int_0^pi b(cos t) sin^{N-2} t dt. Requires nu < 0.
double angular_mass_nb(const CollisionKernel& kernel,
                       const QuadratureOptions& opt = {});

// m_b = |S^{N-2}| * int_0^pi b(cos t) (1 - cos t) sin^{N-2} t dt. Finite for
// all nu < 2; the (1 - cos t) ~ t^2/2 weight tames the grazing singularity.
double momentum_transfer_mb(const CollisionKernel& kernel,
                            const QuadratureOptions& opt = {});

// Certified lower bound for inf_{pi/4 <= t <= 3pi/4} b(t): dense sampling
// minus a Lipschitz margin, refined until the margin is dominated.
// `lipschitz` < 0 means "estimate by finite differences with a 2x factor".
double angular_infimum_ellb(const CollisionKernel& kernel,
                            double lipschitz = -1.0);

struct SplitAngularIntegrals {
    double n_bS = 0.0;  // angular mass of the cutoff part b 1_{theta >= eps}
    double m_bR = 0.0;  // momentum transfer of the grazing part b 1_{theta <= eps}
};

// Grad-style splitting quantities for non-cutoff kernels (nu in [0,2)),
// with 0 < eps < pi/4.
SplitAngularIntegrals split_kernel(const CollisionKernel& kernel, double eps,
                                   const QuadratureOptions& opt = {});

}  // namespace minorant

#endif
