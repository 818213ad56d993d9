#ifndef MINORANT_GEOMETRY_HPP
#define MINORANT_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "minorant/grid.hpp"
#include "minorant/kernel.hpp"
#include "minorant/rng.hpp"

namespace minorant {

// Geometry constants of the Carleman-representation cone reduction:
// a = cot(3pi/8) = sqrt(2) - 1, b = cot(pi/8) = sqrt(2) + 1,
// lambda = (b - a)/(b + a) = 1/sqrt(2).
struct CarlemanGeometry {
    double a;
    double b_geo;
    double lambda;

    CarlemanGeometry();
};

// Exponent of the xi factor in the spreading estimate. The induction
// recursion is stated with xi^{N/2+1}; the one-step spreading display and
// the proof's intermediate step carry xi^{N/2-1}. Both are exposed and the
// calibration must use the same mode as the consumer of its constant.
enum class XiExponentMode { Stated, ProofStep };

double xi_exponent(int dimension, XiExponentMode mode);

struct SpreadingResult {
    double coefficient = 0.0;  // height of the produced indicator
    double radius = 0.0;       // radius of the produced ball
    Vec center;                // carried through unchanged
};

// Lower bound Q+(1_{B(c,R)}, 1_{B(c,r)}) >= coefficient on B(c, radius)
// with coefficient = cst * ell_b * c_phi * r^{N-3} R^{3+gamma} xi^e and
// radius = sqrt(r^2 + R^2) (1 - xi). For gamma < 0 the kinetic reduction
// Phi >= c_phi R^gamma requires R >= 1; callers rescale first.
SpreadingResult spreading_bound(const CollisionKernel& kernel, double r,
                                double R, double xi, double cst_spread,
                                const Vec& center = Vec{},
                                XiExponentMode mode = XiExponentMode::ProofStep);

struct QplusEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

// Monte Carlo estimate of Q+(1_{B(c,R)}, 1_{B(c,r)})(v): stratified radial
// sampling of v_* with antithetic pairs, deterministic seed. Exact 0 when
// |v - c| exceeds the energy shell sqrt(r^2 + R^2). Throws
// InsufficientSamples when require_precision and the standard error exceeds
// 5% of a positive estimate.
QplusEstimate qplus_indicator_quadrature(const CollisionKernel& kernel,
                                         double r, double R, const Vec& v,
                                         long samples, std::uint64_t seed,
                                         const Vec& center = Vec{},
                                         bool require_precision = true);

// Same sampler for general compactly supported factors:
// Q+(g, f)(v) with g, f supported in balls of the given radii around 0.
QplusEstimate qplus_general(const CollisionKernel& kernel,
                            const std::function<double(const Vec&)>& g,
                            double support_g,
                            const std::function<double(const Vec&)>& f,
                            double support_f, const Vec& v, long samples,
                            std::uint64_t seed);

// The proof's reduced two-dimensional lower-bound integral for
// Q+(1_{B(0,1)}, 1_{B(0,p)})(z e_N), including the ell_b and kinetic
// prefactors, up to one remaining universal measure constant. Returns 0
// when the y-interval is empty (no lower bound at this z).
double carleman_reduced_integral(const CollisionKernel& kernel, double p,
                                 double z);

struct SpreadingSample {
    double r = 0.0;
    double R = 0.0;
    double xi = 0.0;
    Vec v;
};

struct SpreadingCalibration {
    double cst_spread = 0.0;  // min ratio / 1.5
    XiExponentMode mode = XiExponentMode::Stated;
    struct Entry {
        SpreadingSample sample;
        double qplus = 0.0;
        double std_error = 0.0;
        double formula = 0.0;  // denominator with cst = 1
        double ratio = 0.0;
    };
    std::vector<Entry> entries;
};

// Certify-by-sampling value for the universal spreading constant: the min
// over the plan of qplus / formula, divided by a 1.5 safety factor.
SpreadingCalibration calibrate_spreading_cst(
    const CollisionKernel& kernel, const std::vector<SpreadingSample>& plan,
    long samples, std::uint64_t seed,
    XiExponentMode mode = XiExponentMode::Stated);

std::vector<SpreadingSample> default_spreading_plan(int dimension);

}  // namespace minorant

#endif
