#ifndef MINORANT_UPHEAVAL_HPP
#define MINORANT_UPHEAVAL_HPP

#include <string>
#include <vector>

#include "minorant/bounds.hpp"
#include "minorant/kernel.hpp"

namespace minorant {

// Calibrated universal constants consumed by the cascades. cst_spread and
// cst_up come from the Monte Carlo calibrations; cst_CL from the loss-bound
// calibration; cst_Q1 has no desk-scale oracle and defaults to 1.
struct UniversalConstants {
    double cst_spread = 1.0;
    double cst_CL = 1.0;
    double cst_up = 1.0;
    double cst_Q1 = 1.0;
};

// How delta0 is chosen in the cutoff regime, where the source result only
// says it depends on upper bounds of energy and entropy.
struct Delta0Rule {
    enum class Kind { User, Entropy };
    Kind kind = Kind::Entropy;
    double delta0 = 1.0;   // user value
    double kappa0 = 1.0;   // entropy rule: delta0 = R0 exp(-k1 (H + k0 E)/rho)
    double kappa1 = 1.0;

    static Delta0Rule user(double value);
    static Delta0Rule entropy(double kappa0 = 1.0, double kappa1 = 1.0);
    std::string describe() const;
};

enum class Regime { Cutoff, Noncutoff };

// Initial data of the spreading induction: localization radius R0 for the
// upheaval point, seed ball radius delta0, seed height eta0 and the cascade
// seed a0 after Duhamel damping. Heights are stored as natural logs.
struct UpheavalSeed {
    Regime regime = Regime::Cutoff;
    double R0 = 0.0;
    double delta0 = 0.0;
    double log_eta0 = 0.0;
    double log_a0 = 0.0;
    double tau = 0.0;
    double C_L = 0.0;  // loss bound used for the Duhamel damping (cutoff)

    // non-cutoff extras
    double eps0 = 0.0;
    double tau_max = 0.0;
    double C_f = 0.0;

    std::vector<std::string> flags;
};

UpheavalSeed upheaval_cutoff(const CollisionKernel& kernel,
                             const AprioriBounds& bounds, double tau,
                             const UniversalConstants& csts,
                             const Delta0Rule& rule = Delta0Rule::entropy());

UpheavalSeed upheaval_noncutoff(const CollisionKernel& kernel,
                                const AprioriBounds& bounds,
                                double tau_request,
                                const UniversalConstants& csts);

}  // namespace minorant

#endif
