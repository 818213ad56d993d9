#ifndef MINORANT_SOLVER_HPP
#define MINORANT_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "minorant/grid.hpp"
#include "minorant/kernel.hpp"

namespace minorant {

struct SolverOptions {
    double dt = 0.0;  // 0: largest stable step 0.5 / max_loss
    long samples_per_node = 20000;
    std::uint64_t seed = 1;
    double drift_limit = 1e-3;  // per-step relative mass drift -> UnstableStep
    // gain term is evaluated only inside this ball (inscribed ball of the
    // box by default); outside it the distribution only loses mass
    double active_radius = -1.0;
};

struct SolverStepReport {
    double mass = 0.0;
    double energy = 0.0;
    double mass_drift = 0.0;  // relative to initial mass, this step
    double clamped_mass = 0.0;
};

struct SolverResult {
    std::vector<double> times;  // snapshot times, [0, ..., t_end]
    std::vector<GridDistribution> snapshots;
    std::vector<SolverStepReport> steps;
    double dt = 0.0;
    double mass_drift_total = 0.0;
    double clamped_mass_total = 0.0;
};

// Explicit Euler mild-solution surrogate for cutoff kernels:
// f <- f + dt (Q+(f,f) - L[f] f), with the gain term estimated per node by
// Monte Carlo (mixture proposal: the distribution itself plus a uniform
// floor over the box; pre-collision values read through log-quadratic
// interpolation, which is exact on Maxwellians) and the loss term
// by convolution (closed form for Maxwell molecules). Deterministic for a
// fixed seed: each (step, node) pair owns an independent stream, so results
// do not depend on evaluation order.
SolverResult solve_homogeneous(const CollisionKernel& kernel,
                               const GridDistribution& f0, double t_end,
                               const SolverOptions& options = {});

}  // namespace minorant

#endif
