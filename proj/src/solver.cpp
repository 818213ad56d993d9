#include "minorant/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "minorant/errors.hpp"
#include "minorant/rng.hpp"

namespace minorant {

namespace {

// Walker alias table for O(1) sampling of a discrete distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& weights) {
        const std::size_t k = weights.size();
        prob_.assign(k, 0.0);
        alias_.assign(k, 0);
        total_ = 0.0;
        for (double w : weights) total_ += w;
        if (!(total_ > 0.0)) throw InvalidBounds("alias table needs mass > 0");

        std::vector<double> scaled(k);
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < k; ++i) {
            scaled[i] = weights[i] * k / total_;
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = scaled[l] + scaled[s] - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) prob_[i] = 1.0;
        for (std::size_t i : small) prob_[i] = 1.0;
    }

    std::size_t sample(double u) const {
        const double scaled = u * static_cast<double>(prob_.size());
        std::size_t i = static_cast<std::size_t>(scaled);
        if (i >= prob_.size()) i = prob_.size() - 1;
        const double frac = scaled - static_cast<double>(i);
        return frac < prob_[i] ? i : alias_[i];
    }

    double total() const { return total_; }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
    double total_ = 0.0;
};

struct KernelFastPath {
    bool constant_phi = false;
    double phi_value = 0.0;
    bool constant_profile = false;
    double profile_value = 0.0;
};

KernelFastPath detect_fast_path(const CollisionKernel& kernel) {
    KernelFastPath fp;
    if (kernel.gamma == 0.0) {
        fp.constant_phi = true;
        fp.phi_value = kernel.C_phi;
    }
    if (kernel.profile.kind() == AngularProfile::Kind::Constant) {
        fp.constant_profile = true;
        fp.profile_value = kernel.profile(M_PI / 2.0);
    }
    return fp;
}

}  // namespace

SolverResult solve_homogeneous(const CollisionKernel& kernel,
                               const GridDistribution& f0, double t_end,
                               const SolverOptions& options) {
    if (!(kernel.nu < 0.0)) {
        throw ConfigError("the solver handles cutoff kernels only");
    }
    if (kernel.c_phi != kernel.C_phi) {
        throw ConfigError(
            "the solver integrates an exact kernel; set c_phi == C_phi");
    }
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    const int dim = f0.dimension();
    const int m = f0.points_per_axis();
    const std::size_t n_nodes = f0.node_count();
    const double cell_vol = f0.cell_volume();
    const double n_b = angular_mass_nb(kernel);
    const KernelFastPath fast = detect_fast_path(kernel);
    if (!fast.constant_phi) {
        // direct convolution loss: O(nodes^2) per step
        if (n_nodes * n_nodes > 40000000ULL) {
            throw ConfigError(
                "grid too large for the direct loss convolution with a "
                "non-constant kinetic factor");
        }
    }

    auto loss_field = [&](const GridDistribution& f,
                          std::vector<double>& out) {
        const double rho =
            std::accumulate(f.values().begin(), f.values().end(), 0.0) *
            cell_vol;
        if (fast.constant_phi) {
            std::fill(out.begin(), out.end(), n_b * fast.phi_value * rho);
            return;
        }
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const Vec vi = f.node(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < n_nodes; ++j) {
                const double fj = f[j];
                if (fj == 0.0) continue;
                const double z = (vi - f.node(j)).norm();
                if (z == 0.0 && kernel.gamma < 0.0 && !kernel.mollified) continue;
                acc += kernel.phi(z, true) * fj;
            }
            out[i] = n_b * acc * cell_vol;
        }
    };

    std::vector<double> loss(n_nodes, 0.0);
    loss_field(f0, loss);
    const double max_loss = *std::max_element(loss.begin(), loss.end());
    double dt = options.dt;
    const double dt_cfl = 0.5 / max_loss;
    if (dt <= 0.0) dt = dt_cfl;
    if (dt > dt_cfl) {
        throw ConfigError("dt exceeds the stability bound 0.5 / max_loss");
    }
    const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
    dt = t_end / steps;

    const double active_radius =
        options.active_radius > 0.0 ? options.active_radius : f0.v_max();
    const double sphere = sphere_area(dim - 1);
    const double box_volume = std::pow(2.0 * f0.v_max(), dim);
    const double mix = 0.1;  // uniform floor of the proposal
    const double v_max = f0.v_max();
    const double h = f0.spacing();

    // flat nearest-cell lookup
    const auto cell_of = [&](const double* v, std::size_t& flat) -> bool {
        flat = 0;
        for (int d = dim - 1; d >= 0; --d) {
            const double t = (v[d] + v_max) / h;
            if (t < 0.0 || t >= m) return false;
            flat = flat * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(t);
        }
        return true;
    };

    SolverResult result;
    result.dt = dt;
    GridDistribution f = f0;
    const double mass0 =
        std::accumulate(f.values().begin(), f.values().end(), 0.0) * cell_vol;

    // Quadratic interpolation of log f between cell centers: the log of a
    // Maxwellian is a quadratic form, so the tensor-product 3-point stencil
    // reproduces Gaussian profiles exactly and the steep tails do not bias
    // the gain quadrature. Falls back to the cell value where the stencil
    // touches empty cells (negative Lagrange weights cannot meet log 0).
    std::vector<double> logf(n_nodes, 0.0);
    auto rebuild_logf = [&]() {
        for (std::size_t i = 0; i < n_nodes; ++i) {
            logf[i] = f[i] > 0.0 ? std::log(f[i]) : -1e300;
        }
    };
    const auto log_quad_at = [&](const double* v) -> double {
        int center[3] = {0, 0, 0};
        double weights[3][3];
        for (int d = 0; d < dim; ++d) {
            const double t = (v[d] + v_max) / h - 0.5;
            if (t < -0.5 || t > m - 0.5) return -1e300;  // outside the box
            int c = static_cast<int>(std::lround(t));
            if (c < 1) c = 1;
            if (c > m - 2) c = m - 2;
            center[d] = c;
            const double s = t - c;  // offset, in [-1, 1] near the box edge
            weights[d][0] = 0.5 * s * (s - 1.0);
            weights[d][1] = 1.0 - s * s;
            weights[d][2] = 0.5 * s * (s + 1.0);
        }
        double acc = 0.0;
        bool fallback = false;
        if (dim == 3) {
            for (int kz = -1; kz <= 1 && !fallback; ++kz) {
                const std::size_t plane =
                    static_cast<std::size_t>(center[2] + kz) *
                    static_cast<std::size_t>(m);
                for (int ky = -1; ky <= 1 && !fallback; ++ky) {
                    const std::size_t row =
                        (plane + static_cast<std::size_t>(center[1] + ky)) *
                        static_cast<std::size_t>(m);
                    const double wyz = weights[1][ky + 1] * weights[2][kz + 1];
                    for (int kx = -1; kx <= 1; ++kx) {
                        const double lf =
                            logf[row + static_cast<std::size_t>(center[0] + kx)];
                        if (lf < -700.0) {
                            fallback = true;
                            break;
                        }
                        acc += weights[0][kx + 1] * wyz * lf;
                    }
                }
            }
        } else {
            for (int ky = -1; ky <= 1 && !fallback; ++ky) {
                const std::size_t row =
                    static_cast<std::size_t>(center[1] + ky) *
                    static_cast<std::size_t>(m);
                for (int kx = -1; kx <= 1; ++kx) {
                    const double lf =
                        logf[row + static_cast<std::size_t>(center[0] + kx)];
                    if (lf < -700.0) {
                        fallback = true;
                        break;
                    }
                    acc += weights[0][kx + 1] * weights[1][ky + 1] * lf;
                }
            }
        }
        if (!fallback) return acc;
        std::size_t flat;
        if (!cell_of(v, flat)) return -1e300;
        return f[flat] > 0.0 ? std::log(f[flat]) : -1e300;
    };

    auto report_state = [&](const GridDistribution& g, SolverStepReport& rep) {
        double mass = 0.0, energy = 0.0;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            mass += g[i];
            energy += g[i] * g.node(i).norm2();
        }
        rep.mass = mass * cell_vol;
        rep.energy = energy * cell_vol;
    };

    result.times.push_back(0.0);
    result.snapshots.push_back(f);

    std::vector<double> gain(n_nodes, 0.0);
    Rng base(options.seed);
    const long samples = std::max<long>(100, options.samples_per_node);

    for (int step = 0; step < steps; ++step) {
        const AliasTable alias(f.values());
        const double rho_disc = alias.total() * cell_vol;
        loss_field(f, loss);
        rebuild_logf();

        for (std::size_t i = 0; i < n_nodes; ++i) {
            const Vec vi = f.node(i);
            if (vi.norm() > active_radius) {
                gain[i] = 0.0;
                continue;
            }
            Rng rng = base.stream(static_cast<std::uint64_t>(step) * n_nodes + i);
            double acc = 0.0;
            const double vx = vi[0], vy = vi[1], vz = dim == 3 ? vi[2] : 0.0;
            for (long s = 0; s < samples; ++s) {
                // proposal: mix of the discrete distribution and a uniform
                // floor over the box, so the estimator stays unbiased where
                // f vanishes
                double wx, wy, wz = 0.0;
                if (rng.uniform() < mix) {
                    wx = (2.0 * rng.uniform() - 1.0) * v_max;
                    wy = (2.0 * rng.uniform() - 1.0) * v_max;
                    if (dim == 3) wz = (2.0 * rng.uniform() - 1.0) * v_max;
                } else {
                    std::size_t cell = alias.sample(rng.uniform());
                    std::size_t rest = cell;
                    const int ix = static_cast<int>(rest % m);
                    rest /= static_cast<std::size_t>(m);
                    const int iy = static_cast<int>(rest % m);
                    rest /= static_cast<std::size_t>(m);
                    const int iz = static_cast<int>(rest % m);
                    wx = -v_max + (ix + rng.uniform()) * h;
                    wy = -v_max + (iy + rng.uniform()) * h;
                    if (dim == 3) wz = -v_max + (iz + rng.uniform()) * h;
                }
                double vstar[3] = {wx, wy, wz};
                std::size_t cell_star;
                const double f_star =
                    cell_of(vstar, cell_star) ? f[cell_star] : 0.0;
                const double q = (1.0 - mix) * f_star / rho_disc +
                                 mix / box_volume;

                const double rx = vx - wx, ry = vy - wy, rz = vz - wz;
                const double d2 = rx * rx + ry * ry + rz * rz;
                if (d2 == 0.0) continue;
                const double d = std::sqrt(d2);

                double sx, sy, sz = 0.0;
                if (dim == 3) {
                    const double zc = 2.0 * rng.uniform() - 1.0;
                    const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
                    const double phi_angle = 2.0 * M_PI * rng.uniform();
                    sx = rr * std::cos(phi_angle);
                    sy = rr * std::sin(phi_angle);
                    sz = zc;
                } else {
                    const double phi_angle = 2.0 * M_PI * rng.uniform();
                    sx = std::cos(phi_angle);
                    sy = std::sin(phi_angle);
                }

                const double mx = 0.5 * (vx + wx), my = 0.5 * (vy + wy),
                             mz = 0.5 * (vz + wz);
                const double hd = 0.5 * d;
                double vp[3] = {mx + hd * sx, my + hd * sy, mz + hd * sz};
                double vps[3] = {mx - hd * sx, my - hd * sy, mz - hd * sz};
                const double log_pair = log_quad_at(vp) + log_quad_at(vps);
                if (log_pair < -700.0) continue;
                const double pair = std::exp(log_pair);

                double b_val;
                if (fast.constant_profile) {
                    b_val = fast.profile_value;
                } else {
                    const double ct = std::clamp(
                        (rx * sx + ry * sy + rz * sz) / d, -1.0, 1.0);
                    const double theta = std::acos(ct);
                    if (theta <= 0.0) continue;
                    b_val = kernel.profile(theta);
                }
                const double phi_val =
                    fast.constant_phi ? fast.phi_value : kernel.phi(d, true);
                acc += phi_val * b_val * pair / q;
            }
            gain[i] = sphere * acc / static_cast<double>(samples);
        }

        SolverStepReport rep;
        double clamped = 0.0;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            double v = f[i] + dt * (gain[i] - loss[i] * f[i]);
            if (v < 0.0) {
                clamped -= v;
                v = 0.0;
            }
            f[i] = v;
        }
        rep.clamped_mass = clamped * cell_vol;
        report_state(f, rep);
        const double prev_mass =
            result.steps.empty() ? mass0 : result.steps.back().mass;
        rep.mass_drift = (rep.mass - prev_mass) / mass0;
        if (std::abs(rep.mass_drift) > options.drift_limit) {
            throw UnstableStep("mass drift " + std::to_string(rep.mass_drift) +
                               " at step " + std::to_string(step));
        }
        result.mass_drift_total += std::abs(rep.mass_drift);
        result.clamped_mass_total += rep.clamped_mass;
        result.steps.push_back(rep);
        result.times.push_back(dt * (step + 1));
        result.snapshots.push_back(f);
    }
    return result;
}

}  // namespace minorant
