#include "minorant/bounds.hpp"

#include <cmath>

#include "minorant/errors.hpp"

namespace minorant {

void AprioriBounds::validate() const {
    if (!(rho_min > 0.0)) throw InvalidBounds("rho_min must be positive");
    if (!(E >= rho_min)) {
        throw InvalidBounds("E bounds mass + energy, so E >= rho_min");
    }
    if (!std::isfinite(rho_min) || !std::isfinite(E) || !std::isfinite(H) ||
        H < 0.0) {
        throw InvalidBounds("bounds must be finite and nonnegative");
    }
    if (Eprime && (!std::isfinite(*Eprime) || *Eprime < 0.0)) {
        throw InvalidBounds("Eprime must be finite and nonnegative");
    }
    if (Lp_value && (!std::isfinite(*Lp_value) || *Lp_value < 0.0)) {
        throw InvalidBounds("Lp bound must be finite and nonnegative");
    }
    if (W && (!std::isfinite(*W) || *W < 0.0)) {
        throw InvalidBounds("W must be finite and nonnegative");
    }
}

LocalFunctionals local_functionals(const GridDistribution& f,
                                   double gamma_tilde, double p) {
    LocalFunctionals out;
    const double vol = f.cell_volume();
    const int dim = f.dimension();
    const int m = f.points_per_axis();

    double lp_acc = 0.0;
    for (std::size_t i = 0; i < f.node_count(); ++i) {
        const double fv = f[i];
        const Vec v = f.node(i);
        const double r2 = v.norm2();
        out.rho += fv;
        out.e += fv * r2;
        out.eprime += fv * std::pow(r2, 0.5 * gamma_tilde);
        if (fv > 0.0) out.h -= fv * std::log(fv);
        lp_acc += std::pow(fv, p);
    }
    out.rho *= vol;
    out.e *= vol;
    out.eprime *= vol;
    out.h *= vol;
    out.lp = std::pow(lp_acc * vol, 1.0 / p);

    // W^{2,inf} surrogate: per node |f| plus all centered first and second
    // differences, zero extension beyond the box.
    auto value_at = [&](std::array<int, 3> idx) -> double {
        for (int d = 0; d < dim; ++d) {
            const int j = idx[static_cast<std::size_t>(d)];
            if (j < 0 || j >= m) return 0.0;
        }
        return f[f.flat_index(idx)];
    };
    const double h = f.spacing();
    for (std::size_t flat = 0; flat < f.node_count(); ++flat) {
        std::array<int, 3> idx{0, 0, 0};
        std::size_t rest = flat;
        for (int d = 0; d < dim; ++d) {
            idx[static_cast<std::size_t>(d)] = static_cast<int>(rest % m);
            rest /= static_cast<std::size_t>(m);
        }
        double local = std::abs(f[flat]);
        for (int a = 0; a < dim; ++a) {
            auto up = idx, dn = idx;
            up[static_cast<std::size_t>(a)]++;
            dn[static_cast<std::size_t>(a)]--;
            local += std::abs(value_at(up) - value_at(dn)) / (2.0 * h);
            local += std::abs(value_at(up) - 2.0 * f[flat] + value_at(dn)) /
                     (h * h);
            for (int b = a + 1; b < dim; ++b) {
                auto pp = idx, pm = idx, mp = idx, mm = idx;
                pp[static_cast<std::size_t>(a)]++;
                pp[static_cast<std::size_t>(b)]++;
                pm[static_cast<std::size_t>(a)]++;
                pm[static_cast<std::size_t>(b)]--;
                mp[static_cast<std::size_t>(a)]--;
                mp[static_cast<std::size_t>(b)]++;
                mm[static_cast<std::size_t>(a)]--;
                mm[static_cast<std::size_t>(b)]--;
                local += std::abs(value_at(pp) - value_at(pm) - value_at(mp) +
                                  value_at(mm)) /
                         (4.0 * h * h);
            }
        }
        out.w = std::max(out.w, local);
    }
    return out;
}

double maxwellian_entropy(double rho, double theta, int dimension) {
    if (rho <= 0.0) return 0.0;
    return rho * (0.5 * dimension * std::log(2.0 * M_PI * theta) +
                  0.5 * dimension - std::log(rho));
}

namespace {

bool case_two_applies(const CollisionKernel& kernel) {
    return kernel.gamma < 0.0 && !kernel.mollified;
}

// e_g (+ l^p_g in case (ii)) factor shared by C_L and C_S
double hydro_factor(const CollisionKernel& kernel, const AprioriBounds& bounds) {
    if (!case_two_applies(kernel)) return bounds.E;
    if (!bounds.Lp_value || !bounds.p_exponent) {
        throw MissingLpBound(
            "gamma < 0 with a non-mollified kernel requires an L^p bound");
    }
    const double need = kernel.dimension /
                        (kernel.dimension + kernel.gamma);
    if (!(*bounds.p_exponent > need)) {
        throw MissingLpBound("p exponent must exceed N/(N+gamma) = " +
                             std::to_string(need));
    }
    return bounds.E + *bounds.Lp_value;
}

}  // namespace

double loss_bound_CL_with_mass(double n_b, const CollisionKernel& kernel,
                               const AprioriBounds& bounds, double cst) {
    bounds.validate();
    if (!(cst > 0.0)) throw ConfigError("calibrated cst must be positive");
    return cst * n_b * kernel.C_phi * hydro_factor(kernel, bounds);
}

double loss_bound_CL(const CollisionKernel& kernel, const AprioriBounds& bounds,
                     double cst) {
    return loss_bound_CL_with_mass(angular_mass_nb(kernel), kernel, bounds, cst);
}

double s_bound_CS(const CollisionKernel& kernel, const AprioriBounds& bounds,
                  double eps, double cst) {
    bounds.validate();
    const SplitAngularIntegrals split = split_kernel(kernel, eps);
    return cst * split.m_bR * kernel.C_phi * hydro_factor(kernel, bounds);
}

// ||g||_{L^1_gt} <= bridge(gt) (E + Eprime): for gt <= 2 the weight obeys
// <v>^gt <= 1 + |v|^2 directly; for gt in (2, 4] the power-mean bound
// (1+x)^s <= 2^{s-1}(1 + x^s) with s = gt/2 gives the 2^{gt/2-1} factor.
double l1_weighted_bridge_factor(double gamma_tilde) {
    return gamma_tilde <= 2.0 ? 1.0 : std::pow(2.0, 0.5 * gamma_tilde - 1.0);
}

double q1_bound_coefficient(const CollisionKernel& kernel,
                            const AprioriBounds& bounds, double eps,
                            double cst) {
    bounds.validate();
    if (!bounds.W) {
        throw MissingWBound("the Q^1 estimate requires the W^{2,inf} bound");
    }
    const double eprime = bounds.Eprime.value_or(
        kernel.gamma_tilde() <= 2.0 ? 0.0 : -1.0);
    if (eprime < 0.0) {
        throw InvalidBounds("Eprime required when gamma_tilde > 2");
    }
    double l1_weighted =
        l1_weighted_bridge_factor(kernel.gamma_tilde()) * (bounds.E + eprime);
    if (kernel.gamma + 2.0 < 0.0 && !kernel.mollified) {
        if (!bounds.Lp_value || !bounds.p_exponent) {
            throw MissingLpBound("2 + gamma < 0 requires an L^p bound");
        }
        const double need =
            kernel.dimension / (kernel.dimension + kernel.gamma + 2.0);
        if (!(*bounds.p_exponent > need)) {
            throw MissingLpBound("p exponent must exceed N/(N+gamma+2) = " +
                                 std::to_string(need));
        }
        l1_weighted += *bounds.Lp_value;
    }
    const SplitAngularIntegrals split = split_kernel(kernel, eps);
    return cst * split.m_bR * kernel.C_phi * l1_weighted * *bounds.W;
}

double loss_evaluate(const CollisionKernel& kernel, const GridDistribution& g,
                     const Vec& v, bool upper_form) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const double gv = g[i];
        if (gv == 0.0) continue;
        const double z = (v - g.node(i)).norm();
        if (z == 0.0 && kernel.gamma < 0.0 && !kernel.mollified) continue;
        acc += kernel.phi(z, upper_form) * gv;
    }
    const double n_b = angular_mass_nb(kernel);
    return n_b * acc * g.cell_volume();
}

CfBreakdown assemble_Cf(const CollisionKernel& kernel,
                        const AprioriBounds& bounds, double cst_CL,
                        double cst_Q1) {
    bounds.validate();
    CfBreakdown out;
    const double hydro = hydro_factor(kernel, bounds);
    out.loss_factor = cst_CL * kernel.C_phi * hydro;
    out.cancellation_factor = cst_CL * kernel.C_phi * hydro;
    if (!bounds.W) {
        throw MissingWBound("non-cutoff C_f needs the W^{2,inf} bound");
    }
    const double eprime = bounds.Eprime.value_or(0.0);
    double l1_weighted = l1_weighted_bridge_factor(kernel.gamma_tilde()) *
                         (bounds.E + eprime);
    if (kernel.gamma + 2.0 < 0.0 && !kernel.mollified) {
        if (!bounds.Lp_value) throw MissingLpBound("2 + gamma < 0 needs L^p");
        l1_weighted += *bounds.Lp_value;
    }
    out.q1_factor = cst_Q1 * kernel.C_phi * l1_weighted * *bounds.W;
    out.value = std::max({out.loss_factor, out.cancellation_factor,
                          out.q1_factor});
    return out;
}

}  // namespace minorant
