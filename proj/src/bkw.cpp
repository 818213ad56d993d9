#include "minorant/bkw.hpp"

#include <cmath>

#include "minorant/errors.hpp"
#include "minorant/quadrature.hpp"

namespace minorant {

double BKWState::S_at(double t) const {
    return 1.0 - (1.0 - S0) * std::exp(-rate * (t - t0));
}

void BKWState::validate() const {
    if (dimension < 2) throw ConfigError("BKW dimension must be >= 2");
    if (!(rate > 0.0)) throw ConfigError("BKW rate must be positive");
    const double s_min = static_cast<double>(dimension) / (dimension + 2);
    if (!(S0 >= s_min && S0 <= 1.0)) {
        throw InvalidS("S0 must lie in [N/(N+2), 1] for a nonnegative profile");
    }
}

namespace {

struct BracketCoeffs {
    double c0;
    double c2;
};

BracketCoeffs bracket_coeffs(int n, double S) {
    return {0.5 * (n + 2.0) - 0.5 * n / S, (1.0 - S) / (2.0 * S * S)};
}

double check_S(const BKWState& state, double t) {
    const double S = state.S_at(t);
    const double s_min =
        static_cast<double>(state.dimension) / (state.dimension + 2);
    if (S < s_min * (1.0 - 1e-12)) {
        throw InvalidS("S(t) fell below N/(N+2)");
    }
    return S;
}

// E|v|^q for v ~ N(0, S I_N)
double gaussian_radial_moment(int n, double S, double q) {
    return std::pow(2.0 * S, 0.5 * q) *
           std::exp(std::lgamma(0.5 * (n + q)) - std::lgamma(0.5 * n));
}

}  // namespace

double bkw_evaluate(const BKWState& state, double t, const Vec& v) {
    state.validate();
    const double S = check_S(state, t);
    const int n = state.dimension;
    const auto [c0, c2] = bracket_coeffs(n, S);
    const double r2 = v.norm2();
    const double gauss =
        std::exp(-r2 / (2.0 * S)) / std::pow(2.0 * M_PI * S, 0.5 * n);
    return gauss * (c0 + c2 * r2);
}

double bkw_moment(const BKWState& state, double t, double q) {
    state.validate();
    const double S = check_S(state, t);
    const int n = state.dimension;
    const auto [c0, c2] = bracket_coeffs(n, S);
    return c0 * gaussian_radial_moment(n, S, q) +
           c2 * gaussian_radial_moment(n, S, q + 2.0);
}

double bkw_entropy(const BKWState& state, double t) {
    state.validate();
    const double S = check_S(state, t);
    const int n = state.dimension;
    const auto [c0, c2] = bracket_coeffs(n, S);
    const double sphere = sphere_area(n - 1);
    auto integrand = [&](double r) {
        const double gauss =
            std::exp(-r * r / (2.0 * S)) / std::pow(2.0 * M_PI * S, 0.5 * n);
        const double f = gauss * (c0 + c2 * r * r);
        if (f <= 0.0) return 0.0;
        return -f * std::log(f) * std::pow(r, n - 1.0);
    };
    const double r_max = 12.0 * std::sqrt(S) + 8.0;
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    return sphere * integrate_or_throw(integrand, 0.0, r_max, opt);
}

double bkw_lp_norm(const BKWState& state, double t, double p) {
    state.validate();
    const double S = check_S(state, t);
    const int n = state.dimension;
    const auto [c0, c2] = bracket_coeffs(n, S);
    const double sphere = sphere_area(n - 1);
    auto integrand = [&](double r) {
        const double gauss =
            std::exp(-r * r / (2.0 * S)) / std::pow(2.0 * M_PI * S, 0.5 * n);
        const double f = gauss * (c0 + c2 * r * r);
        return std::pow(f, p) * std::pow(r, n - 1.0);
    };
    const double r_max = 12.0 * std::sqrt(S) + 8.0;
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    return std::pow(sphere * integrate_or_throw(integrand, 0.0, r_max, opt),
                    1.0 / p);
}

GridDistribution bkw_grid(const BKWState& state, double t, int points_per_axis,
                          double v_max) {
    GridDistribution g(state.dimension, points_per_axis, v_max);
    g.fill([&](const Vec& v) { return bkw_evaluate(state, t, v); });
    return g;
}

double bkw_rate_maxwell(const CollisionKernel& kernel) {
    if (kernel.dimension != 3 || kernel.gamma != 0.0) {
        throw ConfigError(
            "the BKW relaxation rate m2/4 is derived for Maxwell molecules in "
            "dimension 3 (gamma = 0)");
    }
    auto integrand = [&](double theta) {
        const double s = std::sin(theta);
        return kernel.profile(theta) * s * s * s;  // sin^2 * sin^{N-2}
    };
    const double m2 =
        sphere_area(1) * integrate_or_throw(integrand, 0.0, M_PI);
    return 0.25 * m2 * kernel.C_phi;
}

AprioriBounds bkw_bounds(const BKWState& state, double t_start,
                         double gamma_tilde, int w_grid_points,
                         double w_grid_vmax,
                         std::optional<double> lp_exponent) {
    state.validate();
    if (t_start < state.t0) throw ConfigError("t_start must be >= t0");
    AprioriBounds b;
    b.rho_min = 1.0;                   // conserved unit mass
    b.E = 1.0 + state.dimension;       // sup (rho + e), both conserved

    // worst shape over [t_start, inf): sample S in [S(t_start), 1] and add
    // the adjacent-sample variation as a margin
    const double S_lo = state.S_at(t_start);
    const int samples = 64;
    double h_max = 0.0, h_prev = 0.0, h_margin = 0.0;
    double ep_max = 0.0, ep_prev = 0.0, ep_margin = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double S = S_lo + (1.0 - S_lo) * i / samples;
        BKWState frozen = state;
        frozen.S0 = S;
        frozen.t0 = 0.0;
        const double h = std::abs(bkw_entropy(frozen, 0.0));
        const double ep = bkw_moment(frozen, 0.0, gamma_tilde);
        if (i > 0) {
            h_margin = std::max(h_margin, std::abs(h - h_prev));
            ep_margin = std::max(ep_margin, std::abs(ep - ep_prev));
        }
        h_max = std::max(h_max, h);
        ep_max = std::max(ep_max, ep);
        h_prev = h;
        ep_prev = ep;
    }
    b.H = h_max + h_margin;
    b.Eprime = ep_max + ep_margin;

    // The W^{2,inf} surrogate is not monotone along the relaxation: the
    // peak sharpens as the hollow core fills in, so the uniform bound has
    // to sup over the whole interval, not just t_start.
    double w_max = 0.0, w_prev = 0.0, w_margin = 0.0;
    const int w_samples = 8;
    for (int i = 0; i <= w_samples; ++i) {
        const double S = S_lo + (1.0 - S_lo) * i / w_samples;
        BKWState frozen = state;
        frozen.S0 = S;
        frozen.t0 = 0.0;
        const GridDistribution g =
            bkw_grid(frozen, 0.0, w_grid_points, w_grid_vmax);
        const double w = local_functionals(g, gamma_tilde).w;
        if (i > 0) w_margin = std::max(w_margin, std::abs(w - w_prev));
        w_max = std::max(w_max, w);
        w_prev = w;
    }
    b.W = w_max + w_margin;

    if (lp_exponent) {
        b.p_exponent = *lp_exponent;
        double lp_max = 0.0, lp_prev = 0.0, lp_margin = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double S = S_lo + (1.0 - S_lo) * i / samples;
            BKWState frozen = state;
            frozen.S0 = S;
            frozen.t0 = 0.0;
            const double lp = bkw_lp_norm(frozen, 0.0, *lp_exponent);
            if (i > 0) lp_margin = std::max(lp_margin, std::abs(lp - lp_prev));
            lp_max = std::max(lp_max, lp);
            lp_prev = lp;
        }
        b.Lp_value = lp_max + lp_margin;
    }
    return b;
}

}  // namespace minorant
