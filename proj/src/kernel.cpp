#include "minorant/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "minorant/errors.hpp"

namespace minorant {

namespace {

constexpr double kClampAngle = 3.0 * M_PI / 4.0;

// C^1 map equal to the identity below the clamp angle; above it the image
// levels off at (clamp + pi)/2, keeping sin positive on (0, pi].
double bent_angle(double theta) {
    if (theta <= kClampAngle) return theta;
    const double span = M_PI - kClampAngle;
    const double t = (theta - kClampAngle) / span;
    return kClampAngle + span * (t - 0.5 * t * t);
}

}  // namespace

AngularProfile AngularProfile::constant(double value) {
    return AngularProfile(Kind::Constant, [value](double) { return value; });
}

AngularProfile AngularProfile::inverse_power_law(double b0, double nu,
                                                 int dimension) {
    const int sin_pow = dimension - 2;
    return AngularProfile(Kind::InversePowerLaw, [b0, nu, sin_pow](double theta) {
        const double s = sin_pow == 0 ? 1.0
                                      : std::pow(std::sin(bent_angle(theta)),
                                                 static_cast<double>(sin_pow));
        return b0 * std::pow(theta, -1.0 - nu) / s;
    });
}

AngularProfile AngularProfile::tabulated(std::vector<double> theta,
                                         std::vector<double> value) {
    if (theta.size() != value.size() || theta.size() < 2) {
        throw ConfigError("tabulated profile needs >= 2 matching rows");
    }
    for (std::size_t i = 1; i < theta.size(); ++i) {
        if (theta[i] <= theta[i - 1]) {
            throw ConfigError("tabulated profile theta must be strictly increasing");
        }
    }
    auto nodes = std::make_shared<std::vector<double>>(std::move(theta));
    auto vals = std::make_shared<std::vector<double>>(std::move(value));
    return AngularProfile(Kind::Tabulated, [nodes, vals](double t) {
        const auto& x = *nodes;
        const auto& y = *vals;
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
        return (1.0 - w) * y[i - 1] + w * y[i];
    });
}

AngularProfile AngularProfile::tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile table " + path);
    std::vector<double> theta, value;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double t, v;
        if (ls >> t >> v) {
            theta.push_back(t);
            value.push_back(v);
        }
    }
    return tabulated(std::move(theta), std::move(value));
}

double CollisionKernel::phi(double z, bool upper_form) const {
    const double amp = upper_form ? C_phi : c_phi;
    const double az = std::abs(z);
    if (mollified && az <= 1.0) return amp;
    return amp * std::pow(az, gamma);
}

void CollisionKernel::validate(double asymptotic_rel_tol) const {
    if (dimension < 2) throw ConfigError("dimension must be >= 2");
    if (!(gamma > -dimension && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in (-N, 1]");
    }
    if (!(nu < 2.0)) throw ConfigError("nu must be < 2");
    if (!(b0 > 0.0)) throw ConfigError("b0 must be positive");
    if (!(c_phi > 0.0 && c_phi <= C_phi)) {
        throw ConfigError("need 0 < c_phi <= C_phi");
    }
    // positivity of the profile on (0, pi)
    for (int i = 1; i < 256; ++i) {
        const double theta = M_PI * i / 256.0;
        if (!(profile(theta) > 0.0)) {
            throw ConfigError("angular profile must be positive on (0, pi)");
        }
    }
    // declared grazing asymptotic: b(cos t) sin^{N-2} t * t^{1+nu} -> b0
    for (double theta : {1e-3, 1e-4, 1e-5}) {
        const double s = dimension == 2
                             ? 1.0
                             : std::pow(std::sin(theta),
                                        static_cast<double>(dimension - 2));
        const double ratio =
            profile(theta) * s * std::pow(theta, 1.0 + nu) / b0;
        if (std::abs(ratio - 1.0) > asymptotic_rel_tol) {
            throw ConfigError(
                "profile does not match the declared (b0, nu) asymptotic near "
                "theta = 0 (ratio " +
                std::to_string(ratio) + " at theta = " + std::to_string(theta) +
                ")");
        }
    }
}

CollisionKernel make_hard_sphere_kernel(int dimension, double b_value) {
    CollisionKernel k;
    k.dimension = dimension;
    k.gamma = 1.0;
    k.nu = -static_cast<double>(dimension - 1);
    k.b0 = b_value;
    k.c_phi = 1.0;
    k.C_phi = 1.0;
    k.mollified = false;
    k.profile = AngularProfile::constant(b_value);
    return k;
}

CollisionKernel make_power_law_kernel(int dimension, double gamma, double nu,
                                      double b0) {
    CollisionKernel k;
    k.dimension = dimension;
    k.gamma = gamma;
    k.nu = nu;
    k.b0 = b0;
    k.c_phi = 1.0;
    k.C_phi = 1.0;
    k.mollified = false;
    k.profile = AngularProfile::inverse_power_law(b0, nu, dimension);
    return k;
}

double sphere_area(int d) {
    // |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2)
    if (d < 0) throw ConfigError("sphere_area needs d >= 0");
    const double half = 0.5 * (d + 1);
    return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

double ball_volume(int n) {
    const double half = 0.5 * n;
    return std::pow(M_PI, half) / std::tgamma(half + 1.0);
}

namespace {

double sin_weight(double theta, int dimension) {
    return dimension == 2 ? 1.0
                          : std::pow(std::sin(theta),
                                     static_cast<double>(dimension - 2));
}

}  // namespace

double angular_mass_nb(const CollisionKernel& kernel,
                       const QuadratureOptions& opt) {
    if (kernel.nu >= 0.0) {
        throw NonIntegrableAngular(
            "angular mass n_b requires a cutoff kernel (nu < 0), got nu = " +
            std::to_string(kernel.nu));
    }
    auto integrand = [&kernel](double theta) {
        return kernel.profile(theta) * sin_weight(theta, kernel.dimension);
    };
    // integrand ~ b0 * theta^{-1-nu} near 0
    const double value =
        integrate_left_power_or_throw(integrand, M_PI, -1.0 - kernel.nu, opt);
    return sphere_area(kernel.dimension - 2) * value;
}

double momentum_transfer_mb(const CollisionKernel& kernel,
                            const QuadratureOptions& opt) {
    if (!(kernel.nu < 2.0)) {
        throw ConfigError("momentum transfer needs nu < 2");
    }
    auto integrand = [&kernel](double theta) {
        // (1 - cos t) written as 2 sin^2(t/2) to keep the t^2 weight exact
        const double w = 2.0 * std::pow(std::sin(0.5 * theta), 2);
        return kernel.profile(theta) * w * sin_weight(theta, kernel.dimension);
    };
    const double value =
        integrate_left_power_or_throw(integrand, M_PI, 1.0 - kernel.nu, opt);
    return sphere_area(kernel.dimension - 2) * value;
}

double angular_infimum_ellb(const CollisionKernel& kernel, double lipschitz) {
    const double lo = M_PI / 4.0;
    const double hi = 3.0 * M_PI / 4.0;

    int points = 4097;
    for (int attempt = 0; attempt < 10; ++attempt) {
        const double h = (hi - lo) / (points - 1);
        double min_value = std::numeric_limits<double>::infinity();
        double max_slope = 0.0;
        double prev = kernel.profile(lo);
        for (int i = 0; i < points; ++i) {
            const double theta = lo + i * h;
            const double v = kernel.profile(theta);
            min_value = std::min(min_value, v);
            if (i > 0) max_slope = std::max(max_slope, std::abs(v - prev) / h);
            prev = v;
        }
        if (!(min_value > 0.0)) {
            throw NonPositiveInfimum(
                "profile minimum on [pi/4, 3pi/4] is " + std::to_string(min_value));
        }
        const double lip = lipschitz >= 0.0 ? lipschitz : 2.0 * max_slope;
        const double margin = 0.5 * lip * h;
        // refine until the margin costs at most 0.2% of the certified value
        if (margin <= 2e-3 * min_value) return min_value - margin;
        points = (points - 1) * 4 + 1;
    }
    throw NonPositiveInfimum("could not certify a positive infimum for ell_b");
}

SplitAngularIntegrals split_kernel(const CollisionKernel& kernel, double eps,
                                   const QuadratureOptions& opt) {
    if (!(eps > 0.0 && eps < M_PI / 4.0)) {
        throw InvalidEps("splitting needs 0 < eps < pi/4, got " +
                         std::to_string(eps));
    }
    if (!(kernel.nu >= 0.0 && kernel.nu < 2.0)) {
        throw InvalidEps("splitting applies to non-cutoff kernels, nu in [0,2)");
    }
    const double sphere = sphere_area(kernel.dimension - 2);

    SplitAngularIntegrals out;
    auto mass_integrand = [&kernel](double theta) {
        return kernel.profile(theta) * sin_weight(theta, kernel.dimension);
    };
    out.n_bS = sphere * integrate_or_throw(mass_integrand, eps, M_PI, opt);

    auto transfer_integrand = [&kernel](double theta) {
        const double w = 2.0 * std::pow(std::sin(0.5 * theta), 2);
        return kernel.profile(theta) * w * sin_weight(theta, kernel.dimension);
    };
    out.m_bR = sphere * integrate_left_power_or_throw(
                            transfer_integrand, eps, 1.0 - kernel.nu, opt);
    return out;
}

}  // namespace minorant
