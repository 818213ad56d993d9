#include "minorant/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "minorant/errors.hpp"
#include "minorant/quadrature.hpp"

namespace minorant {

CarlemanGeometry::CarlemanGeometry() {
    a = 1.0 / std::tan(3.0 * M_PI / 8.0);
    b_geo = 1.0 / std::tan(M_PI / 8.0);
    lambda = (b_geo - a) / (b_geo + a);
}

double xi_exponent(int dimension, XiExponentMode mode) {
    const double half = 0.5 * dimension;
    return mode == XiExponentMode::Stated ? half + 1.0 : half - 1.0;
}

SpreadingResult spreading_bound(const CollisionKernel& kernel, double r,
                                double R, double xi, double cst_spread,
                                const Vec& center, XiExponentMode mode) {
    if (!(r > 0.0 && r <= R)) {
        throw InvalidGeometry("need 0 < r <= R");
    }
    if (!(xi > 0.0 && xi < 1.0)) {
        throw InvalidGeometry("need xi in (0,1)");
    }
    if (!(cst_spread > 0.0)) {
        throw InvalidGeometry("cst_spread must be positive");
    }
    if (kernel.gamma < 0.0 && R < 1.0) {
        throw InvalidGeometry(
            "gamma < 0 uses Phi >= c_phi R^gamma on the large ball, which "
            "needs R >= 1; rescale the configuration first");
    }
    const double ell = angular_infimum_ellb(kernel);
    const int n = kernel.dimension;
    SpreadingResult out;
    out.coefficient = cst_spread * ell * kernel.c_phi *
                      std::pow(r, n - 3.0) * std::pow(R, 3.0 + kernel.gamma) *
                      std::pow(xi, xi_exponent(n, mode));
    out.radius = std::sqrt(r * r + R * R) * (1.0 - xi);
    out.center = center;
    return out;
}

namespace {

Vec sample_direction(Rng& rng, int dim, double flip) {
    Vec dir = Vec::zero(dim);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            dir[i] = rng.normal();
            n2 += dir[i] * dir[i];
        }
    } while (n2 < 1e-24);
    const double inv = flip / std::sqrt(n2);
    for (int i = 0; i < dim; ++i) dir[i] *= inv;
    return dir;
}

struct PairAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
    double std_error() const {
        if (count < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, sum_sq / count - m * m);
        return std::sqrt(var / count);
    }
};

}  // namespace

QplusEstimate qplus_indicator_quadrature(const CollisionKernel& kernel,
                                         double r, double R, const Vec& v,
                                         long samples, std::uint64_t seed,
                                         const Vec& center,
                                         bool require_precision) {
    if (!(r > 0.0 && R > 0.0)) throw InvalidGeometry("need positive radii");
    if (samples < 10000) {
        throw InsufficientSamples("need at least 1e4 samples");
    }
    const int dim = kernel.dimension;
    Vec c = center;
    c.dim = dim;
    Vec vv = v;
    vv.dim = dim;

    QplusEstimate out;
    const double shell2 = r * r + R * R - (vv - c).norm2();
    if (shell2 <= 0.0) {
        out.samples = samples;
        return out;  // post-collisional energy constraint: exact zero
    }
    const double rho_max = std::sqrt(shell2);
    const double vol = ball_volume(dim) * std::pow(rho_max, dim);
    const double sphere = sphere_area(dim - 1);

    const long pairs = samples / 2;
    const long strata = 64;
    Rng rng(seed);
    PairAccumulator acc;

    for (long i = 0; i < pairs; ++i) {
        const long stratum = i % strata;
        const double u = (static_cast<double>(stratum) + rng.uniform()) /
                         static_cast<double>(strata);
        Vec dir_star = sample_direction(rng, dim, 1.0);
        Vec sigma = sample_direction(rng, dim, 1.0);

        double pair_value = 0.0;
        for (int antithetic = 0; antithetic < 2; ++antithetic) {
            const double uu = antithetic == 0 ? u : 1.0 - u;
            const double flip = antithetic == 0 ? 1.0 : -1.0;
            const double rad = rho_max * std::pow(uu, 1.0 / dim);
            Vec v_star = c + rad * dir_star;
            if (antithetic == 1) v_star = c + (-rad) * dir_star;
            Vec sig = flip * sigma;

            const Vec rel = vv - v_star;
            const double dist = rel.norm();
            if (dist == 0.0) continue;
            const Vec mid = 0.5 * (vv + v_star);
            const Vec half = (0.5 * dist) * sig;
            const Vec v_prime = mid + half;
            const Vec v_prime_star = mid - half;
            if ((v_prime - c).norm() > r) continue;
            if ((v_prime_star - c).norm() > R) continue;
            const double cos_theta =
                std::clamp(dot(rel, sig) / dist, -1.0, 1.0);
            const double theta = std::acos(cos_theta);
            if (theta <= 0.0) continue;
            pair_value += kernel.phi(dist, false) * kernel.profile(theta);
        }
        acc.add(0.5 * pair_value);
    }

    out.value = vol * sphere * acc.mean();
    out.std_error = vol * sphere * acc.std_error();
    out.samples = pairs * 2;
    if (require_precision && out.value > 0.0 &&
        out.std_error > 0.05 * out.value) {
        throw InsufficientSamples("standard error " +
                                  std::to_string(out.std_error) +
                                  " exceeds 5% of estimate " +
                                  std::to_string(out.value));
    }
    return out;
}

QplusEstimate qplus_general(const CollisionKernel& kernel,
                            const std::function<double(const Vec&)>& g,
                            double support_g,
                            const std::function<double(const Vec&)>& f,
                            double support_f, const Vec& v, long samples,
                            std::uint64_t seed) {
    const int dim = kernel.dimension;
    Vec vv = v;
    vv.dim = dim;
    QplusEstimate out;
    const double shell2 =
        support_g * support_g + support_f * support_f - vv.norm2();
    if (shell2 <= 0.0) {
        out.samples = samples;
        return out;
    }
    const double rho_max = std::sqrt(shell2);
    const double vol = ball_volume(dim) * std::pow(rho_max, dim);
    const double sphere = sphere_area(dim - 1);

    Rng rng(seed);
    PairAccumulator acc;
    const long pairs = std::max<long>(1, samples / 2);
    const long strata = 64;
    for (long i = 0; i < pairs; ++i) {
        const long stratum = i % strata;
        const double u = (static_cast<double>(stratum) + rng.uniform()) /
                         static_cast<double>(strata);
        Vec dir_star = sample_direction(rng, dim, 1.0);
        Vec sigma = sample_direction(rng, dim, 1.0);
        double pair_value = 0.0;
        for (int antithetic = 0; antithetic < 2; ++antithetic) {
            const double uu = antithetic == 0 ? u : 1.0 - u;
            const double flip = antithetic == 0 ? 1.0 : -1.0;
            const double rad = rho_max * std::pow(uu, 1.0 / dim);
            const Vec v_star = (antithetic == 0 ? rad : -rad) * dir_star;
            const Vec sig = flip * sigma;
            const Vec rel = vv - v_star;
            const double dist = rel.norm();
            if (dist == 0.0) continue;
            const Vec mid = 0.5 * (vv + v_star);
            const Vec half = (0.5 * dist) * sig;
            const double fg = g(mid - half) * f(mid + half);
            if (fg == 0.0) continue;
            const double cos_theta =
                std::clamp(dot(rel, sig) / dist, -1.0, 1.0);
            const double theta = std::acos(cos_theta);
            if (theta <= 0.0) continue;
            pair_value += kernel.phi(dist, false) * kernel.profile(theta) * fg;
        }
        acc.add(0.5 * pair_value);
    }
    out.value = vol * sphere * acc.mean();
    out.std_error = vol * sphere * acc.std_error();
    out.samples = pairs * 2;
    return out;
}

double carleman_reduced_integral(const CollisionKernel& kernel, double p,
                                 double z) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidGeometry("reduced integral needs 0 < p <= 1");
    }
    if (!(z > 0.0)) throw InvalidGeometry("reduced integral needs z > 0");
    if (z * z >= 1.0 + p * p) return 0.0;  // outside the spread ball

    const CarlemanGeometry geo;
    const double lambda2 = geo.lambda * geo.lambda;
    const int n = kernel.dimension;
    const double gamma = kernel.gamma;

    // b~(theta) = b(theta) (sin theta/2)^{-gamma} >= ell_b * min over the
    // quarter arc of the sine factor; the minimum sits at an endpoint.
    const double ell = angular_infimum_ellb(kernel);
    const double sin_factor =
        std::min(std::pow(std::sin(M_PI / 8.0), -gamma),
                 std::pow(std::sin(3.0 * M_PI / 8.0), -gamma));

    const double y_ball = std::sqrt(std::max(0.0, z * z - p * p));
    const double y_cone =
        std::sqrt(std::max(0.0, (1.0 - lambda2 * z * z) / (1.0 - lambda2)));
    const double y_lo = std::max(y_ball, y_cone);
    const double y_hi = std::min(1.0, z);
    if (y_lo >= y_hi) return 0.0;

    auto rho_integral = [gamma](double lo, double hi) {
        if (hi <= lo) return 0.0;
        if (std::abs(gamma + 1.0) < 1e-12) return std::log(hi / lo);
        return (std::pow(hi, gamma + 1.0) - std::pow(lo, gamma + 1.0)) /
               (gamma + 1.0);
    };

    auto integrand = [&](double y) -> double {
        const double w2 = y * y - z * z + p * p;
        if (w2 <= 0.0) return 0.0;
        const double w = std::sqrt(w2);
        const double zy = std::sqrt(std::max(0.0, z * z - y * y));
        const double oy = std::sqrt(std::max(0.0, 1.0 - y * y));
        const double lo = std::max({y - w, geo.a * (zy + oy), 0.0});
        const double hi = std::min(y + w, geo.b_geo * (zy - oy));
        const double inner = rho_integral(lo, hi);
        if (inner <= 0.0) return 0.0;
        const double t1 = std::pow(std::max(0.0, 1.0 - y * y / (z * z)),
                                   0.5 * (n - 3));
        const double t2 = std::pow(std::max(0.0, 1.0 - y * y), 0.5 * (n - 1));
        return inner * t1 * t2;
    };

    QuadratureOptions opt;
    opt.rel_tol = 1e-9;
    double integral = 0.0;
    if (n == 2 && z <= 1.0) {
        // (1 - y^2/z^2)^{-1/2} is singular at y = z; y = z sin(u) flattens it
        auto by_angle = [&](double u) -> double {
            const double y = z * std::sin(u);
            const double w2 = y * y - z * z + p * p;
            if (w2 <= 0.0) return 0.0;
            const double w = std::sqrt(w2);
            const double zy = z * std::cos(u);
            const double oy = std::sqrt(std::max(0.0, 1.0 - y * y));
            const double lo = std::max({y - w, geo.a * (zy + oy), 0.0});
            const double hi = std::min(y + w, geo.b_geo * (zy - oy));
            const double inner = rho_integral(lo, hi);
            if (inner <= 0.0) return 0.0;
            const double t2 =
                std::pow(std::max(0.0, 1.0 - y * y), 0.5 * (n - 1));
            return inner * t2 * z;
        };
        const double u_lo = std::asin(std::clamp(y_lo / z, 0.0, 1.0));
        integral = integrate(by_angle, u_lo, 0.5 * M_PI, opt).value;
    } else {
        integral = integrate(integrand, y_lo, y_hi, opt).value;
    }
    return ell * sin_factor * kernel.c_phi * integral / z;
}

SpreadingCalibration calibrate_spreading_cst(
    const CollisionKernel& kernel, const std::vector<SpreadingSample>& plan,
    long samples, std::uint64_t seed, XiExponentMode mode) {
    if (plan.empty()) throw ConfigError("empty spreading calibration plan");
    const double ell = angular_infimum_ellb(kernel);
    const int n = kernel.dimension;

    SpreadingCalibration out;
    out.mode = mode;
    double min_ratio = std::numeric_limits<double>::infinity();
    Rng base(seed);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const SpreadingSample& s = plan[i];
        const double formula = ell * kernel.c_phi * std::pow(s.r, n - 3.0) *
                               std::pow(s.R, 3.0 + kernel.gamma) *
                               std::pow(s.xi, xi_exponent(n, mode));
        if (!(formula > 0.0) || !std::isfinite(formula)) {
            throw DegenerateSample("formula denominator is not positive at plan entry " +
                                   std::to_string(i));
        }
        const QplusEstimate q = qplus_indicator_quadrature(
            kernel, s.r, s.R, s.v, samples, base.stream(i).next_u64(), Vec{},
            false);
        SpreadingCalibration::Entry e;
        e.sample = s;
        e.qplus = q.value;
        e.std_error = q.std_error;
        e.formula = formula;
        e.ratio = q.value / formula;
        out.entries.push_back(e);
        min_ratio = std::min(min_ratio, e.ratio);
    }
    out.cst_spread = min_ratio / 1.5;
    return out;
}

std::vector<SpreadingSample> default_spreading_plan(int dimension) {
    std::vector<SpreadingSample> plan;
    const double radii[2] = {0.5, 1.0};
    const double ratios[2] = {1.0, 2.0};
    const double xis[4] = {0.1, 0.25, 0.5, 0.75};
    const double fractions[4] = {0.0, 0.35, 0.6, 0.85};
    for (double r : radii) {
        for (double ratio : ratios) {
            const double R = r * ratio;
            for (double xi : xis) {
                const double reach = std::sqrt(r * r + R * R) * (1.0 - xi);
                for (int k = 0; k < 4; ++k) {
                    SpreadingSample s;
                    s.r = r;
                    s.R = R;
                    s.xi = xi;
                    s.v = Vec::zero(dimension);
                    s.v[0] = fractions[k] * reach;
                    plan.push_back(s);
                }
            }
        }
    }
    return plan;
}

}  // namespace minorant
