#include "minorant/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "minorant/errors.hpp"

namespace minorant {

namespace {

// Gauss-Kronrod 7-15 abscissae and weights (QUADPACK dqk15 values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    // index 7 is the center node
    fv[7] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }

    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    kronrod *= half;
    gauss *= half;

    Panel p;
    p.a = a;
    p.b = b;
    p.value = kronrod;
    // QUADPACK-style rescaled error estimate
    double resabs = 0.0;
    for (int j = 0; j < 15; ++j) {
        const int k = std::min(j, 14 - j);
        resabs += kWgk[k] * std::abs(fv[j]);
    }
    resabs *= half;
    const double raw = std::abs(kronrod - gauss);
    if (resabs > 0.0 && raw > 0.0) {
        const double scaled = 200.0 * raw / resabs;
        p.error = resabs * std::min(1.0, scaled * std::sqrt(scaled));
    } else {
        p.error = raw;
    }
    return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opt) {
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<Panel> heap;
    heap.push(evaluate_panel(f, a, b));
    double total_value = heap.top().value;
    double total_error = heap.top().error;
    int panels = 1;

    while (total_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total_value)) &&
           panels < opt.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval below floating-point resolution; keep its estimate
            total_error -= worst.error;
            total_value -= worst.value;
            Panel frozen = worst;
            frozen.error = 0.0;
            total_value += frozen.value;
            heap.push(frozen);
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    res.value = sign * total_value;
    res.abs_error = total_error;
    res.panels = panels;
    res.converged =
        total_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total_value));
    return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opt) {
    const QuadratureResult r = integrate(f, a, b, opt);
    if (!r.converged) {
        throw QuadratureFailure("tolerance not met, estimated error " +
                                std::to_string(r.abs_error) + " after " +
                                std::to_string(r.panels) + " panels");
    }
    return r.value;
}

QuadratureResult integrate_left_power(const std::function<double(double)>& f,
                                      double b, double power,
                                      const QuadratureOptions& opt) {
    if (power <= -1.0) {
        throw QuadratureFailure("non-integrable endpoint power " +
                                std::to_string(power));
    }
    // choose k so the transformed integrand is at least C^1 at 0
    const double k = std::max(1.0, 2.0 / (power + 1.0));
    if (k == 1.0) return integrate(f, 0.0, b, opt);
    const double ub = std::pow(b, 1.0 / k);
    auto g = [&f, k](double u) {
        if (u <= 0.0) return 0.0;
        return f(std::pow(u, k)) * k * std::pow(u, k - 1.0);
    };
    return integrate(g, 0.0, ub, opt);
}

double integrate_left_power_or_throw(const std::function<double(double)>& f,
                                     double b, double power,
                                     const QuadratureOptions& opt) {
    const QuadratureResult r = integrate_left_power(f, b, power, opt);
    if (!r.converged) {
        throw QuadratureFailure("singular integral tolerance not met");
    }
    return r.value;
}

}  // namespace minorant
