#include "minorant/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "minorant/errors.hpp"

namespace minorant {

double Vec::norm() const { return std::sqrt(norm2()); }

Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] += b.c[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] -= b.c[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.c[i] *= s;
    return r;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

GridDistribution::GridDistribution(int dimension, int points_per_axis,
                                   double v_max)
    : dim_(dimension), m_(points_per_axis), v_max_(v_max) {
    if (dimension != 2 && dimension != 3) {
        throw ConfigError("grid supports dimensions 2 and 3");
    }
    if (points_per_axis < 2 || v_max <= 0.0) {
        throw ConfigError("grid needs M >= 2 and V_max > 0");
    }
    h_ = 2.0 * v_max_ / m_;
    cell_volume_ = std::pow(h_, dim_);
    std::size_t n = 1;
    for (int i = 0; i < dim_; ++i) n *= static_cast<std::size_t>(m_);
    values_.assign(n, 0.0);
}

Vec GridDistribution::node(std::size_t flat) const {
    Vec v = Vec::zero(dim_);
    for (int d = 0; d < dim_; ++d) {
        v[d] = axis_coordinate(static_cast<int>(flat % m_));
        flat /= static_cast<std::size_t>(m_);
    }
    return v;
}

std::size_t GridDistribution::flat_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int d = dim_ - 1; d >= 0; --d) {
        flat = flat * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
    }
    return flat;
}

double GridDistribution::at(const Vec& v) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
        const double t = (v[d] + v_max_) / h_;
        if (t < 0.0 || t >= m_) return 0.0;
        idx[static_cast<std::size_t>(d)] = static_cast<int>(t);
    }
    return values_[flat_index(idx)];
}

void GridDistribution::fill(const std::function<double(const Vec&)>& f) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = f(node(i));
}

double GridDistribution::clamp_negative() {
    double clamped = 0.0;
    for (auto& v : values_) {
        if (v < 0.0) {
            clamped -= v;
            v = 0.0;
        }
    }
    return clamped * cell_volume_;
}

void GridDistribution::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write grid file " + path);
    out << "minorant-grid 1 " << dim_ << " " << m_ << " " << v_max_ << "\n";
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!out) throw IoError("short write to " + path);
}

GridDistribution GridDistribution::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open grid file " + path);
    std::string magic;
    int version = 0, dim = 0, m = 0;
    double v_max = 0.0;
    in >> magic >> version >> dim >> m >> v_max;
    if (magic != "minorant-grid" || version != 1) {
        throw IoError("bad grid header in " + path);
    }
    in.ignore(1);  // newline
    GridDistribution g(dim, m, v_max);
    in.read(reinterpret_cast<char*>(g.values_.data()),
            static_cast<std::streamsize>(g.values_.size() * sizeof(double)));
    if (!in) throw IoError("short read from " + path);
    for (double v : g.values_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw IoError("grid file " + path + " holds negative or non-finite values");
        }
    }
    return g;
}

GridDistribution make_maxwellian_grid(int dimension, int points_per_axis,
                                      double v_max, double mass, double theta,
                                      const Vec& center) {
    GridDistribution g(dimension, points_per_axis, v_max);
    const double norm = mass / std::pow(2.0 * M_PI * theta, 0.5 * dimension);
    g.fill([&](const Vec& v) {
        return norm * std::exp(-(v - center).norm2() / (2.0 * theta));
    });
    return g;
}

GridDistribution make_ball_indicator_grid(int dimension, int points_per_axis,
                                          double v_max, double radius,
                                          double height, const Vec& center) {
    GridDistribution g(dimension, points_per_axis, v_max);
    g.fill([&](const Vec& v) {
        return (v - center).norm() <= radius ? height : 0.0;
    });
    return g;
}

}  // namespace minorant
