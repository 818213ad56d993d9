#ifndef MINORANT_GRID_HPP
#define MINORANT_GRID_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace minorant {

// Small fixed-capacity velocity vector, dimensions 2 and 3.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 3;

    static Vec zero(int dim) { return Vec{{0.0, 0.0, 0.0}, dim}; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += c[i] * c[i];
        return s;
    }
    double norm() const;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double dot(const Vec& a, const Vec& b);

// Nonnegative function sampled on a uniform cubic velocity grid, cell
// centered: node i has coordinate -V_max + (i + 1/2) h with h = 2 V_max / M.
// Integrals against the grid are midpoint quadrature.
class GridDistribution {
public:
    GridDistribution(int dimension, int points_per_axis, double v_max);

    int dimension() const { return dim_; }
    int points_per_axis() const { return m_; }
    double v_max() const { return v_max_; }
    double spacing() const { return h_; }
    double cell_volume() const { return cell_volume_; }
    std::size_t node_count() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double axis_coordinate(int index) const {
        return -v_max_ + (index + 0.5) * h_;
    }
    Vec node(std::size_t flat) const;
    std::size_t flat_index(const std::array<int, 3>& idx) const;

    // value of the piecewise-constant extension at an arbitrary velocity
    // (0 outside the box)
    double at(const Vec& v) const;

    void fill(const std::function<double(const Vec&)>& f);
    // clamps negatives to zero; returns the clamped mass (midpoint measure)
    double clamp_negative();

    void save(const std::string& path) const;
    static GridDistribution load(const std::string& path);

private:
    int dim_;
    int m_;
    double v_max_;
    double h_;
    double cell_volume_;
    std::vector<double> values_;
};

GridDistribution make_maxwellian_grid(int dimension, int points_per_axis,
                                      double v_max, double mass, double theta,
                                      const Vec& center);
GridDistribution make_ball_indicator_grid(int dimension, int points_per_axis,
                                          double v_max, double radius,
                                          double height, const Vec& center);

}  // namespace minorant

#endif
