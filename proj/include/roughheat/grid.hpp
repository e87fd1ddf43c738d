#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace roughheat::grid {

enum class Domain { Torus, HalfPlane, TwoSided };

/// Sampling layout.  x1 always lives on the unit torus.  Torus fields are
/// periodic in x2 with period `period2` (1 by default; extended objects use a
/// doubled period).  Half-plane fields cover x2 in [0, t_max]; node-centered
/// rows include both x2 = 0 and x2 = t_max, cell-centered rows sit at
/// (j + 1/2) * t_max / n2 so singular boundary weights are never evaluated at
/// x2 = 0.  Two-sided fields cover [-t_max, t_max) and are treated as periodic
/// with period 2 * t_max (even reflections make that wrap seamless; trivial
/// extensions carry their jump explicitly).
struct GridSpec {
    int n1 = 256;
    int n2 = 256;
    Domain domain = Domain::Torus;
    double t_max = 1.0;
    double period2 = 1.0;
    bool cell_centered = false;

    double dx1() const { return 1.0 / n1; }
    double dx2() const;
    double x1(int j1) const { return j1 * dx1(); }
    double x2(int j2) const;
    bool periodic_x2() const { return domain != Domain::HalfPlane; }
    double x2_period() const;
    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }

    bool operator==(const GridSpec& o) const;
    void validate() const;
};

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct Field {
    GridSpec grid;
    std::vector<double> v;  // row-major, index j2*n1 + j1 (row per x2 slice)

    Field() = default;
    explicit Field(const GridSpec& g) : grid(g), v(g.size(), 0.0) { g.validate(); }

    double& at(int j1, int j2) { return v[static_cast<std::size_t>(j2) * grid.n1 + j1]; }
    double at(int j1, int j2) const { return v[static_cast<std::size_t>(j2) * grid.n1 + j1]; }

    static Field zeros(const GridSpec& g) { return Field(g); }
    static Field sample(const GridSpec& g, const std::function<double(double, double)>& f);
};

struct Spectrum {
    GridSpec grid;
    std::vector<std::complex<double>> c;  // same layout as Field::v
};

/// d(x,y) = |x1-y1| + |x2-y2|^(1/2) on the plane.
double parabolic_distance(const Point& x, const Point& y);

/// Same metric with differences reduced to their minimal periodic
/// representatives where the grid is periodic.
double parabolic_distance(const GridSpec& g, const Point& x, const Point& y);

/// Reduce d to the representative of minimal absolute value mod period.
double min_image(double d, double period);

int signed_index(int m, int n);
double k1_of(const GridSpec& g, int m1);
double k2_of(const GridSpec& g, int m2);

Spectrum spectrum_of(const Field& f);
Field field_of(const Spectrum& s);

/// Even reflection across {x2 = 0}: half-plane input, two-sided output on the
/// doubled grid (node layout drops the duplicated +-t_max row pair).
Field even_reflection(const Field& f);

/// Extension by zero to negative times.
Field trivial_extension(const Field& f);

/// Rows with x2 >= 0 of a node-centered two-sided field.
Field restrict_to_half_plane(const Field& f);

/// Exact Fourier derivative (i k)^order in direction 1 or 2.  Direction 2
/// requires x2-periodicity; half-plane fields must use d2_one_sided instead.
Field spectral_derivative(const Field& f, int direction, int order);

/// Second-order one-sided finite difference in x2 for half-plane fields.
Field d2_one_sided(const Field& f);

/// Embed an x2-periodic field into a grid with the same spacing whose period
/// is an integer multiple (used to lift period-1 data onto doubled grids).
Field tile_to(const Field& f, const GridSpec& target);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field pointwise(const Field& a, const Field& b);
double sup_abs(const Field& a);
double sup_abs_diff(const Field& a, const Field& b);

}  // namespace roughheat::grid
