#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wfkit {

using cplx = std::complex<double>;
using Vec = std::vector<double>;

constexpr double kPi = 3.14159265358979323846;

// Raised for arguments that violate an operation's preconditions.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised for unreadable or malformed input data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Grid {
    int dim = 1;
    std::array<double, 2> origin{0.0, 0.0};
    std::array<double, 2> extent{1.0, 1.0};
    int n = 8;

    double spacing(int axis = 0) const { return extent[axis] / n; }
    std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * n; }
    double coord(int axis, int i) const { return origin[axis] + i * spacing(axis); }

    // Row-major flat index; axis 0 is the slow index in 2D.
    std::size_t flat(int i, int j = 0) const { return dim == 1 ? std::size_t(i) : std::size_t(i) * n + j; }
    Vec node(std::size_t idx) const;
    std::size_t nearest_index(const Vec& x) const;
    bool contains_ball(const Vec& center, double radius) const;
    double nyquist(int axis = 0) const { return kPi / spacing(axis); }
};

Grid make_grid(int dim, const Vec& origin, const Vec& extent, int n);
Grid make_grid(int dim, double origin, double extent, int n);

bool is_power_of_two(long long n);

struct Box {
    Vec lo;
    Vec hi;
    bool contains(const Vec& x, double slack = 0.0) const;
};

struct SampledField {
    Grid grid;
    std::vector<cplx> values;
    std::optional<Box> support_hint;

    SampledField() = default;
    explicit SampledField(const Grid& g) : grid(g), values(g.size(), cplx(0.0, 0.0)) {}

    cplx& at(int i, int j = 0) { return values[grid.flat(i, j)]; }
    const cplx& at(int i, int j = 0) const { return values[grid.flat(i, j)]; }
    double max_abs() const;
    void validate() const;
};

SampledField operator+(const SampledField& a, const SampledField& b);
SampledField scaled(const SampledField& a, cplx s);

enum class WindowProfile {
    PlateauBump,      // 1 on |x-c| <= r1, smooth exp(-1/t) transition to 0 at r2
    CompactGaussian,  // exp(-(r/r1)^2 / (1 - (r/r2)^2)) for r < r2, else 0
};

struct Window {
    Vec center;
    double r1 = 0.5;
    double r2 = 1.0;
    WindowProfile profile = WindowProfile::PlateauBump;

    void validate() const;
};

double eval_window(const Window& w, const Vec& x);
double eval_window_radial(const Window& w, double r);

// Smooth 0..1 step built from psi(t) = exp(-1/t): 1 at t<=0, 0 at t>=1.
double smooth_step_down(double t);

// Nonzero window values on grid nodes as (flat index, weight) pairs.
std::vector<std::pair<std::size_t, double>> window_nodes(const Grid& g, const Window& w);

SampledField apply_window(const SampledField& f, const Window& w);

struct DirectionSet {
    int dim = 2;
    std::vector<Vec> dirs;
    double cap_half_angle = 0.0;
};

DirectionSet uniform_directions(int dim, int count);

double norm(const Vec& v);
double dot(const Vec& a, const Vec& b);
Vec normalized(const Vec& v);
Vec operator-(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double distance(const Vec& a, const Vec& b);
// Angle in [0, pi] between nonzero vectors.
double angle_between(const Vec& a, const Vec& b);

}  // namespace wfkit
