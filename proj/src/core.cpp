#include "wfkit/core.hpp"

#include <algorithm>
#include <cmath>

namespace wfkit {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid make_grid(int dim, const Vec& origin, const Vec& extent, int n)
{
    if (dim != 1 && dim != 2) throw ParameterError("grid dimension must be 1 or 2");
    if (n < 8 || !is_power_of_two(n)) throw ParameterError("grid size must be a power of two >= 8");
    if (int(origin.size()) < dim || int(extent.size()) < dim)
        throw ParameterError("origin/extent need one value per axis");
    Grid g;
    g.dim = dim;
    g.n = n;
    for (int a = 0; a < dim; ++a) {
        if (!(extent[a] > 0.0) || !std::isfinite(extent[a])) throw ParameterError("grid extent must be positive");
        if (!std::isfinite(origin[a])) throw ParameterError("grid origin must be finite");
        g.origin[a] = origin[a];
        g.extent[a] = extent[a];
    }
    if (dim == 1) {
        g.origin[1] = 0.0;
        g.extent[1] = extent[0];
    }
    return g;
}

Grid make_grid(int dim, double origin, double extent, int n)
{
    return make_grid(dim, Vec(dim, origin), Vec(dim, extent), n);
}

Vec Grid::node(std::size_t idx) const
{
    if (dim == 1) return {coord(0, int(idx))};
    return {coord(0, int(idx / n)), coord(1, int(idx % n))};
}

std::size_t Grid::nearest_index(const Vec& x) const
{
    auto axis_index = [&](int a) {
        long long i = std::llround((x[a] - origin[a]) / spacing(a));
        return int(std::clamp<long long>(i, 0, n - 1));
    };
    if (dim == 1) return std::size_t(axis_index(0));
    return flat(axis_index(0), axis_index(1));
}

bool Grid::contains_ball(const Vec& center, double radius) const
{
    for (int a = 0; a < dim; ++a) {
        double lo = origin[a];
        double hi = origin[a] + (n - 1) * spacing(a);
        if (center[a] - radius < lo || center[a] + radius > hi) return false;
    }
    return true;
}

bool Box::contains(const Vec& x, double slack) const
{
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (x[a] < lo[a] - slack || x[a] > hi[a] + slack) return false;
    return true;
}

double SampledField::max_abs() const
{
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

void SampledField::validate() const
{
    if (values.size() != grid.size()) throw ParameterError("field size does not match grid");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw InputError("field contains non-finite values");
        if (support_hint && std::abs(values[i]) > 0.0 && !support_hint->contains(grid.node(i), 1e-12))
            throw ParameterError("support hint excludes a nonzero node");
    }
}

static void require_same_grid(const Grid& a, const Grid& b)
{
    if (a.dim != b.dim || a.n != b.n || a.origin != b.origin || a.extent != b.extent)
        throw ParameterError("fields live on different grids");
}

SampledField operator+(const SampledField& a, const SampledField& b)
{
    require_same_grid(a.grid, b.grid);
    SampledField out(a.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
    return out;
}

SampledField scaled(const SampledField& a, cplx s)
{
    SampledField out = a;
    for (auto& v : out.values) v *= s;
    return out;
}

double smooth_step_down(double t)
{
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - t));
    double b = std::exp(-1.0 / t);
    return a / (a + b);
}

void Window::validate() const
{
    if (!(r1 > 0.0) || !(r2 > r1)) throw ParameterError("window radii must satisfy 0 < r1 < r2");
}

double eval_window_radial(const Window& w, double r)
{
    if (r >= w.r2) return 0.0;
    switch (w.profile) {
    case WindowProfile::PlateauBump:
        if (r <= w.r1) return 1.0;
        return smooth_step_down((r - w.r1) / (w.r2 - w.r1));
    case WindowProfile::CompactGaussian: {
        double q = r / w.r2;
        double v = std::exp(-(r / w.r1) * (r / w.r1) / (1.0 - q * q));
        return v;
    }
    }
    return 0.0;
}

double eval_window(const Window& w, const Vec& x)
{
    double r2 = 0.0;
    for (std::size_t a = 0; a < w.center.size(); ++a) r2 += (x[a] - w.center[a]) * (x[a] - w.center[a]);
    return eval_window_radial(w, std::sqrt(r2));
}

std::vector<std::pair<std::size_t, double>> window_nodes(const Grid& g, const Window& w)
{
    std::vector<std::pair<std::size_t, double>> out;
    int lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const double h = g.spacing(a);
        lo[a] = std::max(0, int(std::floor((w.center[a] - w.r2 - g.origin[a]) / h)));
        hi[a] = std::min(g.n - 1, int(std::ceil((w.center[a] + w.r2 - g.origin[a]) / h)));
    }
    auto push = [&](std::size_t idx, double r2) {
        double v = eval_window_radial(w, std::sqrt(r2));
        if (v != 0.0) out.emplace_back(idx, v);
    };
    for (int i = lo[0]; i <= hi[0]; ++i) {
        const double dx = g.coord(0, i) - w.center[0];
        if (g.dim == 1) {
            push(std::size_t(i), dx * dx);
            continue;
        }
        for (int j = lo[1]; j <= hi[1]; ++j) {
            const double dy = g.coord(1, j) - w.center[1];
            push(g.flat(i, j), dx * dx + dy * dy);
        }
    }
    return out;
}

SampledField apply_window(const SampledField& f, const Window& w)
{
    w.validate();
    if (int(w.center.size()) != f.grid.dim) throw ParameterError("window centre dimension does not match the grid");
    SampledField out(f.grid);
    Box box;
    for (int a = 0; a < f.grid.dim; ++a) {
        box.lo.push_back(w.center[a] - w.r2);
        box.hi.push_back(w.center[a] + w.r2);
    }
    for (const auto& [idx, wv] : window_nodes(f.grid, w)) out.values[idx] = wv * f.values[idx];
    out.support_hint = box;
    return out;
}

DirectionSet uniform_directions(int dim, int count)
{
    DirectionSet ds;
    ds.dim = dim;
    if (dim == 1) {
        ds.dirs = {{1.0}, {-1.0}};
        ds.cap_half_angle = kPi / 2.0;
        return ds;
    }
    if (dim != 2) throw ParameterError("uniform_directions supports dim 1 or 2");
    if (count < 4) throw ParameterError("direction count must be at least 4");
    for (int j = 0; j < count; ++j) {
        double a = 2.0 * kPi * j / count;
        ds.dirs.push_back({std::cos(a), std::sin(a)});
    }
    ds.cap_half_angle = kPi / count;
    return ds;
}

double norm(const Vec& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec normalized(const Vec& v)
{
    double n = norm(v);
    if (n == 0.0) throw ParameterError("cannot normalise a zero vector");
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

Vec operator-(const Vec& a)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return out;
}

Vec operator+(const Vec& a, const Vec& b)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vec operator-(const Vec& a, const Vec& b)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec operator*(double s, const Vec& a)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

double distance(const Vec& a, const Vec& b) { return norm(a - b); }

double angle_between(const Vec& a, const Vec& b)
{
    double c = dot(a, b) / (norm(a) * norm(b));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace wfkit
