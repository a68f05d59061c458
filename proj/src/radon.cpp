#include "wfkit/radon.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wfkit/parallel.hpp"

namespace wfkit {

namespace {

void require_2d(const SampledField& f)
{
    if (f.grid.dim != 2) throw ParameterError("the Radon transform needs a 2D field");
}

void require_window_inside(const Grid& g, const Window& w)
{
    w.validate();
    if (!g.contains_ball(w.center, w.r2)) throw ParameterError("window support is clipped by the grid boundary");
}

// Lagrange weights for nodes base..base+5 at fractional coordinate u (in node units).
void lagrange6(double u, int& base, double wts[6])
{
    base = int(std::floor(u)) - 2;
    for (int j = 0; j < 6; ++j) {
        double xj = base + j;
        double w = 1.0;
        for (int m = 0; m < 6; ++m) {
            if (m == j) continue;
            double xm = base + m;
            w *= (u - xm) / (xj - xm);
        }
        wts[j] = w;
    }
}

Vec perpendicular(const Vec& nu) { return {-nu[1], nu[0]}; }

double max_abs(const SampledField& f)
{
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double binomial(int m, int i)
{
    double c = 1.0;
    for (int j = 1; j <= i; ++j) c = c * (m - i + j) / j;
    return c;
}

void record_growth(RadonProfile& p, int m_max)
{
    p.derivative_growth.assign(m_max + 1, 0.0);
    double ds = p.offsets.size() > 1 ? p.offsets[1] - p.offsets[0] : 1.0;
    for (int m = 0; m <= m_max; ++m) {
        double best = 0.0;
        for (std::size_t i = 0; i + m < p.values.size(); ++i) {
            cplx d = 0.0;
            for (int j = 0; j <= m; ++j) d += ((m - j) % 2 ? -1.0 : 1.0) * binomial(m, j) * p.values[i + j];
            best = std::max(best, std::abs(d) / std::pow(ds, m));
        }
        p.derivative_growth[m] = best;
    }
}

struct WindowedNodes {
    std::vector<Vec> x;
    std::vector<cplx> v;  // window * field * cell area
    bool real = true;
};

WindowedNodes windowed_nodes(const SampledField& field, const Window& w)
{
    const Grid& g = field.grid;
    const double area = g.spacing(0) * g.spacing(1);
    WindowedNodes out;
    for (const auto& [i, wv] : window_nodes(g, w)) {
        if (field.values[i] == cplx(0.0)) continue;
        out.x.push_back(g.node(i));
        out.v.push_back(wv * field.values[i] * area);
        if (field.values[i].imag() != 0.0) out.real = false;
    }
    return out;
}

// The trigonometric interpolant of the samples has spectrum in the Nyquist square, whose
// slice along nu is |k| <= pi / (h max|nu_i|). Its line integrals are sinc sums over the nodes.
std::vector<cplx> sinc_profile(const WindowedNodes& nodes, const Vec& nu, const std::vector<double>& offsets, double h)
{
    const double kmax = kPi / (h * std::max(std::abs(nu[0]), std::abs(nu[1])));
    const std::size_t n = nodes.x.size();
    std::vector<double> proj(n), re_c(n), re_s(n), im_c(n), im_s(n);
    for (std::size_t q = 0; q < n; ++q) {
        proj[q] = dot(nu, nodes.x[q]);
        const double c = std::cos(kmax * proj[q]) / kPi, sn = std::sin(kmax * proj[q]) / kPi;
        re_c[q] = nodes.v[q].real() * c;
        re_s[q] = nodes.v[q].real() * sn;
        im_c[q] = nodes.v[q].imag() * c;
        im_s[q] = nodes.v[q].imag() * sn;
    }
    std::vector<cplx> out(offsets.size());
    for (std::size_t si = 0; si < offsets.size(); ++si) {
        const double s = offsets[si];
        const double ss = std::sin(kmax * s), cs = std::cos(kmax * s);
        double re = 0.0, im = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            const double t = s - proj[q];
            if (std::abs(t) < 1e-14) {
                re += kmax * nodes.v[q].real() / kPi;
                im += kmax * nodes.v[q].imag() / kPi;
                continue;
            }
            re += (ss * re_c[q] - cs * re_s[q]) / t;
            if (!nodes.real) im += (ss * im_c[q] - cs * im_s[q]) / t;
        }
        out[si] = {re, im};
    }
    return out;
}

RadonProfile radon_sinc(const SampledField& field, const Window& w, const Vec& nu_in,
                        const std::vector<double>& offsets, int m_max)
{
    RadonProfile p;
    p.direction = normalized(nu_in);
    p.offsets = offsets;
    p.values = sinc_profile(windowed_nodes(field, w), p.direction, offsets, field.grid.spacing(0));
    record_growth(p, m_max);
    return p;
}

SmoothnessTest smoothness(const SampledField& field, const Vec& x, const Vec& nu_in, const RadonWFParams& params,
                          double field_scale, const WindowedNodes* cache);

}  // namespace

std::vector<double> default_offsets(const Grid& g, const Window& w, const Vec& nu)
{
    const double step = 0.5 * g.spacing(0);
    const double s0 = dot(normalized(nu), w.center);
    const int half = int(std::ceil(w.r2 / step)) + 1;
    std::vector<double> out;
    for (int j = -half; j <= half; ++j) out.push_back(s0 + j * step);
    return out;
}

cplx interpolate(const SampledField& f, const Vec& x, Interpolation mode)
{
    if (mode == Interpolation::Sinc) throw ParameterError("sinc mode is only available for line integrals");
    const Grid& g = f.grid;
    const double u = (x[0] - g.origin[0]) / g.spacing(0);
    const double v = (x[1] - g.origin[1]) / g.spacing(1);
    auto value = [&](int i, int j) -> cplx {
        if (i < 0 || j < 0 || i >= g.n || j >= g.n) return 0.0;
        return f.at(i, j);
    };
    if (mode == Interpolation::Bilinear) {
        int i = int(std::floor(u)), j = int(std::floor(v));
        double a = u - i, b = v - j;
        return (1 - a) * (1 - b) * value(i, j) + a * (1 - b) * value(i + 1, j) + (1 - a) * b * value(i, j + 1) +
               a * b * value(i + 1, j + 1);
    }
    int bi, bj;
    double wu[6], wv[6];
    lagrange6(u, bi, wu);
    lagrange6(v, bj, wv);
    cplx sum = 0.0;
    for (int p = 0; p < 6; ++p) {
        cplx row = 0.0;
        for (int q = 0; q < 6; ++q) row += wv[q] * value(bi + p, bj + q);
        sum += wu[p] * row;
    }
    return sum;
}

RadonProfile radon(const SampledField& field, const Window& w, const Vec& nu_in, const std::vector<double>& offsets,
                   const RadonParams& params)
{
    require_2d(field);
    require_window_inside(field.grid, w);
    if (params.interpolation == Interpolation::Sinc) return radon_sinc(field, w, nu_in, offsets, params.m_max);
    const Vec nu = normalized(nu_in);
    const Vec tau = perpendicular(nu);
    const double h = field.grid.spacing(0);
    const double step_hint = params.line_step > 0.0 ? params.line_step : h;
    const int nt = std::max(2, int(std::ceil(2.0 * w.r2 / step_hint)));
    const double dt = 2.0 * w.r2 / nt;
    const double tc = dot(tau, w.center);

    RadonProfile p;
    p.direction = nu;
    p.offsets = offsets;
    p.values.assign(offsets.size(), 0.0);
    for (std::size_t si = 0; si < offsets.size(); ++si) {
        const double s = offsets[si];
        cplx acc = 0.0;
        // Trapezoid rule; the window vanishes at both ends.
        for (int it = 1; it < nt; ++it) {
            double t = tc - w.r2 + it * dt;
            Vec x = s * nu + t * tau;
            double wv = eval_window(w, x);
            if (wv == 0.0) continue;
            acc += wv * interpolate(field, x, params.interpolation);
        }
        p.values[si] = acc * dt;
    }
    record_growth(p, params.m_max);
    return p;
}

double fourier_slice(const SampledField& field, const Window& w, const Vec& nu_in, double k_fraction,
                     const RadonParams& params)
{
    require_2d(field);
    require_window_inside(field.grid, w);
    const Grid& g = field.grid;
    const Vec nu = normalized(nu_in);
    const double area = g.spacing(0) * g.spacing(1);

    std::vector<Vec> pts;
    std::vector<cplx> vals;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        Vec x = g.node(i);
        double wv = eval_window(w, x);
        if (wv == 0.0 || field.values[i] == cplx(0.0)) continue;
        pts.push_back(x);
        vals.push_back(wv * field.values[i]);
    }
    auto offsets = default_offsets(g, w, nu);
    RadonProfile prof = radon(field, w, nu, offsets, params);
    const double ds = offsets[1] - offsets[0];

    const double kmax = k_fraction * g.nyquist(0);
    const double dk = 2.0 * kPi / g.extent[0];
    const int K = int(std::floor(kmax / dk + 1e-9));
    std::vector<cplx> a(2 * K + 1), b(2 * K + 1);
    parallel_for(a.size(), [&](std::size_t idx) {
        const double k = (int(idx) - K) * dk;
        cplx sa = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) sa += vals[p] * std::polar(1.0, k * dot(nu, pts[p]));
        a[idx] = sa * area;
        cplx sb = 0.0;
        for (std::size_t j = 0; j < offsets.size(); ++j) sb += prof.values[j] * std::polar(1.0, k * offsets[j]);
        b[idx] = sb * ds;
    });
    double peak = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        peak = std::max(peak, std::abs(a[i]));
        dev = std::max(dev, std::abs(a[i] - b[i]));
    }
    if (peak == 0.0) return dev;
    return dev / peak;
}

void RadonWFParams::validate(const Grid& g) const
{
    if (g.dim != 2) throw ParameterError("Radon estimation needs a 2D grid");
    if (!(window_r1 > 0.0) || !(window_r2 > window_r1)) throw ParameterError("window radii must satisfy 0 < r1 < r2");
    if (directions < 4) throw ParameterError("at least four directions are needed");
    if (m_max < 1) throw ParameterError("m_max must be at least 1");
    if (!(growth_factor > 0.0) || !(relevance >= 0.0)) throw ParameterError("invalid smoothness thresholds");
}

RadonWFParams default_radon_params(const Grid& g)
{
    RadonWFParams p;
    const double h = g.spacing(0);
    p.window_r1 = 16.0 * h;
    p.window_r2 = 32.0 * h;
    p.directions = 64;
    p.coarse_step = h;
    p.locus = 2.0 * h;
    return p;
}

SmoothnessTest radon_smoothness(const SampledField& field, const Vec& x, const Vec& nu, const RadonWFParams& params,
                                double field_scale)
{
    return smoothness(field, x, nu, params, field_scale, nullptr);
}

namespace {

SmoothnessTest smoothness(const SampledField& field, const Vec& x, const Vec& nu_in, const RadonWFParams& params,
                          double field_scale, const WindowedNodes* cache)
{
    const Grid& g = field.grid;
    const Vec nu = normalized(nu_in);
    const double h = g.spacing(0);
    const double d = params.coarse_step > 0.0 ? params.coarse_step : h;
    const double locus = params.locus > 0.0 ? params.locus : 2.0 * h;
    Window w;
    w.center = x;
    w.r1 = params.window_r1;
    w.r2 = params.window_r2;
    w.profile = params.window_profile;

    const double s0 = dot(nu, x);
    const int L = int(std::ceil(locus / d));
    const int J = L + 2 * params.m_max + 2;
    std::vector<double> offsets;
    for (int j = -J; j <= J; ++j) offsets.push_back(s0 + j * d);
    RadonProfile prof;
    if (cache) {
        prof.values = sinc_profile(*cache, nu, offsets, h);
    } else {
        RadonParams rp;
        rp.m_max = 0;
        rp.interpolation = params.interpolation;
        prof = radon(field, w, nu, offsets, rp);
    }
    double scale = 0.0;
    for (const auto& v : prof.values) scale = std::max(scale, std::abs(v));
    if (field_scale <= 0.0) field_scale = max_abs(field);
    double line_mass = 0.0;
    for (int j = -int(w.r2 / h); j <= int(w.r2 / h); ++j) line_mass += eval_window(w, x + j * h * perpendicular(nu)) * h;
    scale = std::max(scale, field_scale * line_mass);

    SmoothnessTest res;
    if (scale == 0.0) return res;
    // Largest |m-th difference| over stencils of step `stride` touching the locus.
    auto max_difference = [&](int m, int stride) {
        double best = 0.0;
        for (int start = 0; start + m * stride < int(offsets.size()); ++start) {
            int lo = start - J, hi = start + m * stride - J;
            if (hi < -L || lo > L) continue;
            cplx diff = 0.0;
            for (int i = 0; i <= m; ++i)
                diff += ((m - i) % 2 ? -1.0 : 1.0) * binomial(m, i) * prof.values[start + i * stride];
            best = std::max(best, std::abs(diff));
        }
        return best;
    };
    for (int m = 1; m <= params.m_max; ++m) {
        double fine = max_difference(m, 1);
        double coarse = max_difference(m, 2);
        if (fine < params.relevance * scale) continue;
        // Divided differences: fine / d^m against coarse / (2d)^m.
        double ratio = coarse > 0.0 ? fine * std::pow(2.0, m) / coarse : std::numeric_limits<double>::infinity();
        if (ratio > params.growth_factor * std::pow(2.0, m - 1)) {
            res.smooth = false;
            res.order = m;
            res.ratio = ratio;
            break;
        }
    }
    if (!res.smooth) {
        // Jump location: centroid of first differences over the locus.
        double wsum = 0.0, ssum = 0.0;
        for (int j = 0; j + 1 < int(offsets.size()); ++j) {
            if (j + 1 - J < -L || j - J > L) continue;
            double wgt = std::abs(prof.values[j + 1] - prof.values[j]);
            wsum += wgt;
            ssum += wgt * 0.5 * (offsets[j] + offsets[j + 1]);
        }
        res.jump_offset = wsum > 0.0 ? ssum / wsum : s0;
    }
    return res;
}

}  // namespace

ConicSet estimate_wf_pm(const SampledField& field, const std::vector<Vec>& base_points, const RadonWFParams& params)
{
    require_2d(field);
    params.validate(field.grid);
    for (const auto& x : base_points) {
        if (x.size() != 2) throw ParameterError("base points must be 2D");
        if (!field.grid.contains_ball(x, params.window_r2))
            throw ParameterError("window support is clipped by the grid boundary");
    }
    std::vector<Vec> points = base_points;
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const double field_scale = max_abs(field);
    const int lines = params.directions / 2;
    const double cap = kPi / params.directions;
    std::vector<std::vector<WFSample>> per_point(points.size());
    parallel_for(points.size(), [&](std::size_t pi) {
        const Vec& x = points[pi];
        std::optional<WindowedNodes> cache;
        if (params.interpolation == Interpolation::Sinc)
            cache = windowed_nodes(field, {x, params.window_r1, params.window_r2, params.window_profile});
        std::vector<std::pair<double, WFSample>> found;
        for (int l = 0; l < lines; ++l) {
            const double ang = 2.0 * kPi * l / params.directions;
            bool smooth = true;
            for (double off : {0.0, -0.5 * cap, 0.5 * cap}) {
                SmoothnessTest t = smoothness(field, x, {std::cos(ang + off), std::sin(ang + off)}, params, field_scale,
                                              cache ? &*cache : nullptr);
                if (!t.smooth) {
                    smooth = false;
                    break;
                }
            }
            if (smooth) continue;
            for (double a : {ang, ang + kPi}) {
                WFSample s;
                s.x = x;
                s.k = {std::cos(a), std::sin(a)};
                s.score = 1.0;
                found.emplace_back(a, s);
            }
        }
        std::sort(found.begin(), found.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
        for (auto& f : found) per_point[pi].push_back(std::move(f.second));
    });
    std::vector<WFSample> all;
    for (auto& v : per_point)
        for (auto& s : v) all.push_back(std::move(s));
    return sampled_set(2, std::move(all), "radon estimate");
}

}  // namespace wfkit
