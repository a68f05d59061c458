#include "wfkit/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "wfkit/parallel.hpp"

namespace wfkit {

namespace {

std::vector<cplx> twiddles(std::size_t n, int sign)
{
    std::vector<cplx> tw(n / 2);
    for (std::size_t m = 0; m < n / 2; ++m) tw[m] = std::polar(1.0, sign * 2.0 * kPi * double(m) / double(n));
    return tw;
}

void fft_with(cplx* a, std::size_t n, const std::vector<cplx>& tw)
{
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t m = 0; m < half; ++m) {
                const cplx w = tw[m * stride];
                const cplx x = a[i + m + half];
                const cplx v(x.real() * w.real() - x.imag() * w.imag(), x.real() * w.imag() + x.imag() * w.real());
                const cplx u = a[i + m];
                a[i + m] = u + v;
                a[i + m + half] = u - v;
            }
        }
    }
}

}  // namespace

void fft_inplace(std::vector<cplx>& a, int sign)
{
    const std::size_t n = a.size();
    if (!is_power_of_two((long long)n)) throw ParameterError("transform length must be a power of two");
    fft_with(a.data(), n, twiddles(n, sign));
}

void fft2_inplace(std::vector<cplx>& a, int n, int sign)
{
    if (!is_power_of_two(n) || a.size() != std::size_t(n) * n) throw ParameterError("2D transform needs an n x n power-of-two array");
    const auto tw = twiddles(std::size_t(n), sign);
    for (int i = 0; i < n; ++i) fft_with(a.data() + std::size_t(i) * n, n, tw);
    std::vector<cplx> line(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) line[i] = a[std::size_t(i) * n + j];
        fft_with(line.data(), n, tw);
        for (int i = 0; i < n; ++i) a[std::size_t(i) * n + j] = line[i];
    }
}

Vec SpectralField::k_at(std::size_t flat) const
{
    if (dim() == 1) return {k(0, int(flat))};
    return {k(0, int(flat / n())), k(1, int(flat % n()))};
}

double SpectralField::peak() const
{
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Position of centred index idx in the natural FFT ordering.
int natural(int idx, int n) { return (idx - n / 2 + n) % n; }

}  // namespace

SpectralField dft(const SampledField& field)
{
    const Grid& g = field.grid;
    SpectralField s;
    s.source = g;
    std::vector<cplx> a = field.values;
    const int n = g.n;
    if (g.dim == 1) {
        fft_inplace(a, +1);
        s.values.resize(n);
        const double h = g.spacing(0);
        for (int idx = 0; idx < n; ++idx)
            s.values[idx] = h * a[natural(idx, n)] * std::polar(1.0, s.k(0, idx) * g.origin[0]);
        return s;
    }
    fft2_inplace(a, n, +1);
    s.values.resize(a.size());
    const double area = g.spacing(0) * g.spacing(1);
    std::vector<cplx> phase1(n);
    for (int j = 0; j < n; ++j) phase1[j] = std::polar(1.0, s.k(1, j) * g.origin[1]);
    for (int i = 0; i < n; ++i) {
        const int ni = natural(i, n);
        const cplx phase0 = area * std::polar(1.0, s.k(0, i) * g.origin[0]);
        for (int j = 0; j < n; ++j)
            s.values[g.flat(i, j)] = phase0 * a[std::size_t(ni) * n + natural(j, n)] * phase1[j];
    }
    return s;
}

SampledField inverse_dft(const SpectralField& spec)
{
    const Grid& g = spec.source;
    const int n = g.n;
    SampledField out(g);
    std::vector<cplx> a(spec.values.size());
    if (g.dim == 1) {
        for (int idx = 0; idx < n; ++idx)
            a[natural(idx, n)] = spec.values[idx] * std::polar(1.0, -spec.k(0, idx) * g.origin[0]);
        fft_inplace(a, -1);
        for (int j = 0; j < n; ++j) out.values[j] = a[j] / g.extent[0];
        return out;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double phase = spec.k(0, i) * g.origin[0] + spec.k(1, j) * g.origin[1];
            a[std::size_t(natural(i, n)) * n + natural(j, n)] = spec.values[g.flat(i, j)] * std::polar(1.0, -phase);
        }
    fft2_inplace(a, n, -1);
    const double norm_factor = 1.0 / (g.extent[0] * g.extent[1]);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i] * norm_factor;
    return out;
}

double antialias_taper(double k_radius, double nyquist)
{
    constexpr double start = 0.7;
    return smooth_step_down((k_radius / nyquist - start) / (1.0 - start));
}

SampledField synthesize(const Grid& g, const std::function<cplx(const Vec&)>& spectrum, bool antialias)
{
    SpectralField s;
    s.source = g;
    s.values.resize(g.size());
    const double nyq = g.nyquist(0);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        Vec k = s.k_at(i);
        cplx v = spectrum(k);
        if (antialias) {
            double t = antialias_taper(norm(k), nyq);
            v = t == 0.0 ? cplx(0.0, 0.0) : v * t;
        }
        s.values[i] = v;
    }
    return inverse_dft(s);
}

SpectralField localized_spectrum(const SampledField& field, const Window& window)
{
    window.validate();
    if (!field.grid.contains_ball(window.center, window.r2))
        throw ParameterError("window support is clipped by the grid boundary");
    return dft(apply_window(field, window));
}

DecayProfile decay_profile(const SpectralField& spec, const Vec& direction, double cap_half_angle,
                           const std::vector<double>& radii, double radius_ratio, double floor_abs)
{
    if (radii.empty()) throw ParameterError("decay profile needs at least one radius");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw ParameterError("radii must be strictly increasing");
    DecayProfile prof;
    prof.direction = normalized(direction);
    prof.cap_half_angle = cap_half_angle;
    prof.radii = radii;
    prof.amplitudes.assign(radii.size(), std::numeric_limits<double>::quiet_NaN());
    prof.floor = floor_abs;
    const double sr = std::sqrt(radius_ratio);
    const double nyq = spec.dim() == 1 ? spec.source.nyquist(0)
                                       : std::min(spec.source.nyquist(0), spec.source.nyquist(1));
    const double cos_cap = std::cos(cap_half_angle) - 1e-12;
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        Vec k = spec.k_at(i);
        double kr = norm(k);
        if (kr == 0.0 || kr >= nyq) continue;
        if (dot(k, prof.direction) / kr < cos_cap) continue;
        for (std::size_t r = 0; r < radii.size(); ++r) {
            if (kr >= radii[r] / sr && kr < radii[r] * sr) {
                double a = std::abs(spec.values[i]);
                double& slot = prof.amplitudes[r];
                if (std::isnan(slot) || a > slot) slot = a;
            }
        }
    }
    fit_exponent(prof);
    return prof;
}

void fit_exponent(DecayProfile& p)
{
    p.available = false;
    p.decayed = false;
    p.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    p.fit_residual = std::numeric_limits<double>::quiet_NaN();
    if (p.amplitudes.empty()) return;
    double last = p.amplitudes.back();
    if (!std::isnan(last) && last <= p.floor) {
        p.decayed = true;
        p.fitted_exponent = -std::numeric_limits<double>::infinity();
        p.fit_residual = 0.0;
        return;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        double a = p.amplitudes[i];
        if (std::isnan(a) || a <= p.floor) continue;
        xs.push_back(std::log(p.radii[i]));
        ys.push_back(std::log(a));
    }
    if (xs.size() < 3) return;
    const double m = double(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / m, my = sy / m, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (my + slope * (xs[i] - mx));
        rss += e * e;
    }
    p.fitted_exponent = slope;
    p.fit_residual = std::sqrt(rss / m);
    p.available = true;
}

std::vector<double> EstimatorParams::radii() const
{
    std::vector<double> r;
    for (int i = 0; i < radius_count; ++i) r.push_back(k_min * std::pow(radius_ratio, i));
    return r;
}

Window EstimatorParams::window_at(const Vec& center) const
{
    Window w;
    w.center = center;
    w.r1 = window_r1;
    w.r2 = window_r2;
    w.profile = window_profile;
    return w;
}

void EstimatorParams::validate(const Grid& g) const
{
    if (!(window_r1 > 0.0) || !(window_r2 > window_r1)) throw ParameterError("window radii must satisfy 0 < r1 < r2");
    if (g.dim == 2 && directions < 4) throw ParameterError("at least four directions are needed in 2D");
    if (radius_count < 3) throw ParameterError("at least three radii are needed for a decay fit");
    if (!(radius_ratio > 1.0)) throw ParameterError("radius ratio must exceed 1");
    if (!(p_thr > 0.0)) throw ParameterError("p_thr must be positive");
    if (!(floor_rel >= 0.0)) throw ParameterError("amplitude floor must be non-negative");
    double dk = 2.0 * kPi / std::max(g.extent[0], g.dim == 2 ? g.extent[1] : 0.0);
    if (k_min < 4.0 * dk * (1.0 - 1e-12)) throw ParameterError("k_min must be at least 4 frequency steps");
    double top = radii().back();
    if (top > 0.8 * std::min(g.nyquist(0), g.dim == 2 ? g.nyquist(1) : g.nyquist(0)) * (1.0 + 1e-12))
        throw ParameterError("largest radius exceeds 0.8 Nyquist");
}

EstimatorParams default_params(const Grid& g)
{
    EstimatorParams p;
    const double h = g.spacing(0);
    if (g.dim == 1) {
        p.window_r1 = 32.0 * h;
        p.window_r2 = 96.0 * h;
        p.directions = 2;
        p.k_min = 4.0 / p.window_r1;
        p.radius_ratio = std::sqrt(2.0);
    } else {
        p.window_r1 = 7.0 * h;
        p.window_r2 = 22.0 * h;
        p.directions = 64;
        p.k_min = 0.35 * g.nyquist(0);
        p.radius_ratio = std::pow(2.0, 0.25);
    }
    p.radius_count = 5;
    p.p_thr = 2.0;
    p.floor_rel = 1e-5;
    return p;
}

Classification classify_direction(const DecayProfile& p, const EstimatorParams& params)
{
    if (p.decayed) return {Decay::Fast, false};
    if (!p.available) return {Decay::Slow, true};
    if (p.fitted_exponent <= -params.p_thr && p.fit_residual <= params.residual_bound) return {Decay::Fast, false};
    return {Decay::Slow, false};
}

double exponent_score(const DecayProfile& p, const EstimatorParams& params)
{
    if (p.decayed) return 0.0;
    if (!p.available) return 1.0;
    return std::clamp((p.fitted_exponent + params.p_thr) / params.p_thr, 0.0, 1.0);
}

std::vector<DecayProfile> direction_profiles(const SpectralField& spec, const DirectionSet& dirs,
                                             const EstimatorParams& params, double floor_abs)
{
    const std::vector<double> radii = params.radii();
    const std::size_t nr = radii.size();
    const std::size_t nd = dirs.dirs.size();
    std::vector<DecayProfile> out(nd);
    std::vector<Vec> unit(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        unit[d] = normalized(dirs.dirs[d]);
        out[d].direction = unit[d];
        out[d].cap_half_angle = dirs.cap_half_angle;
        out[d].radii = radii;
        out[d].amplitudes.assign(nr, std::numeric_limits<double>::quiet_NaN());
        out[d].floor = floor_abs;
    }
    const double sr = std::sqrt(params.radius_ratio);
    const double log_ratio = std::log(params.radius_ratio);
    const double nyq = spec.dim() == 1 ? spec.source.nyquist(0)
                                       : std::min(spec.source.nyquist(0), spec.source.nyquist(1));
    const double kr_lo = radii.front() / sr;
    const double kr_hi = std::min(radii.back() * sr, nyq);
    const double cos_cap = std::cos(dirs.cap_half_angle) - 1e-12;
    const int n = spec.n(), dim = spec.dim();
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        const double kx = dim == 1 ? spec.k(0, int(i)) : spec.k(0, int(i / n));
        const double ky = dim == 1 ? 0.0 : spec.k(1, int(i % n));
        const double kr = std::hypot(kx, ky);
        if (kr < kr_lo || kr >= kr_hi) continue;
        long r = std::lround(std::log(kr / radii.front()) / log_ratio);
        if (r < 0 || r >= long(nr)) continue;
        // Guard the bin edges against rounding in the logarithm.
        if (kr < radii[r] / sr) --r;
        else if (kr >= radii[r] * sr) ++r;
        if (r < 0 || r >= long(nr)) continue;
        const double a = std::abs(spec.values[i]);
        for (std::size_t d = 0; d < nd; ++d) {
            const double c = dim == 1 ? kx * unit[d][0] : kx * unit[d][0] + ky * unit[d][1];
            if (c / kr < cos_cap) continue;
            double& slot = out[d].amplitudes[r];
            if (std::isnan(slot) || a > slot) slot = a;
        }
    }
    for (auto& p : out) fit_exponent(p);
    return out;
}

double floor_reference(const SampledField& field, const Window& w, const SpectralField& spec)
{
    double integral = 0.0;
    for (const auto& node : window_nodes(field.grid, w)) integral += node.second;
    integral *= field.grid.dim == 1 ? field.grid.spacing(0) : field.grid.spacing(0) * field.grid.spacing(1);
    return std::max(spec.peak(), field.max_abs() * integral);
}

namespace {

double direction_angle(const Vec& k)
{
    double a = k.size() == 1 ? (k[0] >= 0.0 ? 0.0 : kPi) : std::atan2(k[1], k[0]);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

DirectionSet estimator_directions(const Grid& g, const EstimatorParams& params)
{
    return uniform_directions(g.dim, g.dim == 1 ? 4 : params.directions);
}

}  // namespace

ConicSet estimate_wf(const SampledField& field, const std::vector<Vec>& base_points, const EstimatorParams& params)
{
    const Grid& g = field.grid;
    params.validate(g);
    for (const auto& x : base_points) {
        if (int(x.size()) != g.dim) throw ParameterError("base point dimension does not match the grid");
        if (!g.contains_ball(x, params.window_r2)) throw ParameterError("window support is clipped by the grid boundary");
    }
    std::vector<Vec> points = base_points;
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const DirectionSet dirs = estimator_directions(g, params);
    std::vector<std::vector<WFSample>> per_point(points.size());
    parallel_for(points.size(), [&](std::size_t pi) {
        const Vec& x = points[pi];
        Window w = params.window_at(x);
        SpectralField spec = localized_spectrum(field, w);
        double floor_abs = params.floor_rel * floor_reference(field, w, spec);
        auto profiles = direction_profiles(spec, dirs, params, floor_abs);
        for (const auto& p : profiles) {
            Classification c = classify_direction(p, params);
            if (c.decay == Decay::Fast) continue;
            WFSample s;
            s.x = x;
            s.k = p.direction;
            s.exponent = p.fitted_exponent;
            s.score = exponent_score(p, params);
            s.low_confidence = c.low_confidence;
            per_point[pi].push_back(std::move(s));
        }
        std::sort(per_point[pi].begin(), per_point[pi].end(),
                  [](const WFSample& a, const WFSample& b) { return direction_angle(a.k) < direction_angle(b.k); });
    });
    std::vector<WFSample> all;
    for (auto& v : per_point)
        for (auto& s : v) all.push_back(std::move(s));
    ConicSet out = sampled_set(g.dim, std::move(all), "fourier estimate");
    return out;
}

FrequencySetResult frequency_set(const SampledField& field, const EstimatorParams& params)
{
    const Grid& g = field.grid;
    params.validate(g);
    if (!field.support_hint) throw ParameterError("frequency set needs a compactly supported field (support hint)");
    const Box& box = *field.support_hint;
    for (int a = 0; a < g.dim; ++a) {
        double lo = g.origin[a], hi = g.origin[a] + (g.n - 1) * g.spacing(a);
        if (box.lo[a] <= lo || box.hi[a] >= hi) throw ParameterError("support hint is not interior to the grid");
    }
    SpectralField spec = dft(field);
    double mass = 0.0;
    for (const auto& v : field.values) mass += std::abs(v);
    mass *= g.dim == 1 ? g.spacing(0) : g.spacing(0) * g.spacing(1);
    const double floor_abs = params.floor_rel * std::max(spec.peak(), mass);

    FrequencySetResult res;
    res.directions = estimator_directions(g, params);
    auto prof_a = direction_profiles(spec, res.directions, params, floor_abs);
    for (const auto& p : prof_a) {
        res.in_sigma_a.push_back(classify_direction(p, params).decay == Decay::Slow);
        res.exponent_a.push_back(p.fitted_exponent);
    }
    if (g.dim == 1) {
        res.in_sigma_b = res.in_sigma_a;
        res.exponent_b = res.exponent_a;
        return res;
    }
    // Variant B: narrow rays spread over each cap; the direction is in Sigma when any ray decays slowly.
    const double cap = res.directions.cap_half_angle;
    DirectionSet rays;
    rays.dim = 2;
    rays.cap_half_angle = cap / 4.0;
    for (const auto& d : res.directions.dirs) {
        double base = std::atan2(d[1], d[0]);
        for (int j = -2; j <= 2; ++j) {
            double a = base + j * cap / 2.0;
            rays.dirs.push_back({std::cos(a), std::sin(a)});
        }
    }
    auto prof_b = direction_profiles(spec, rays, params, floor_abs);
    for (std::size_t d = 0; d < res.directions.dirs.size(); ++d) {
        bool slow = false;
        double worst = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < 5; ++j) {
            const auto& p = prof_b[d * 5 + j];
            if (classify_direction(p, params).decay == Decay::Slow) slow = true;
            double e = p.available ? p.fitted_exponent : (p.decayed ? -std::numeric_limits<double>::infinity() : 0.0);
            worst = std::max(worst, e);
        }
        res.in_sigma_b.push_back(slow);
        res.exponent_b.push_back(worst);
    }
    return res;
}

SampledField finite_difference(const SampledField& f, int axis)
{
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw ParameterError("axis out of range");
    SampledField out(g);
    const int n = g.n;
    const double inv = 1.0 / (2.0 * g.spacing(axis));
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) out.values[i] = (f.values[(i + 1) % n] - f.values[(i + n - 1) % n]) * inv;
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx plus = axis == 0 ? f.at((i + 1) % n, j) : f.at(i, (j + 1) % n);
                cplx minus = axis == 0 ? f.at((i + n - 1) % n, j) : f.at(i, (j + n - 1) % n);
                out.at(i, j) = (plus - minus) * inv;
            }
    }
    if (f.support_hint) {
        Box b = *f.support_hint;
        b.lo[axis] -= g.spacing(axis);
        b.hi[axis] += g.spacing(axis);
        out.support_hint = b;
    }
    return out;
}

}  // namespace wfkit
