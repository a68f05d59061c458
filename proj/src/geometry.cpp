#include "wfkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "wfkit/spectral.hpp"

namespace wfkit {

namespace {

constexpr int kDenseSamples = 4096;

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

bool segments_intersect(const Vec& p1, const Vec& p2, const Vec& q1, const Vec& q2)
{
    auto orient = [](const Vec& a, const Vec& b, const Vec& c) {
        double v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        return (v > 1e-14) - (v < -1e-14);
    };
    auto on_segment = [](const Vec& a, const Vec& b, const Vec& c) {
        return std::min(a[0], b[0]) - 1e-14 <= c[0] && c[0] <= std::max(a[0], b[0]) + 1e-14 &&
               std::min(a[1], b[1]) - 1e-14 <= c[1] && c[1] <= std::max(a[1], b[1]) + 1e-14;
    };
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2), o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

Vec outward_normal_of_tangent(const Vec& t) { return normalized(Vec{t[1], -t[0]}); }

double wrap01(double t) { return t - std::floor(t); }

// Golden-section minimisation of f on [a, b].
template <class F>
double golden_min(F f, double a, double b, int iters = 80)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

template <class F>
double bisect_root(F f, double a, double b, int iters = 80)
{
    double fa = f(a);
    for (int i = 0; i < iters; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double disk_spectrum(double kr)
{
    if (kr < 1e-8) return kPi * (1.0 - kr * kr / 8.0);
    return 2.0 * kPi * std::cyl_bessel_j(1.0, kr) / kr;
}

}  // namespace

Boundary2D make_polygon(std::vector<Vec> vertices)
{
    if (vertices.size() < 3) throw ParameterError("polygon needs at least three vertices");
    for (const auto& v : vertices)
        if (v.size() != 2 || !std::isfinite(v[0]) || !std::isfinite(v[1]))
            throw ParameterError("polygon vertices must be finite 2D points");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (distance(vertices[i], vertices[(i + 1) % n]) == 0.0) throw ParameterError("polygon has a repeated vertex");
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
                throw ParameterError("polygon is not simple");
        }
    }
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) area += cross2(vertices[i], vertices[(i + 1) % n]);
    if (std::abs(area) < 1e-14) throw ParameterError("polygon is degenerate");
    if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
    Boundary2D b;
    b.kind = Boundary2D::Kind::Polygon;
    b.vertices = std::move(vertices);
    return b;
}

Boundary2D make_circle(double cx, double cy, double r)
{
    if (!(r > 0.0)) throw ParameterError("circle radius must be positive");
    Boundary2D b;
    b.kind = Boundary2D::Kind::Curve;
    b.curve = "circle";
    b.params = {{"cx", cx}, {"cy", cy}, {"r", r}};
    b.gamma = [=](double t) {
        double a = 2.0 * kPi * t;
        return Vec{cx + r * std::cos(a), cy + r * std::sin(a)};
    };
    b.dgamma = [=](double t) {
        double a = 2.0 * kPi * t;
        return Vec{-2.0 * kPi * r * std::sin(a), 2.0 * kPi * r * std::cos(a)};
    };
    return b;
}

Boundary2D make_ellipse(double cx, double cy, double a, double bb, double rotation)
{
    if (!(a > 0.0) || !(bb > 0.0)) throw ParameterError("ellipse semi-axes must be positive");
    Boundary2D b;
    b.kind = Boundary2D::Kind::Curve;
    b.curve = "ellipse";
    b.params = {{"cx", cx}, {"cy", cy}, {"a", a}, {"b", bb}, {"rotation", rotation}};
    const double c = std::cos(rotation), s = std::sin(rotation);
    b.gamma = [=](double t) {
        double th = 2.0 * kPi * t;
        double x = a * std::cos(th), y = bb * std::sin(th);
        return Vec{cx + c * x - s * y, cy + s * x + c * y};
    };
    b.dgamma = [=](double t) {
        double th = 2.0 * kPi * t;
        double x = -2.0 * kPi * a * std::sin(th), y = 2.0 * kPi * bb * std::cos(th);
        return Vec{c * x - s * y, s * x + c * y};
    };
    return b;
}

Boundary2D make_star(double cx, double cy, double r0, double amp, int lobes)
{
    if (!(r0 > 0.0) || !(amp >= 0.0) || !(amp < 1.0) || lobes < 1)
        throw ParameterError("star needs r0 > 0, 0 <= amp < 1 and at least one lobe");
    Boundary2D b;
    b.kind = Boundary2D::Kind::Curve;
    b.curve = "star";
    b.params = {{"cx", cx}, {"cy", cy}, {"r0", r0}, {"amp", amp}, {"lobes", double(lobes)}};
    b.gamma = [=](double t) {
        double th = 2.0 * kPi * t;
        double r = r0 * (1.0 + amp * std::cos(lobes * th));
        return Vec{cx + r * std::cos(th), cy + r * std::sin(th)};
    };
    b.dgamma = [=](double t) {
        double th = 2.0 * kPi * t;
        double r = r0 * (1.0 + amp * std::cos(lobes * th));
        double dr = -r0 * amp * lobes * std::sin(lobes * th);
        double w = 2.0 * kPi;
        return Vec{w * (dr * std::cos(th) - r * std::sin(th)), w * (dr * std::sin(th) + r * std::cos(th))};
    };
    return b;
}

Boundary2D boundary_from_json_text(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("boundary JSON does not parse: ") + e.what());
    }
    try {
        if (j.contains("polygon")) {
            std::vector<Vec> verts;
            for (const auto& p : j.at("polygon")) {
                if (!p.is_array() || p.size() != 2) throw InputError("polygon vertices must be [x, y] pairs");
                verts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            }
            return make_polygon(std::move(verts));
        }
        if (j.contains("curve")) {
            std::string name = j.at("curve").get<std::string>();
            nlohmann::json p = j.value("params", nlohmann::json::object());
            double cx = p.value("cx", 0.0), cy = p.value("cy", 0.0);
            if (name == "circle") return make_circle(cx, cy, p.value("r", 1.0));
            if (name == "ellipse")
                return make_ellipse(cx, cy, p.value("a", 1.0), p.value("b", 0.5), p.value("rotation", 0.0));
            if (name == "star")
                return make_star(cx, cy, p.value("r0", 1.0), p.value("amp", 0.3), p.value("lobes", 5));
            throw InputError("unknown curve '" + name + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed boundary JSON: ") + e.what());
    }
    throw InputError("boundary JSON needs a \"polygon\" or \"curve\" key");
}

std::vector<Vec> polyline(const Boundary2D& b, int samples)
{
    if (b.kind == Boundary2D::Kind::Polygon) return b.vertices;
    std::vector<Vec> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) pts.push_back(b.gamma(double(i) / samples));
    return pts;
}

Box bounding_box(const Boundary2D& b)
{
    auto pts = polyline(b, kDenseSamples);
    Box box{{pts[0][0], pts[0][1]}, {pts[0][0], pts[0][1]}};
    for (const auto& p : pts)
        for (int a = 0; a < 2; ++a) {
            box.lo[a] = std::min(box.lo[a], p[a]);
            box.hi[a] = std::max(box.hi[a], p[a]);
        }
    return box;
}

double signed_area(const Boundary2D& b)
{
    if (b.kind == Boundary2D::Kind::Curve) {
        if (b.curve == "circle") return kPi * b.params.at("r") * b.params.at("r");
        if (b.curve == "ellipse") return kPi * b.params.at("a") * b.params.at("b");
    }
    auto pts = polyline(b, kDenseSamples);
    double area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) area += cross2(pts[i], pts[(i + 1) % pts.size()]);
    return 0.5 * area;
}

bool contains_point(const Boundary2D& b, const Vec& x)
{
    if (b.kind == Boundary2D::Kind::Curve) {
        const auto& p = b.params;
        double dx = x[0] - p.at("cx"), dy = x[1] - p.at("cy");
        if (b.curve == "circle") return dx * dx + dy * dy <= p.at("r") * p.at("r");
        if (b.curve == "ellipse") {
            double c = std::cos(p.at("rotation")), s = std::sin(p.at("rotation"));
            double u = c * dx + s * dy, v = -s * dx + c * dy;
            double a = p.at("a"), bb = p.at("b");
            return (u * u) / (a * a) + (v * v) / (bb * bb) <= 1.0;
        }
        if (b.curve == "star") {
            double r = std::hypot(dx, dy);
            double th = std::atan2(dy, dx);
            return r <= p.at("r0") * (1.0 + p.at("amp") * std::cos(p.at("lobes") * th));
        }
    }
    auto pts = polyline(b, kDenseSamples);
    bool inside = false;
    const std::size_t n = pts.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec& pi = pts[i];
        const Vec& pj = pts[j];
        if ((pi[1] > x[1]) != (pj[1] > x[1])) {
            double xc = pj[0] + (x[1] - pj[1]) * (pi[0] - pj[0]) / (pi[1] - pj[1]);
            if (x[0] < xc) inside = !inside;
        }
    }
    return inside;
}

NearestPoint nearest_point(const Boundary2D& b, const Vec& x)
{
    NearestPoint best;
    best.dist = std::numeric_limits<double>::infinity();
    if (b.kind == Boundary2D::Kind::Polygon) {
        const auto& v = b.vertices;
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& p0 = v[i];
            const Vec& p1 = v[(i + 1) % n];
            Vec d = p1 - p0;
            double s = std::clamp(dot(x - p0, d) / dot(d, d), 0.0, 1.0);
            Vec q = p0 + s * d;
            double dist = distance(x, q);
            if (dist < best.dist) {
                best.dist = dist;
                best.point = q;
                best.t = double(i) + s;
                best.normal = outward_normal_of_tangent(d);
                best.at_vertex = (s <= 0.0 || s >= 1.0);
            }
        }
        return best;
    }
    int best_i = 0;
    for (int i = 0; i < kDenseSamples; ++i) {
        double d = distance(x, b.gamma(double(i) / kDenseSamples));
        if (d < best.dist) {
            best.dist = d;
            best_i = i;
        }
    }
    double h = 1.0 / kDenseSamples;
    double t = golden_min([&](double tt) { return distance(x, b.gamma(wrap01(tt))); }, best_i * h - h, best_i * h + h);
    best.t = wrap01(t);
    best.point = b.gamma(best.t);
    best.dist = distance(x, best.point);
    best.normal = outward_normal_of_tangent(b.dgamma(best.t));
    return best;
}

ConicSet conormal_bundle(const Boundary2D& b)
{
    if (b.kind == Boundary2D::Kind::Curve) {
        for (int i = 0; i < 64; ++i)
            if (norm(b.dgamma(i / 64.0)) <= 0.0) throw ParameterError("degenerate curve");
    }
    Predicate pred = [b](const Vec& x, const Vec& k, const Tolerance& tol) {
        NearestPoint np = nearest_point(b, x);
        if (np.dist > tol.position) return false;
        if (b.kind == Boundary2D::Kind::Polygon) {
            for (const auto& v : b.vertices)
                if (distance(x, v) <= tol.position) return false;
        }
        return angle_between(k, np.normal) <= tol.angle || angle_between(k, -np.normal) <= tol.angle;
    };
    FiberFn fib = [b](const Vec& x, const Tolerance& tol) {
        NearestPoint np = nearest_point(b, x);
        if (np.dist > tol.position) return std::vector<Vec>{};
        if (b.kind == Boundary2D::Kind::Polygon)
            for (const auto& v : b.vertices)
                if (distance(x, v) <= tol.position) return std::vector<Vec>{};
        return std::vector<Vec>{np.normal, -np.normal};
    };
    std::vector<Vec> base;
    if (b.kind == Boundary2D::Kind::Polygon) {
        const auto& v = b.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            Vec d = v[(i + 1) % v.size()] - v[i];
            for (int s = 1; s < 8; ++s) base.push_back(v[i] + (s / 8.0) * d);
        }
    } else {
        for (int i = 0; i < 256; ++i) base.push_back(b.gamma(i / 256.0));
    }
    return exact_set(2, "conormal(" + (b.kind == Boundary2D::Kind::Polygon ? std::string("polygon") : b.curve) + ")",
                     pred, fib, base);
}

static void require_inside_grid(const Boundary2D& b, const Grid& g)
{
    if (g.dim != 2) throw ParameterError("rasterisation needs a 2D grid");
    Box box = bounding_box(b);
    for (int a = 0; a < 2; ++a) {
        double lo = g.origin[a], hi = g.origin[a] + (g.n - 1) * g.spacing(a);
        if (box.lo[a] < lo || box.hi[a] > hi) throw ParameterError("boundary is clipped by the grid");
    }
}

SampledField rasterize_char(const Boundary2D& b, const Grid& g)
{
    require_inside_grid(b, g);
    SampledField f(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (contains_point(b, {g.coord(0, i), g.coord(1, j)})) f.at(i, j) = 1.0;
    f.support_hint = bounding_box(b);
    return f;
}

cplx char_fourier(const Boundary2D& b, const Vec& k)
{
    const cplx I(0.0, 1.0);
    if (b.kind == Boundary2D::Kind::Curve && (b.curve == "circle" || b.curve == "ellipse")) {
        const auto& p = b.params;
        double phase = k[0] * p.at("cx") + k[1] * p.at("cy");
        if (b.curve == "circle") {
            double r = p.at("r");
            return r * r * disk_spectrum(r * norm(k)) * std::exp(I * phase);
        }
        double c = std::cos(p.at("rotation")), s = std::sin(p.at("rotation"));
        double a = p.at("a"), bb = p.at("b");
        // Ellipse = centre + R diag(a, b) (unit disk); transform the frequency by the transpose.
        double q0 = a * (c * k[0] + s * k[1]);
        double q1 = bb * (-s * k[0] + c * k[1]);
        return a * bb * disk_spectrum(std::hypot(q0, q1)) * std::exp(I * phase);
    }
    auto pts = (b.kind == Boundary2D::Kind::Polygon) ? b.vertices : polyline(b, 2048);
    double k2 = k[0] * k[0] + k[1] * k[1];
    if (k2 == 0.0) {
        double area = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) area += cross2(pts[i], pts[(i + 1) % pts.size()]);
        return 0.5 * area;
    }
    cplx sum(0.0, 0.0);
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& p0 = pts[i];
        const Vec& p1 = pts[(i + 1) % n];
        double dx = p1[0] - p0[0], dy = p1[1] - p0[1];
        double mx = 0.5 * (p0[0] + p1[0]), my = 0.5 * (p0[1] + p1[1]);
        double z = 0.5 * (k[0] * dx + k[1] * dy);
        double sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
        sum += (k[0] * dy - k[1] * dx) * sinc * std::exp(I * (k[0] * mx + k[1] * my));
    }
    return -I * sum / k2;
}

SampledField rasterize_char_antialiased(const Boundary2D& b, const Grid& g)
{
    require_inside_grid(b, g);
    SampledField f = synthesize(g, [&](const Vec& k) { return char_fourier(b, k); }, true);
    for (auto& v : f.values) v = cplx(v.real(), 0.0);
    return f;
}

namespace {

// Projections nu . gamma(i / N) for i = 0..N+1.
std::vector<double> curve_projection(const Boundary2D& b, const Vec& nu)
{
    const int N = kDenseSamples;
    std::vector<double> proj(N + 2);
    for (int i = 0; i <= N + 1; ++i) proj[i] = dot(nu, b.gamma(wrap01(double(i) / N)));
    return proj;
}

LineHit curve_intersections(const Boundary2D& b, const Vec& nu, double a, double tangent_angle_tol,
                            const std::vector<double>& proj)
{
    LineHit hit;
    const int N = kDenseSamples;
    const double h = 1.0 / N;
    auto g = [&](double t) { return dot(nu, b.gamma(wrap01(t))) - a; };
    std::vector<double> gv(N + 2);
    for (int i = 0; i <= N + 1; ++i) gv[i] = proj[i] - a;
    std::vector<double> roots;
    auto add_root = [&](double t) {
        t = wrap01(t);
        for (double r : roots) {
            double d = std::abs(r - t);
            d = std::min(d, 1.0 - d);
            if (d < 2.0 * h) return;
        }
        roots.push_back(t);
    };
    double scale = 0.0;
    for (int i = 0; i < N; ++i) scale = std::max(scale, std::abs(gv[i] + a));
    const double zero_tol = 1e-10 * (1.0 + scale);
    for (int i = 0; i < N; ++i) {
        double g0 = gv[i], g1 = gv[i + 1];
        if (g0 == 0.0) {
            add_root(i * h);
        } else if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
            add_root(bisect_root(g, i * h, (i + 1) * h));
        }
    }
    for (int i = 1; i <= N; ++i) {
        double gm = gv[i - 1], g0 = gv[i], gp = gv[i + 1];
        bool is_max = g0 >= gm && g0 >= gp && g0 <= 0.0;
        bool is_min = g0 <= gm && g0 <= gp && g0 >= 0.0;
        if (!is_max && !is_min) continue;
        double t;
        if (is_max)
            t = golden_min([&](double tt) { return -g(tt); }, (i - 1) * h, (i + 1) * h);
        else
            t = golden_min(g, (i - 1) * h, (i + 1) * h);
        if (std::abs(g(t)) <= zero_tol) add_root(t);
    }
    hit.count = int(roots.size());
    for (double t : roots) {
        Vec nrm = outward_normal_of_tangent(b.dgamma(t));
        double ang = std::min(angle_between(nrm, nu), angle_between(nrm, -nu));
        if (ang <= std::max(tangent_angle_tol, 1e-7)) hit.tangent = true;
    }
    return hit;
}

}  // namespace

LineHit line_intersections(const Boundary2D& b, const Vec& nu_in, double a, double tangent_angle_tol)
{
    Vec nu = normalized(nu_in);
    LineHit hit;
    if (b.kind == Boundary2D::Kind::Polygon) {
        const auto& v = b.vertices;
        const std::size_t n = v.size();
        const double eps = 1e-12 * (1.0 + std::abs(a));
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = dot(nu, v[i]) - a;
            if (std::abs(g[i]) <= eps) g[i] = 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double g0 = g[i], g1 = g[(i + 1) % n];
            if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) ++hit.count;
        }
        // Vertices on the line: each maximal run of zero vertices is one contact.
        for (std::size_t i = 0; i < n; ++i) {
            if (g[i] != 0.0) continue;
            std::size_t prev = (i + n - 1) % n;
            if (g[prev] == 0.0) continue;
            std::size_t j = i;
            while (g[(j + 1) % n] == 0.0 && (j + 1) % n != i) j = (j + 1) % n;
            ++hit.count;
            hit.tangent = true;
        }
        return hit;
    }
    return curve_intersections(b, nu, a, tangent_angle_tol, curve_projection(b, nu));
}

IntersectionSignature intersection_signature(const Boundary2D& b, const DirectionSet& dirs,
                                             const std::vector<double>& offsets)
{
    IntersectionSignature sig;
    sig.directions = dirs.dirs;
    sig.offsets = offsets;
    std::sort(sig.offsets.begin(), sig.offsets.end());
    for (const auto& nu : sig.directions) {
        std::vector<int> counts;
        std::vector<char> tang;
        std::vector<double> proj;
        if (b.kind == Boundary2D::Kind::Curve) proj = curve_projection(b, normalized(nu));
        for (double a : sig.offsets) {
            LineHit h = b.kind == Boundary2D::Kind::Curve ? curve_intersections(b, normalized(nu), a, 1e-6, proj)
                                                          : line_intersections(b, nu, a);
            counts.push_back(h.count);
            tang.push_back(h.tangent ? 1 : 0);
        }
        std::vector<double> jumps;
        for (std::size_t j = 1; j < counts.size(); ++j) {
            if (counts[j] == counts[j - 1]) continue;
            double at;
            if (tang[j])
                at = sig.offsets[j];
            else if (tang[j - 1])
                at = sig.offsets[j - 1];
            else
                at = 0.5 * (sig.offsets[j] + sig.offsets[j - 1]);
            if (jumps.empty() || jumps.back() != at) jumps.push_back(at);
        }
        sig.counts.push_back(std::move(counts));
        sig.tangent.push_back(std::move(tang));
        sig.jump_offsets.push_back(std::move(jumps));
    }
    return sig;
}

ConicSet wf_from_signature(const IntersectionSignature& sig, const Boundary2D& b)
{
    double step = 0.0;
    for (std::size_t j = 1; j < sig.offsets.size(); ++j) step = std::max(step, sig.offsets[j] - sig.offsets[j - 1]);
    const double match_tol = 1.01 * step;
    std::vector<WFSample> out;
    auto emit = [&](const Vec& x, const Vec& k, bool flagged) {
        WFSample s;
        s.x = x;
        s.k = k;
        s.flagged = flagged;
        out.push_back(s);
        s.k = -k;
        out.push_back(s);
    };
    for (std::size_t d = 0; d < sig.directions.size(); ++d) {
        const Vec nu = normalized(sig.directions[d]);
        if (sig.jump_offsets[d].empty()) continue;
        struct Extremum {
            Vec x;
            double h;
            Vec normal;
            bool vertex;
        };
        std::vector<Extremum> ext;
        if (b.kind == Boundary2D::Kind::Polygon) {
            const auto& v = b.vertices;
            const std::size_t n = v.size();
            double half_step = sig.directions.size() > 1 ? kPi / sig.directions.size() : 1e-6;
            for (std::size_t i = 0; i < n; ++i) {
                Vec e = v[(i + 1) % n] - v[i];
                Vec nrm = outward_normal_of_tangent(e);
                double ang = std::min(angle_between(nrm, nu), angle_between(nrm, -nu));
                if (ang <= 0.5 * half_step) {
                    for (int s = 1; s < 6; ++s) {
                        Vec x = v[i] + (s / 6.0) * e;
                        ext.push_back({x, dot(nu, x), nrm, false});
                    }
                }
                ext.push_back({v[i], dot(nu, v[i]), nu, true});
            }
        } else {
            const int N = kDenseSamples;
            const double h = 1.0 / N;
            auto dh = [&](double t) { return dot(nu, b.dgamma(wrap01(t))); };
            std::vector<double> dv(N + 1);
            for (int i = 0; i <= N; ++i) dv[i] = dh(i * h);
            for (int i = 0; i < N; ++i) {
                if (dv[i] == 0.0 || (dv[i] < 0.0) != (dv[i + 1] < 0.0)) {
                    double t = dv[i] == 0.0 ? i * h : bisect_root(dh, i * h, (i + 1) * h);
                    Vec x = b.gamma(wrap01(t));
                    ext.push_back({x, dot(nu, x), outward_normal_of_tangent(b.dgamma(wrap01(t))), false});
                }
            }
        }
        for (double a : sig.jump_offsets[d]) {
            // Prefer smooth tangency points over polygon vertices at equal distance.
            const Extremum* best = nullptr;
            double best_d = std::numeric_limits<double>::infinity();
            for (const auto& e : ext) {
                double dd = std::abs(e.h - a) + (e.vertex ? 1e-9 : 0.0);
                if (dd < best_d) {
                    best_d = dd;
                    best = &e;
                }
            }
            if (!best) continue;
            bool ok = std::abs(best->h - a) <= match_tol;
            if (!best->vertex && ok) {
                // All smooth tangency points at this offset.
                for (const auto& e : ext)
                    if (!e.vertex && std::abs(e.h - best->h) <= 1e-9) emit(e.x, normalized(e.normal), false);
            } else {
                emit(best->x, nu, true);
            }
        }
    }
    return sampled_set(2, std::move(out), "signature WF");
}

}  // namespace wfkit
