#include "wfkit/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wfkit/spectral.hpp"

namespace wfkit {

namespace {

CatalogDistribution base(CatalogKind kind, std::string id, int dim)
{
    CatalogDistribution d;
    d.kind = kind;
    d.id = std::move(id);
    d.dim = dim;
    return d;
}

std::vector<Vec> ring_directions(int dim)
{
    if (dim == 1) return {{1.0}, {-1.0}};
    return uniform_directions(2, 16).dirs;
}

std::vector<Vec> line_points(int axis_fixed, double value)
{
    std::vector<Vec> pts;
    for (int i = -4; i <= 4; ++i) {
        Vec p(2, 0.0);
        p[axis_fixed] = value;
        p[1 - axis_fixed] = 0.5 * i;
        pts.push_back(p);
    }
    return pts;
}

double box_overlap(double lo1, double hi1, double lo2, double hi2)
{
    return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

// Cell average of the box family chi_eps centred at c, for the node at x.
double box_cell_value(double x, double c, double eps, double h)
{
    return box_overlap(x - 0.5 * h, x + 0.5 * h, c - 0.5 * eps, c + 0.5 * eps) / (eps * h);
}

double theta(double k) { return k > 0.0 ? 1.0 : (k < 0.0 ? 0.0 : 0.5); }

double disk_transform(double r, double kr)
{
    double z = r * kr;
    if (z < 1e-8) return kPi * r * r;
    return 2.0 * kPi * r * std::cyl_bessel_j(1.0, z) / kr;
}

// Splits a 4-vector into time and space parts.
double space_norm(const Vec& x) { return std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }

double light_cone_distance(const Vec& x) { return std::abs(std::abs(x[0]) - space_norm(x)) / std::sqrt(2.0); }

// Forward light-cone covector (|k|, k) closest in angle to k, or empty when the spatial part vanishes.
bool positive_lightlike(const Vec& k, const Tolerance& tol)
{
    double sk = space_norm(k);
    if (sk == 0.0) return false;
    Vec cone{sk, k[1], k[2], k[3]};
    return angle_between(k, cone) <= tol.angle;
}

std::vector<Vec> s0_fiber()
{
    std::vector<Vec> out;
    for (int a = 1; a < 4; ++a)
        for (int s : {+1, -1}) {
            Vec k{1.0, 0.0, 0.0, 0.0};
            k[a] = s;
            out.push_back(normalized(k));
        }
    return out;
}

std::vector<Vec> all_fiber_4d()
{
    std::vector<Vec> out;
    for (int a = 0; a < 4; ++a)
        for (int s : {+1, -1}) {
            Vec k(4, 0.0);
            k[a] = s;
            out.push_back(k);
        }
    return out;
}

std::vector<Vec> cone_base_points()
{
    std::vector<Vec> pts{{0.0, 0.0, 0.0, 0.0}};
    for (int s : {+1, -1})
        for (int a = 1; a < 4; ++a) {
            Vec x{double(s), 0.0, 0.0, 0.0};
            x[a] = 1.0;
            pts.push_back(x);
        }
    return pts;
}

// Expected covector direction on the light cone away from the origin.
Vec wightman_direction(const Vec& x)
{
    double t = x[0];
    double sg = t >= 0.0 ? 1.0 : -1.0;
    double r = space_norm(x);
    Vec k{r, -sg * x[1], -sg * x[2], -sg * x[3]};
    return normalized(k);
}

Vec feynman_direction(const Vec& x)
{
    double r = space_norm(x);
    double sg = x[0] >= 0.0 ? 1.0 : -1.0;
    return normalized(Vec{sg * r, -x[1], -x[2], -x[3]});
}

ConicSet light_cone_set(const CatalogDistribution& d, bool feynman)
{
    Predicate pred = [feynman](const Vec& x, const Vec& k, const Tolerance& tol) {
        if (norm(x) <= tol.position) {
            if (feynman) return true;
            return positive_lightlike(k, tol);
        }
        if (light_cone_distance(x) > tol.position) return false;
        if (space_norm(x) == 0.0) return false;
        Vec e = feynman ? feynman_direction(x) : wightman_direction(x);
        return angle_between(k, e) <= tol.angle;
    };
    FiberFn fib = [feynman](const Vec& x, const Tolerance& tol) {
        if (norm(x) <= tol.position) return feynman ? all_fiber_4d() : s0_fiber();
        if (light_cone_distance(x) > tol.position || space_norm(x) == 0.0) return std::vector<Vec>{};
        return std::vector<Vec>{feynman ? feynman_direction(x) : wightman_direction(x)};
    };
    return exact_set(4, "WF(" + d.id + ")", pred, fib, cone_base_points());
}

double parse_param(const std::string& id, const std::string& key, double fallback)
{
    auto pos = id.find(key + "=");
    if (pos == std::string::npos) return fallback;
    std::string rest = id.substr(pos + key.size() + 1);
    auto end = rest.find_first_of(",;");
    rest = rest.substr(0, end);
    std::istringstream in(rest);
    in.imbue(std::locale::classic());
    double v;
    if (!(in >> v) || !in.eof()) throw InputError("cannot parse value of '" + key + "' in catalog id '" + id + "'");
    return v;
}

double resolve_epsilon(const CatalogDistribution& d, const Grid& g, double epsilon)
{
    double eps = epsilon > 0.0 ? epsilon : (d.epsilon > 0.0 ? d.epsilon : 4.0 * g.spacing(0));
    if (eps < g.spacing(0) * (1.0 - 1e-12))
        throw ParameterError("regularisation epsilon is below the grid spacing");
    return eps;
}

void require_dim(const CatalogDistribution& d, const Grid& g)
{
    if (d.oracle_only()) throw ParameterError("'" + d.id + "' is oracle-only and has no sampler");
    if (d.dim != g.dim) throw ParameterError("'" + d.id + "' needs a " + std::to_string(d.dim) + "D grid");
}

}  // namespace

bool CatalogDistribution::oracle_only() const
{
    return kind == CatalogKind::WightmanDeltaPlus || kind == CatalogKind::FeynmanDeltaF ||
           kind == CatalogKind::MasslessFeynman;
}

CatalogDistribution make_delta(Vec x0)
{
    if (x0.size() != 1 && x0.size() != 2) throw ParameterError("delta location must be 1D or 2D");
    auto d = base(CatalogKind::DeltaAt, x0.size() == 1 ? "delta" : "delta2", int(x0.size()));
    d.x0 = std::move(x0);
    return d;
}

CatalogDistribution make_heaviside() { return base(CatalogKind::Heaviside1D, "heaviside", 1); }

CatalogDistribution make_boundary_value(int sign)
{
    if (sign != 1 && sign != -1) throw ParameterError("boundary value sign must be +1 or -1");
    auto d = base(CatalogKind::BoundaryValue, sign > 0 ? "bv+" : "bv-", 1);
    d.sign = sign;
    return d;
}

CatalogDistribution make_shifted_sum(double a)
{
    if (a == 0.0 || !std::isfinite(a)) throw ParameterError("shifted sum needs a != 0");
    auto d = base(CatalogKind::ShiftedSum, "sum:a=" + std::to_string(a), 1);
    d.a = a;
    return d;
}

CatalogDistribution make_tensor_delta(int axis)
{
    if (axis != 1 && axis != 2) throw ParameterError("tensor delta axis must be 1 or 2");
    return base(axis == 1 ? CatalogKind::TensorDelta1 : CatalogKind::TensorDelta2,
                axis == 1 ? "tensor-delta-1" : "tensor-delta-2", 2);
}

CatalogDistribution make_half_plane() { return base(CatalogKind::CharHalfPlane, "halfplane", 2); }

CatalogDistribution make_disk(double radius)
{
    if (!(radius > 0.0)) throw ParameterError("disk radius must be positive");
    auto d = base(CatalogKind::CharDisk, "disk:r=" + std::to_string(radius), 2);
    d.radius = radius;
    return d;
}

CatalogDistribution make_domain(Boundary2D b)
{
    auto d = base(CatalogKind::CharDomain, "domain", 2);
    d.boundary = std::make_shared<Boundary2D>(std::move(b));
    return d;
}

CatalogDistribution make_wightman(double mass)
{
    if (!(mass >= 0.0)) throw ParameterError("mass must be non-negative");
    auto d = base(CatalogKind::WightmanDeltaPlus, "wightman:m=" + std::to_string(mass), 4);
    d.mass = mass;
    return d;
}

CatalogDistribution make_feynman(double mass)
{
    if (!(mass >= 0.0)) throw ParameterError("mass must be non-negative");
    auto d = base(CatalogKind::FeynmanDeltaF, "feynman:m=" + std::to_string(mass), 4);
    d.mass = mass;
    return d;
}

CatalogDistribution make_massless_feynman() { return base(CatalogKind::MasslessFeynman, "massless-feynman", 4); }

CatalogDistribution parse_catalog_id(const std::string& raw)
{
    std::string id = raw;
    CatalogDistribution d;
    if (id == "delta") d = make_delta({0.0});
    else if (id == "delta2") d = make_delta({0.0, 0.0});
    else if (id == "heaviside" || id == "theta") d = make_heaviside();
    else if (id == "bv+") d = make_boundary_value(+1);
    else if (id == "bv-") d = make_boundary_value(-1);
    else if (id.rfind("sum", 0) == 0) d = make_shifted_sum(parse_param(id, "a", 1.0));
    else if (id.rfind("disk", 0) == 0) d = make_disk(parse_param(id, "r", 1.0));
    else if (id == "halfplane") d = make_half_plane();
    else if (id == "tensor-delta-1") d = make_tensor_delta(1);
    else if (id == "tensor-delta-2") d = make_tensor_delta(2);
    else if (id.rfind("wightman", 0) == 0) d = make_wightman(parse_param(id, "m", 1.0));
    else if (id == "massless-feynman") d = make_massless_feynman();
    else if (id.rfind("feynman", 0) == 0) d = make_feynman(parse_param(id, "m", 1.0));
    else throw InputError("unknown catalog id '" + id + "'");
    d.id = id;
    return d;
}

std::vector<CatalogEntry> catalog_listing()
{
    return {
        {"delta", "Dirac delta at 0 on R", "{(0;k), k!=0}"},
        {"delta2", "Dirac delta at 0 on R^2", "{(0;k), k!=0}"},
        {"heaviside", "Heaviside step theta(x)", "{(0;k), k!=0}"},
        {"bv+", "1/(x+i0)", "{(0;k), k<0}"},
        {"bv-", "1/(x-i0)", "{(0;k), k>0}"},
        {"sum:a=1.0", "1/(x+i0) + 1/(x+a-i0)", "{(0;k), k<0} u {(-a;k), k>0}"},
        {"disk:r=1.0", "indicator of the disk |x| <= r", "{(x; lambda x), |x|=r, lambda!=0}"},
        {"halfplane", "indicator of x2 >= 0", "{(x1,0; 0,lambda), lambda!=0}"},
        {"tensor-delta-1", "delta(x1) on R^2", "{(0,x2; lambda,0), lambda!=0}"},
        {"tensor-delta-2", "delta(x2) on R^2", "{(x1,0; 0,mu), mu!=0}"},
        {"wightman:m=1.0", "Wightman two-point function on R^4 (oracle only)", "S0 u S+ u S-"},
        {"feynman:m=1.0", "Feynman propagator on R^4 (oracle only)", "D* u C_F"},
        {"massless-feynman", "massless Feynman propagator on R^4 (oracle only)", "D* u C_F"},
    };
}

SampledField sample(const CatalogDistribution& d, const Grid& g, double epsilon)
{
    require_dim(d, g);
    SampledField f(g);
    const double h = g.spacing(0);
    switch (d.kind) {
    case CatalogKind::DeltaAt: {
        const double eps = resolve_epsilon(d, g, epsilon);
        if (g.dim == 1) {
            for (int i = 0; i < g.n; ++i) f.at(i) = box_cell_value(g.coord(0, i), d.x0[0], eps, h);
            f.support_hint = Box{{d.x0[0] - 0.5 * eps - h}, {d.x0[0] + 0.5 * eps + h}};
        } else {
            const double h1 = g.spacing(1);
            for (int i = 0; i < g.n; ++i) {
                double wx = box_cell_value(g.coord(0, i), d.x0[0], eps, h);
                if (wx == 0.0) continue;
                for (int j = 0; j < g.n; ++j) f.at(i, j) = wx * box_cell_value(g.coord(1, j), d.x0[1], eps, h1);
            }
            f.support_hint = Box{{d.x0[0] - 0.5 * eps - h, d.x0[1] - 0.5 * eps - h1},
                                 {d.x0[0] + 0.5 * eps + h, d.x0[1] + 0.5 * eps + h1}};
        }
        break;
    }
    case CatalogKind::Heaviside1D:
        for (int i = 0; i < g.n; ++i) f.at(i) = g.coord(0, i) >= 0.0 ? 1.0 : 0.0;
        break;
    case CatalogKind::BoundaryValue: {
        const double eps = resolve_epsilon(d, g, epsilon);
        for (int i = 0; i < g.n; ++i) f.at(i) = 1.0 / cplx(g.coord(0, i), d.sign * eps);
        break;
    }
    case CatalogKind::ShiftedSum: {
        const double eps = resolve_epsilon(d, g, epsilon);
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(0, i);
            f.at(i) = 1.0 / cplx(x, eps) + 1.0 / cplx(x + d.a, -eps);
        }
        break;
    }
    case CatalogKind::TensorDelta1:
    case CatalogKind::TensorDelta2: {
        const double eps = resolve_epsilon(d, g, epsilon);
        const int axis = d.kind == CatalogKind::TensorDelta1 ? 0 : 1;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                int idx = axis == 0 ? i : j;
                f.at(i, j) = box_cell_value(g.coord(axis, idx), 0.0, eps, g.spacing(axis));
            }
        break;
    }
    case CatalogKind::CharHalfPlane:
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) f.at(i, j) = g.coord(1, j) >= 0.0 ? 1.0 : 0.0;
        break;
    case CatalogKind::CharDisk: {
        const double r2 = d.radius * d.radius;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                double x = g.coord(0, i), y = g.coord(1, j);
                if (x * x + y * y <= r2) f.at(i, j) = 1.0;
            }
        f.support_hint = Box{{-d.radius, -d.radius}, {d.radius, d.radius}};
        break;
    }
    case CatalogKind::CharDomain:
        return rasterize_char(*d.boundary, g);
    default:
        throw ParameterError("'" + d.id + "' has no sampler");
    }
    return f;
}

SampledField sample_antialiased(const CatalogDistribution& d, const Grid& g, double epsilon)
{
    require_dim(d, g);
    if (d.kind == CatalogKind::CharDomain) return rasterize_char_antialiased(*d.boundary, g);
    if (d.kind != CatalogKind::CharDisk) return sample(d, g, epsilon);
    const double r = d.radius;
    SampledField f = synthesize(g, [r](const Vec& k) { return cplx(disk_transform(r, norm(k)), 0.0); }, true);
    for (auto& v : f.values) v = cplx(v.real(), 0.0);
    return f;
}

std::optional<std::function<cplx(const Vec&)>> exact_fourier(const CatalogDistribution& d)
{
    const cplx I(0.0, 1.0);
    switch (d.kind) {
    case CatalogKind::DeltaAt: {
        Vec x0 = d.x0;
        return [x0, I](const Vec& k) { return std::exp(I * dot(k, x0)); };
    }
    case CatalogKind::BoundaryValue:
        if (d.sign > 0) return [I](const Vec& k) { return -2.0 * I * kPi * theta(-k[0]); };
        return [I](const Vec& k) { return 2.0 * I * kPi * theta(k[0]); };
    case CatalogKind::ShiftedSum: {
        double a = d.a;
        return [a, I](const Vec& k) {
            return -2.0 * I * kPi * theta(-k[0]) + 2.0 * I * kPi * std::exp(-I * k[0] * a) * theta(k[0]);
        };
    }
    case CatalogKind::CharDisk: {
        double r = d.radius;
        return [r](const Vec& k) { return cplx(disk_transform(r, norm(k)), 0.0); };
    }
    default:
        return std::nullopt;
    }
}

ConicSet exact_wf(const CatalogDistribution& d)
{
    switch (d.kind) {
    case CatalogKind::DeltaAt: {
        Vec x0 = d.x0;
        int dim = d.dim;
        Predicate pred = [x0](const Vec& x, const Vec&, const Tolerance& tol) { return distance(x, x0) <= tol.position; };
        FiberFn fib = [x0, dim](const Vec& x, const Tolerance& tol) {
            return distance(x, x0) <= tol.position ? ring_directions(dim) : std::vector<Vec>{};
        };
        return exact_set(dim, "WF(" + d.id + ")", pred, fib, {x0});
    }
    case CatalogKind::Heaviside1D: {
        Predicate pred = [](const Vec& x, const Vec&, const Tolerance& tol) { return std::abs(x[0]) <= tol.position; };
        FiberFn fib = [](const Vec& x, const Tolerance& tol) {
            return std::abs(x[0]) <= tol.position ? ring_directions(1) : std::vector<Vec>{};
        };
        return exact_set(1, "WF(heaviside)", pred, fib, {{0.0}});
    }
    case CatalogKind::BoundaryValue: {
        // 1/(x+i0) is singular for k<0, 1/(x-i0) for k>0.
        const double s = d.sign > 0 ? -1.0 : 1.0;
        Predicate pred = [s](const Vec& x, const Vec& k, const Tolerance& tol) {
            return std::abs(x[0]) <= tol.position && s * k[0] > 0.0;
        };
        FiberFn fib = [s](const Vec& x, const Tolerance& tol) {
            return std::abs(x[0]) <= tol.position ? std::vector<Vec>{{s}} : std::vector<Vec>{};
        };
        return exact_set(1, "WF(" + d.id + ")", pred, fib, {{0.0}});
    }
    case CatalogKind::ShiftedSum: {
        double a = d.a;
        Predicate pred = [a](const Vec& x, const Vec& k, const Tolerance& tol) {
            if (std::abs(x[0]) <= tol.position && k[0] < 0.0) return true;
            return std::abs(x[0] + a) <= tol.position && k[0] > 0.0;
        };
        FiberFn fib = [a](const Vec& x, const Tolerance& tol) {
            std::vector<Vec> out;
            if (std::abs(x[0]) <= tol.position) out.push_back({-1.0});
            if (std::abs(x[0] + a) <= tol.position) out.push_back({1.0});
            return out;
        };
        return exact_set(1, "WF(" + d.id + ")", pred, fib, {{0.0}, {-a}});
    }
    case CatalogKind::TensorDelta1:
    case CatalogKind::TensorDelta2:
    case CatalogKind::CharHalfPlane: {
        // Singular along a coordinate line, conormal direction along the other axis.
        const int fixed = d.kind == CatalogKind::TensorDelta1 ? 0 : 1;
        Vec normal(2, 0.0);
        normal[fixed] = 1.0;
        Predicate pred = [fixed, normal](const Vec& x, const Vec& k, const Tolerance& tol) {
            if (std::abs(x[fixed]) > tol.position) return false;
            return angle_between(k, normal) <= tol.angle || angle_between(k, -normal) <= tol.angle;
        };
        FiberFn fib = [fixed, normal](const Vec& x, const Tolerance& tol) {
            if (std::abs(x[fixed]) > tol.position) return std::vector<Vec>{};
            return std::vector<Vec>{normal, -normal};
        };
        return exact_set(2, "WF(" + d.id + ")", pred, fib, line_points(fixed, 0.0));
    }
    case CatalogKind::CharDisk: {
        ConicSet s = conormal_bundle(make_circle(0.0, 0.0, d.radius));
        s.tag = "WF(" + d.id + ")";
        return s;
    }
    case CatalogKind::CharDomain: {
        ConicSet s = conormal_bundle(*d.boundary);
        s.tag = "WF(" + d.id + ")";
        return s;
    }
    case CatalogKind::WightmanDeltaPlus:
        return light_cone_set(d, false);
    case CatalogKind::FeynmanDeltaF:
    case CatalogKind::MasslessFeynman:
        return light_cone_set(d, true);
    }
    return empty_set(d.dim);
}

SupportSet support_of(const CatalogDistribution& d)
{
    constexpr double slack = 1e-9;
    switch (d.kind) {
    case CatalogKind::DeltaAt: {
        Vec x0 = d.x0;
        return support_predicate([x0](const Vec& x) { return distance(x, x0) <= slack; }, {x0});
    }
    case CatalogKind::Heaviside1D:
        return support_predicate([](const Vec& x) { return x[0] >= -slack; }, {{0.0}, {1.0}});
    case CatalogKind::TensorDelta1:
        return support_predicate([](const Vec& x) { return std::abs(x[0]) <= slack; }, line_points(0, 0.0));
    case CatalogKind::TensorDelta2:
        return support_predicate([](const Vec& x) { return std::abs(x[1]) <= slack; }, line_points(1, 0.0));
    case CatalogKind::CharHalfPlane:
        return support_predicate([](const Vec& x) { return x[1] >= -slack; }, line_points(1, 0.0));
    case CatalogKind::CharDisk: {
        double r = d.radius;
        return support_predicate([r](const Vec& x) { return norm(x) <= r + slack; }, {{0.0, 0.0}});
    }
    case CatalogKind::CharDomain: {
        auto b = d.boundary;
        return support_predicate([b](const Vec& x) { return contains_point(*b, x) || nearest_point(*b, x).dist <= slack; });
    }
    default:
        return support_everywhere();
    }
}

double singular_support_distance(const CatalogDistribution& d, const Vec& x)
{
    switch (d.kind) {
    case CatalogKind::DeltaAt: return distance(x, d.x0);
    case CatalogKind::Heaviside1D:
    case CatalogKind::BoundaryValue: return std::abs(x[0]);
    case CatalogKind::ShiftedSum: return std::min(std::abs(x[0]), std::abs(x[0] + d.a));
    case CatalogKind::TensorDelta1: return std::abs(x[0]);
    case CatalogKind::TensorDelta2:
    case CatalogKind::CharHalfPlane: return std::abs(x[1]);
    case CatalogKind::CharDisk: return std::abs(norm(x) - d.radius);
    case CatalogKind::CharDomain: return nearest_point(*d.boundary, x).dist;
    case CatalogKind::WightmanDeltaPlus:
    case CatalogKind::FeynmanDeltaF:
    case CatalogKind::MasslessFeynman: return light_cone_distance(x);
    }
    return 0.0;
}

double heaviside_ft_bound_constant(const Window& w)
{
    w.validate();
    if (w.center.size() != 1) throw ParameterError("the Heaviside bound constant needs a 1D window");
    const int n = 4096;
    const double c = w.center[0];
    const double lo = c - w.r2, hi = c + w.r2;
    const double h = (hi - lo) / n;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = eval_window(w, {lo + i * h});
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) l1 += 0.5 * h * (std::abs(f[i]) + std::abs(f[i + 1]));
    // ||f'||_1 by the trapezoid rule on central differences of the samples.
    double dl1 = 0.0;
    std::vector<double> df(n + 1, 0.0);
    for (int i = 1; i < n; ++i) df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    for (int i = 0; i < n; ++i) dl1 += 0.5 * h * (std::abs(df[i]) + std::abs(df[i + 1]));
    return dl1 + l1 + std::abs(eval_window(w, {0.0}));
}

}  // namespace wfkit
