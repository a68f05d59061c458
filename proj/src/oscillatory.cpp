#include "wfkit/oscillatory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>
#include <random>

#include "wfkit/catalog.hpp"
#include "wfkit/parallel.hpp"

namespace wfkit {

namespace {

constexpr double kCriticalTol = 1e-8;

using Tri = std::array<Vec, 3>;

Vec midpoint_on_sphere(const Vec& a, const Vec& b) { return normalized(a + b); }

std::vector<Tri> icosahedron()
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                          {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = normalized(p);
    const int f[20][3] = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                          {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                          {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    std::vector<Tri> tris;
    for (const auto& face : f) tris.push_back({v[face[0]], v[face[1]], v[face[2]]});
    return tris;
}

double poly2(const std::array<double, 6>& c, const Vec& x)
{
    return c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * x[0] * x[0] + c[4] * x[0] * x[1] + c[5] * x[1] * x[1];
}

Vec poly2_grad(const std::array<double, 6>& c, const Vec& x)
{
    return {c[1] + 2.0 * c[3] * x[0] + c[4] * x[1], c[2] + c[4] * x[0] + 2.0 * c[5] * x[1]};
}

// Orthonormal basis of the tangent space of the unit sphere at xi.
Eigen::MatrixXd tangent_basis(const Vec& xi)
{
    const int s = int(xi.size());
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(xi.data(), s);
    Eigen::MatrixXd m(s, s);
    m.col(0) = v;
    // Complete with the coordinate axes except the one most aligned with xi.
    int skip = 0;
    v.cwiseAbs().maxCoeff(&skip);
    int col = 1;
    for (int a = 0; a < s && col < s; ++a) {
        if (a == skip) continue;
        m.col(col++) = Eigen::VectorXd::Unit(s, a);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(s - 1);
}

Vec residual(const PhaseFunction& p, const Vec& x, const Vec& xi) { return p.dxi_phi(x, xi); }

bool refine(const PhaseFunction& p, const Vec& x, Vec& xi)
{
    const int s = p.s;
    for (int iter = 0; iter < 60; ++iter) {
        Vec r = residual(p, x, xi);
        if (norm(r) < 0.1 * kCriticalTol) return true;
        Eigen::MatrixXd B = tangent_basis(xi);
        Eigen::MatrixXd J(s, s - 1);
        const double step = 1e-6;
        for (int j = 0; j < s - 1; ++j) {
            Vec plus = xi, minus = xi;
            for (int a = 0; a < s; ++a) {
                plus[a] += step * B(a, j);
                minus[a] -= step * B(a, j);
            }
            Vec rp = residual(p, x, normalized(plus));
            Vec rm = residual(p, x, normalized(minus));
            for (int a = 0; a < s; ++a) J(a, j) = (rp[a] - rm[a]) / (2.0 * step);
        }
        Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), s);
        Eigen::VectorXd delta = J.completeOrthogonalDecomposition().solve(-rv);
        // Damped step: halve until the residual decreases.
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k) {
            Vec trial = xi;
            Eigen::VectorXd d = B * (lambda * delta);
            for (int a = 0; a < s; ++a) trial[a] += d(a);
            trial = normalized(trial);
            if (norm(residual(p, x, trial)) < norm(r)) {
                xi = trial;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    return norm(residual(p, x, xi)) < kCriticalTol;
}

void push_unique(std::vector<Vec>& out, const Vec& d)
{
    for (const auto& e : out)
        if (angle_between(e, d) <= 1e-6) return;
    out.push_back(d);
}

Vec random_unit(std::mt19937& rng, int dim)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(dim);
    do {
        for (auto& c : v) c = g(rng);
    } while (norm(v) < 1e-6);
    return normalized(v);
}

}  // namespace

PhaseFunction circle_phase()
{
    PhaseFunction p = linear_phase({{-1.0, 0.0, 0.0, 1.0, 0.0, 1.0}});
    p.name = "circle";
    return p;
}

PhaseFunction wightman_phase()
{
    PhaseFunction p;
    p.name = "wightman";
    p.n = 4;
    p.s = 3;
    p.phi = [](const Vec& x, const Vec& xi) {
        return -x[0] * norm(xi) - (x[1] * xi[0] + x[2] * xi[1] + x[3] * xi[2]);
    };
    p.dx_phi = [](const Vec&, const Vec& xi) { return Vec{-norm(xi), -xi[0], -xi[1], -xi[2]}; };
    p.dxi_phi = [](const Vec& x, const Vec& xi) {
        double r = norm(xi);
        Vec g(3);
        for (int j = 0; j < 3; ++j) g[j] = -x[0] * xi[j] / r - x[j + 1];
        return g;
    };
    return p;
}

PhaseFunction linear_phase(const std::vector<std::array<double, 6>>& coefficients)
{
    if (coefficients.empty()) throw ParameterError("linear phase needs at least one coefficient row");
    PhaseFunction p;
    p.name = "linear";
    p.n = 2;
    p.s = int(coefficients.size());
    auto c = coefficients;
    p.phi = [c](const Vec& x, const Vec& xi) {
        double v = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) v += poly2(c[i], x) * xi[i];
        return v;
    };
    p.dx_phi = [c](const Vec& x, const Vec& xi) {
        Vec g(2, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) g = g + xi[i] * poly2_grad(c[i], x);
        return g;
    };
    p.dxi_phi = [c](const Vec& x, const Vec&) {
        Vec g;
        for (const auto& row : c) g.push_back(poly2(row, x));
        return g;
    };
    return p;
}

PhaseFunction phase_from_id(const std::string& id)
{
    if (id == "circle") return circle_phase();
    if (id == "wightman") return wightman_phase();
    if (id.rfind("linear:", 0) == 0) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(id.substr(7));
        } catch (const std::exception& e) {
            throw InputError(std::string("cannot parse linear phase coefficients: ") + e.what());
        }
        std::vector<std::array<double, 6>> rows;
        auto read_row = [&](const nlohmann::json& r) {
            if (!r.is_array() || r.empty() || r.size() > 6) throw InputError("each phase polynomial needs 1 to 6 coefficients");
            std::array<double, 6> row{};
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (!r[i].is_number()) throw InputError("phase coefficients must be numbers");
                row[i] = r[i].get<double>();
            }
            rows.push_back(row);
        };
        if (!j.is_array() || j.empty()) throw InputError("linear phase expects a coefficient list");
        if (j[0].is_array()) {
            for (const auto& r : j) read_row(r);
        } else {
            read_row(j);
        }
        return linear_phase(rows);
    }
    throw InputError("unknown phase id '" + id + "'");
}

PhaseCheck verify_phase(const PhaseFunction& p, int samples, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), us(0.5, 2.0);
    PhaseCheck c;
    const double h = 1e-5;
    for (int i = 0; i < samples; ++i) {
        Vec x(p.n);
        for (auto& v : x) v = ux(rng);
        Vec xi = us(rng) * random_unit(rng, p.s);
        double f1 = p.phi(x, xi);
        double f2 = p.phi(x, 2.0 * xi);
        c.homogeneity_error = std::max(c.homogeneity_error, std::abs(f2 - 2.0 * f1) / (1.0 + std::abs(f1)));
        auto check = [&](const Vec& analytic, bool wrt_x) {
            const Vec& base = wrt_x ? x : xi;
            for (std::size_t a = 0; a < base.size(); ++a) {
                Vec plus = base, minus = base;
                plus[a] += h;
                minus[a] -= h;
                double fp = wrt_x ? p.phi(plus, xi) : p.phi(x, plus);
                double fm = wrt_x ? p.phi(minus, xi) : p.phi(x, minus);
                double numeric = (fp - fm) / (2.0 * h);
                double err = std::abs(numeric - analytic[a]) / std::max(1.0, std::abs(analytic[a]));
                c.gradient_error = std::max(c.gradient_error, err);
            }
        };
        check(p.dx_phi(x, xi), true);
        check(p.dxi_phi(x, xi), false);
    }
    c.ok = c.homogeneity_error <= 1e-9 && c.gradient_error <= 1e-6;
    return c;
}

std::vector<Vec> sphere_samples(int s)
{
    if (s == 1) return {{1.0}, {-1.0}};
    if (s == 2) {
        std::vector<Vec> out;
        for (int i = 0; i < 720; ++i) {
            double a = 2.0 * kPi * i / 720.0;
            out.push_back({std::cos(a), std::sin(a)});
        }
        return out;
    }
    if (s != 3) throw ParameterError("fibre dimension must be 1, 2 or 3");
    std::vector<Tri> tris = icosahedron();
    for (int level = 0; level < 3; ++level) {
        std::vector<Tri> next;
        for (const auto& t : tris) {
            Vec ab = midpoint_on_sphere(t[0], t[1]);
            Vec bc = midpoint_on_sphere(t[1], t[2]);
            Vec ca = midpoint_on_sphere(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    std::vector<Vec> out;
    for (const auto& t : tris) out.push_back(normalized(t[0] + t[1] + t[2]));
    return out;
}

std::vector<Vec> critical_directions(const PhaseFunction& p, const Vec& x)
{
    if (!p.homogeneous) throw ParameterError("critical direction search needs a homogeneous phase");
    if (int(x.size()) != p.n) throw ParameterError("point dimension does not match the phase");
    const std::vector<Vec> grid = sphere_samples(p.s);
    std::vector<double> res(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) res[i] = norm(residual(p, x, grid[i]));

    std::vector<Vec> out;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (res[i] < kCriticalTol) push_unique(out, grid[i]);
    if (p.s == 1) return out;

    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return res[a] < res[b]; });
    const std::size_t starts = std::min<std::size_t>(16, order.size());
    for (std::size_t j = 0; j < starts; ++j) {
        if (res[order[j]] < kCriticalTol) continue;
        Vec xi = grid[order[j]];
        if (refine(p, x, xi)) push_unique(out, xi);
    }
    return out;
}

PhaseBound wf_bound_from_phase(const PhaseFunction& p, const std::vector<Vec>& xs)
{
    std::vector<std::vector<WFSample>> found(xs.size());
    std::vector<std::vector<std::pair<Vec, Vec>>> degenerate(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        const Vec& x = xs[i];
        for (const auto& xi : critical_directions(p, x)) {
            Vec k = -p.dx_phi(x, xi);
            if (norm(k) <= 1e-12) {
                degenerate[i].emplace_back(x, xi);
                continue;
            }
            WFSample s;
            s.x = x;
            s.k = normalized(k);
            found[i].push_back(std::move(s));
        }
    });
    PhaseBound out;
    std::vector<WFSample> all;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (auto& s : found[i]) all.push_back(std::move(s));
        for (auto& d : degenerate[i]) out.degenerate.push_back(std::move(d));
    }
    out.set = sampled_set(p.n, std::move(all), "phase bound (" + p.name + ")");
    return out;
}

std::vector<Vec> light_cone_samples(int count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(0.2, 2.0);
    std::vector<Vec> out;
    for (int i = 0; i < count; ++i) {
        double r = ur(rng);
        Vec w = random_unit(rng, 3);
        double t = (i % 2 == 0) ? r : -r;
        out.push_back({t, r * w[0], r * w[1], r * w[2]});
    }
    return out;
}

FeynmanReport feynman_wf_oracle_check(int n_samples, unsigned seed)
{
    FeynmanReport rep;
    const std::vector<Vec> xs = light_cone_samples(n_samples, seed);
    rep.samples = int(xs.size());

    // Route (a): Delta_F agrees with Delta_+ near x0 > 0 and with Delta_+(-x) near x0 < 0.
    const ConicSet wightman = exact_wf(make_wightman(0.0));
    const Tolerance tight{1e-9, 1e-6};
    std::vector<WFSample> a_samples;
    for (const auto& x : xs) {
        bool future = x[0] > 0.0;
        Vec y = future ? x : -x;
        for (const auto& k : fiber(wightman, y, tight)) {
            WFSample s;
            s.x = x;
            s.k = future ? k : -k;
            a_samples.push_back(s);
        }
    }
    ConicSet route_a = sampled_set(4, a_samples, "glued Wightman");
    rep.route_a = int(route_a.samples.size());

    // Route (b): pull-back of WF(1/(t - i0)) along f(x) = (x0)^2 - |x|^2.
    SmoothMap f;
    f.in_dim = 4;
    f.out_dim = 1;
    f.f = [](const Vec& x) { return Vec{x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]}; };
    f.jacobian = [](const Vec& x) { return std::vector<Vec>{{2 * x[0], -2 * x[1], -2 * x[2], -2 * x[3]}}; };
    PullbackResult pb = pullback_wf(f, exact_wf(make_boundary_value(-1)), xs, tight);
    rep.route_b = int(pb.set.samples.size());

    const ConicSet feynman = exact_wf(make_massless_feynman());
    for (const auto& s : route_a.samples)
        if (!member(pb.set, s.x, s.k, tight) || !member(feynman, s.x, s.k, tight)) rep.witnesses.emplace_back(s.x, s.k);
    for (const auto& s : pb.set.samples)
        if (!member(route_a, s.x, s.k, tight) || !member(feynman, s.x, s.k, tight)) rep.witnesses.emplace_back(s.x, s.k);
    if (!pb.verdict.ok) rep.witnesses.push_back(*pb.verdict.witness);

    // D*: every nonzero covector over the origin, since WF(delta) is contained in WF(Delta_F).
    std::mt19937 rng(seed + 1);
    rep.dstar_ok = true;
    const Vec origin(4, 0.0);
    for (int i = 0; i < 256; ++i)
        if (!member(feynman, origin, random_unit(rng, 4), tight)) rep.dstar_ok = false;
    return rep;
}

}  // namespace wfkit
