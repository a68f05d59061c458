#include "wfkit/conic.hpp"

#include <algorithm>
#include <cmath>

namespace wfkit {

namespace {

void require_dim(const ConicSet& a, const ConicSet& b)
{
    if (a.dim != b.dim) throw ParameterError("conic sets have different base dimensions");
}

bool nearly_same_point(const Vec& a, const Vec& b) { return distance(a, b) <= 1e-12; }

void push_unique_point(std::vector<Vec>& pts, const Vec& p)
{
    for (const auto& q : pts)
        if (nearly_same_point(p, q)) return;
    pts.push_back(p);
}

void push_unique_dir(std::vector<Vec>& dirs, const Vec& d)
{
    for (const auto& e : dirs)
        if (angle_between(d, e) <= 1e-9) return;
    dirs.push_back(d);
}

// Angular distance from p to the closed convex cone spanned by unit k and q.
double angle_to_cone(const Vec& p, const Vec& k, const Vec& q)
{
    double kq = dot(k, q);
    if (kq <= -1.0 + 1e-12) return std::min(angle_between(p, k), angle_between(p, q));
    double pk = dot(p, k), pq = dot(p, q);
    double det = 1.0 - kq * kq;
    if (det < 1e-15) return angle_between(p, k);
    double a = (pk - kq * pq) / det;
    double b = (pq - kq * pk) / det;
    if (a >= 0.0 && b >= 0.0) {
        Vec proj = a * k + b * q;
        double pn = norm(p);
        double rn = norm(p - proj);
        return std::asin(std::clamp(rn / pn, 0.0, 1.0));
    }
    return std::min(angle_between(p, k), angle_between(p, q));
}

std::vector<Vec> fan(const Vec& k, const Vec& q, int steps)
{
    std::vector<Vec> out;
    if (dot(k, q) <= -1.0 + 1e-12) {
        out.push_back(k);
        out.push_back(q);
        return out;
    }
    for (int i = 0; i <= steps; ++i) {
        double t = double(i) / steps;
        Vec d = (1.0 - t) * k + t * q;
        if (norm(d) > 1e-12) push_unique_dir(out, normalized(d));
    }
    return out;
}

}  // namespace

Tolerance default_tolerance(const Grid& g, const DirectionSet& d)
{
    return Tolerance{2.0 * g.spacing(0), 1.5 * d.cap_half_angle};
}

bool ConicSet::is_empty() const
{
    if (form == Form::Sampled) return samples.empty();
    return base_points.empty();
}

ConicSet empty_set(int dim)
{
    ConicSet s;
    s.dim = dim;
    s.form = ConicSet::Form::Sampled;
    s.tag = "empty";
    return s;
}

ConicSet sampled_set(int dim, std::vector<WFSample> samples, std::string tag)
{
    ConicSet s;
    s.dim = dim;
    s.form = ConicSet::Form::Sampled;
    s.tag = std::move(tag);
    for (auto& smp : samples) {
        if (int(smp.x.size()) != dim || int(smp.k.size()) != dim)
            throw ParameterError("sample dimension does not match set dimension");
        if (norm(smp.k) == 0.0) throw ParameterError("zero direction in sampled conic set");
        smp.k = normalized(smp.k);
    }
    s.samples = std::move(samples);
    return s;
}

ConicSet exact_set(int dim, std::string tag, Predicate pred, FiberFn fib, std::vector<Vec> base_points)
{
    ConicSet s;
    s.dim = dim;
    s.form = ConicSet::Form::Exact;
    s.tag = std::move(tag);
    s.predicate = std::move(pred);
    s.fiber_fn = std::move(fib);
    s.base_points = std::move(base_points);
    return s;
}

bool member(const ConicSet& s, const Vec& x, const Vec& k, const Tolerance& tol)
{
    if (int(x.size()) != s.dim || int(k.size()) != s.dim) throw ParameterError("dimension mismatch in member query");
    if (norm(k) == 0.0) throw ParameterError("member query with zero direction");
    if (s.form == ConicSet::Form::Exact) return s.predicate && s.predicate(x, k, tol);
    for (const auto& smp : s.samples) {
        if (distance(x, smp.x) <= tol.position && angle_between(k, smp.k) <= tol.angle) return true;
    }
    return false;
}

std::vector<Vec> fiber(const ConicSet& s, const Vec& x, const Tolerance& tol)
{
    std::vector<Vec> out;
    if (s.form == ConicSet::Form::Exact) {
        if (s.fiber_fn) out = s.fiber_fn(x, tol);
        return out;
    }
    for (const auto& smp : s.samples)
        if (distance(x, smp.x) <= tol.position) push_unique_dir(out, smp.k);
    return out;
}

std::vector<Vec> candidate_points(const ConicSet& s)
{
    std::vector<Vec> pts;
    if (s.form == ConicSet::Form::Exact) {
        for (const auto& p : s.base_points) push_unique_point(pts, p);
    } else {
        for (const auto& smp : s.samples) push_unique_point(pts, smp.x);
    }
    return pts;
}

ConicSet union_of(const ConicSet& a, const ConicSet& b)
{
    require_dim(a, b);
    if (a.form == ConicSet::Form::Sampled && b.form == ConicSet::Form::Sampled) {
        ConicSet out = a;
        out.tag = a.tag + " | " + b.tag;
        for (const auto& smp : b.samples) {
            bool dup = false;
            for (const auto& e : out.samples) {
                if (nearly_same_point(e.x, smp.x) && angle_between(e.k, smp.k) <= 1e-9) {
                    dup = true;
                    break;
                }
            }
            if (!dup) out.samples.push_back(smp);
        }
        for (const auto& z : b.zero_hits) push_unique_point(out.zero_hits, z);
        return out;
    }
    Predicate pred = [a, b](const Vec& x, const Vec& k, const Tolerance& tol) {
        return member(a, x, k, tol) || member(b, x, k, tol);
    };
    FiberFn fib = [a, b](const Vec& x, const Tolerance& tol) {
        std::vector<Vec> out = fiber(a, x, tol);
        for (const auto& d : fiber(b, x, tol)) push_unique_dir(out, d);
        return out;
    };
    std::vector<Vec> base = candidate_points(a);
    for (const auto& p : candidate_points(b)) push_unique_point(base, p);
    ConicSet out = exact_set(a.dim, a.tag + " | " + b.tag, pred, fib, base);
    out.zero_hits = a.zero_hits;
    for (const auto& z : b.zero_hits) push_unique_point(out.zero_hits, z);
    return out;
}

ConicSet oplus(const ConicSet& a, const ConicSet& b, const Tolerance& tol)
{
    require_dim(a, b);
    std::vector<Vec> cand = candidate_points(a);
    for (const auto& p : candidate_points(b)) push_unique_point(cand, p);

    std::vector<Vec> base;
    std::vector<Vec> zeros;
    for (const auto& x : cand) {
        auto fa = fiber(a, x, tol);
        auto fb = fiber(b, x, tol);
        if (fa.empty() || fb.empty()) continue;
        base.push_back(x);
        for (const auto& k : fa) {
            for (const auto& q : fb) {
                if (angle_between(k, q) >= kPi - tol.angle - 1e-12) {
                    push_unique_point(zeros, x);
                }
            }
        }
    }
    Predicate pred = [a, b](const Vec& x, const Vec& p, const Tolerance& t) {
        auto fa = fiber(a, x, t);
        auto fb = fiber(b, x, t);
        for (const auto& k : fa)
            for (const auto& q : fb)
                if (angle_to_cone(p, k, q) <= t.angle) return true;
        return false;
    };
    FiberFn fib = [a, b](const Vec& x, const Tolerance& t) {
        std::vector<Vec> out;
        for (const auto& k : fiber(a, x, t))
            for (const auto& q : fiber(b, x, t))
                for (const auto& d : fan(k, q, 8)) push_unique_dir(out, d);
        return out;
    };
    ConicSet out = exact_set(a.dim, "(" + a.tag + ") (+) (" + b.tag + ")", pred, fib, base);
    out.zero_hits = zeros;
    return out;
}

Verdict hormander_check(const ConicSet& wf_u, const ConicSet& wf_v, const Tolerance& tol)
{
    require_dim(wf_u, wf_v);
    std::vector<Vec> cand = candidate_points(wf_u);
    for (const auto& p : candidate_points(wf_v)) push_unique_point(cand, p);
    for (const auto& x : cand) {
        for (const auto& k : fiber(wf_u, x, tol)) {
            if (member(wf_v, x, -k, tol)) return Verdict{false, std::make_pair(x, k)};
        }
        for (const auto& q : fiber(wf_v, x, tol)) {
            if (member(wf_u, x, -q, tol)) return Verdict{false, std::make_pair(x, -q)};
        }
    }
    return Verdict{};
}

SupportSet support_everywhere(std::vector<Vec> samples)
{
    return SupportSet{[](const Vec&) { return true; }, std::move(samples)};
}

SupportSet support_from_box(const Box& box, std::vector<Vec> samples)
{
    return SupportSet{[box](const Vec& x) { return box.contains(x, 1e-12); }, std::move(samples)};
}

SupportSet support_predicate(std::function<bool(const Vec&)> pred, std::vector<Vec> samples)
{
    return SupportSet{std::move(pred), std::move(samples)};
}

ConicSet restrict_to(const ConicSet& s, const SupportSet& supp)
{
    if (s.form == ConicSet::Form::Sampled) {
        ConicSet out = s;
        out.samples.clear();
        for (const auto& smp : s.samples)
            if (supp.contains(smp.x)) out.samples.push_back(smp);
        return out;
    }
    auto contains = supp.contains;
    Predicate pred = [s, contains](const Vec& x, const Vec& k, const Tolerance& tol) {
        return contains(x) && member(s, x, k, tol);
    };
    FiberFn fib = [s, contains](const Vec& x, const Tolerance& tol) {
        if (!contains(x)) return std::vector<Vec>{};
        return fiber(s, x, tol);
    };
    std::vector<Vec> base;
    for (const auto& p : s.base_points)
        if (contains(p)) base.push_back(p);
    return exact_set(s.dim, s.tag + " restricted", pred, fib, base);
}

ConicSet product_wf_bound(const ConicSet& wf_u, const SupportSet& supp_u, const ConicSet& wf_v,
                          const SupportSet& supp_v, const Tolerance& tol)
{
    Verdict v = hormander_check(wf_u, wf_v, tol);
    if (!v.ok) throw ParameterError("product bound requested for a pair violating the product condition");
    ConicSet s_plus = oplus(wf_u, wf_v, tol);
    ConicSet s_u = restrict_to(wf_u, supp_v);
    ConicSet s_v = restrict_to(wf_v, supp_u);
    ConicSet out = union_of(union_of(s_plus, s_u), s_v);
    out.zero_hits.clear();
    out.tag = "product bound";
    return out;
}

PullbackResult pullback_wf(const SmoothMap& f, const ConicSet& wf_u, const std::vector<Vec>& base_points,
                           const Tolerance& tol)
{
    if (wf_u.dim != f.out_dim) throw ParameterError("map target dimension does not match the conic set");
    PullbackResult res;
    std::vector<WFSample> samples;
    for (const auto& x : base_points) {
        if (int(x.size()) != f.in_dim) throw ParameterError("base point dimension does not match map source");
        Vec y = f.f(x);
        auto dirs = fiber(wf_u, y, tol);
        if (dirs.empty()) continue;
        auto J = f.jacobian(x);
        double jn = 0.0;
        for (const auto& row : J) jn = std::max(jn, norm(row));
        for (const auto& k : dirs) {
            Vec c(f.in_dim, 0.0);
            for (int i = 0; i < f.out_dim; ++i)
                for (int j = 0; j < f.in_dim; ++j) c[j] += k[i] * J[i][j];
            if (norm(c) <= 1e-12 * std::max(jn, 1.0)) {
                res.nf_hits.emplace_back(x, k);
                continue;
            }
            WFSample smp;
            smp.x = x;
            smp.k = normalized(c);
            samples.push_back(smp);
        }
    }
    res.set = sampled_set(f.in_dim, std::move(samples), "pullback of " + wf_u.tag);
    if (!res.nf_hits.empty()) {
        res.verdict.ok = false;
        res.verdict.witness = res.nf_hits.front();
    }
    return res;
}

ConicSet tensor_wf(const ConicSet& wf_u, const SupportSet& supp_u, const ConicSet& wf_v, const SupportSet& supp_v)
{
    const int du = wf_u.dim, dv = wf_v.dim;
    auto split = [du, dv](const Vec& z) {
        return std::make_pair(Vec(z.begin(), z.begin() + du), Vec(z.begin() + du, z.begin() + du + dv));
    };
    Predicate pred = [=](const Vec& xy, const Vec& kq, const Tolerance& tol) {
        auto [x, y] = split(xy);
        auto [k, q] = split(kq);
        double total = norm(kq);
        double small = std::sin(std::min(tol.angle, kPi / 2)) * total;
        double nk = norm(k), nq = norm(q);
        if (nk <= small) return supp_u.contains(x) && member(wf_v, y, q, tol);
        if (nq <= small) return supp_v.contains(y) && member(wf_u, x, k, tol);
        return member(wf_u, x, k, tol) && member(wf_v, y, q, tol);
    };
    FiberFn fib = [=](const Vec& xy, const Tolerance& tol) {
        auto [x, y] = split(xy);
        auto fu = fiber(wf_u, x, tol);
        auto fv = fiber(wf_v, y, tol);
        std::vector<Vec> out;
        auto join = [&](const Vec& k, double a, const Vec& q, double b) {
            Vec d;
            for (double v : k) d.push_back(a * v);
            for (double v : q) d.push_back(b * v);
            push_unique_dir(out, d);
        };
        const Vec zu(du, 0.0), zv(dv, 0.0);
        for (const auto& k : fu)
            for (const auto& q : fv)
                for (int i = 1; i < 4; ++i) {
                    double t = i * kPi / 8.0;
                    join(k, std::cos(t), q, std::sin(t));
                }
        if (supp_v.contains(y))
            for (const auto& k : fu) join(k, 1.0, zv, 0.0);
        if (supp_u.contains(x))
            for (const auto& q : fv) join(zu, 0.0, q, 1.0);
        return out;
    };
    auto concat = [](const Vec& a, const Vec& b) {
        Vec z = a;
        z.insert(z.end(), b.begin(), b.end());
        return z;
    };
    std::vector<Vec> base;
    auto cu = candidate_points(wf_u);
    auto cv = candidate_points(wf_v);
    for (const auto& x : cu) {
        for (const auto& y : cv) push_unique_point(base, concat(x, y));
        for (const auto& y : supp_v.samples) push_unique_point(base, concat(x, y));
    }
    for (const auto& x : supp_u.samples)
        for (const auto& y : cv) push_unique_point(base, concat(x, y));
    return exact_set(du + dv, "(" + wf_u.tag + ") x (" + wf_v.tag + ")", pred, fib, base);
}

ConicSet kernel_wf_from_difference(const ConicSet& wf_v)
{
    const int n = wf_v.dim;
    auto split = [n](const Vec& z) {
        return std::make_pair(Vec(z.begin(), z.begin() + n), Vec(z.begin() + n, z.begin() + 2 * n));
    };
    Predicate pred = [=](const Vec& xy, const Vec& kq, const Tolerance& tol) {
        auto [x, y] = split(xy);
        auto [k, q] = split(kq);
        Vec anti = k;
        for (double v : k) anti.push_back(-v);
        if (norm(k) == 0.0) return false;
        if (angle_between(kq, anti) > tol.angle) return false;
        return member(wf_v, x - y, k, tol);
    };
    FiberFn fib = [=](const Vec& xy, const Tolerance& tol) {
        auto [x, y] = split(xy);
        std::vector<Vec> out;
        for (const auto& k : fiber(wf_v, x - y, tol)) {
            Vec d = k;
            for (double v : k) d.push_back(-v);
            out.push_back(normalized(d));
        }
        return out;
    };
    std::vector<Vec> base;
    std::vector<double> shifts = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
    for (const auto& z : candidate_points(wf_v)) {
        if (n == 1) {
            for (double t : shifts) base.push_back({z[0] + t, t});
        } else {
            std::vector<Vec> ts(1, Vec{});
            for (int a = 0; a < n; ++a) {
                std::vector<Vec> next;
                for (const auto& prefix : ts)
                    for (double t : shifts) {
                        Vec p = prefix;
                        p.push_back(t);
                        next.push_back(p);
                    }
                ts = std::move(next);
            }
            for (const auto& t : ts) {
                Vec p = z + t;
                p.insert(p.end(), t.begin(), t.end());
                base.push_back(p);
            }
        }
    }
    return exact_set(2 * n, "kernel of " + wf_v.tag, pred, fib, base);
}

}  // namespace wfkit
