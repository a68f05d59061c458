#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "wfkit/catalog.hpp"
#include "wfkit/geometry.hpp"
#include "wfkit/spectral.hpp"

using namespace wfkit;

namespace {

std::vector<double> offset_grid(double lo, double hi, double step)
{
    std::vector<double> out;
    for (int i = 0; lo + i * step <= hi + 1e-12; ++i) out.push_back(lo + i * step);
    return out;
}

// Brute force: crossings of the line nu.x = a with each polygon edge, away from vertices.
int segment_crossings(const std::vector<Vec>& v, const Vec& nu, double a)
{
    int n = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double p = dot(nu, v[i]) - a, q = dot(nu, v[(i + 1) % v.size()]) - a;
        if ((p < 0.0) != (q < 0.0)) ++n;
    }
    return n;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("conormal bundle of the unit circle")
{
    ConicSet c = conormal_bundle(make_circle(0.0, 0.0, 1.0));
    CHECK(member(c, {1.0, 0.0}, {2.0, 0.0}));
    CHECK(member(c, {1.0, 0.0}, {-1.0, 0.0}));
    CHECK_FALSE(member(c, {1.0, 0.0}, {0.0, 1.0}));
    for (double a = 0.0; a < 2.0 * kPi; a += 0.3) {
        CHECK_FALSE(member(c, {0.0, 0.0}, {std::cos(a), std::sin(a)}));
        Vec x{std::cos(a + 0.1), std::sin(a + 0.1)};
        CHECK(member(c, x, 3.0 * x));
    }
}

TEST_CASE("conormal bundle of a polygon excludes vertices")
{
    ConicSet c = conormal_bundle(make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    const Tolerance tight{1e-6, 1e-6};
    CHECK(member(c, {0.5, 0.0}, {0.0, -1.0}, tight));
    CHECK(member(c, {1.0, 0.4}, {1.0, 0.0}, tight));
    CHECK_FALSE(member(c, {0.5, 0.0}, {1.0, 0.0}, tight));
    CHECK_FALSE(member(c, {1.0, 1.0}, {1.0, 1.0}, tight));
}

TEST_CASE("ellipse normals match the analytic gradient")
{
    const double a = 1.0, b = 0.5;
    ConicSet c = conormal_bundle(make_ellipse(0.0, 0.0, a, b));
    for (double t = 0.05; t < 2.0 * kPi; t += 0.37) {
        Vec x{a * std::cos(t), b * std::sin(t)};
        Vec n{x[0] / (a * a), x[1] / (b * b)};
        CHECK(member(c, x, n));
        CHECK(member(c, x, -n));
        CHECK_FALSE(member(c, x, {-n[1], n[0]}));
    }
}

TEST_CASE("polygon construction")
{
    Boundary2D cw = make_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(signed_area(cw) == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 1}}), ParameterError);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ParameterError);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}, {2, 0}}), ParameterError);
    CHECK_THROWS_AS(make_circle(0, 0, 0.0), ParameterError);
    CHECK_THROWS_AS(make_star(0, 0, 1.0, 1.2, 5), ParameterError);
}

TEST_CASE("rasterized disk")
{
    Grid g = make_grid(2, -2.0, 4.0, 256);
    const double r = 1.0;
    SampledField f = rasterize_char(make_circle(0.0, 0.0, r), g);
    CHECK(f.values[g.nearest_index({0.0, 0.0})] == cplx(1.0));
    CHECK(f.values[g.nearest_index({1.5, 0.0})] == cplx(0.0));
    double area = 0.0;
    for (auto v : f.values) area += v.real();
    area *= g.spacing() * g.spacing();
    CHECK(std::abs(area - kPi * r * r) <= 4.0 * r * g.spacing());
    CHECK_THROWS_AS(rasterize_char(make_circle(0.0, 0.0, 2.5), g), ParameterError);
}

TEST_CASE("rasterized rectangle matches the half-plane sampler")
{
    Grid g = make_grid(2, -1.0, 2.0, 64);
    const double h = g.spacing();
    SampledField rect = rasterize_char(make_polygon({{-0.95, -0.5 * h}, {0.95, -0.5 * h}, {0.95, 0.95}, {-0.95, 0.95}}), g);
    SampledField half = sample(make_half_plane(), g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec x = g.node(i);
        if (std::abs(x[0]) < 0.9 && x[1] < 0.9 && x[1] > -0.9) CHECK(rect.values[i] == half.values[i]);
    }
}

TEST_CASE("line intersections with the unit disk")
{
    Boundary2D c = make_circle(0.0, 0.0, 1.0);
    for (double ang : {0.0, 0.7, 2.0}) {
        Vec nu{std::cos(ang), std::sin(ang)};
        CHECK(line_intersections(c, nu, 0.0).count == 2);
        LineHit t = line_intersections(c, nu, 1.0);
        CHECK(t.count == 1);
        CHECK(t.tangent);
        CHECK(line_intersections(c, nu, 2.0).count == 0);
    }
}

TEST_CASE("disk signature jumps at the support function")
{
    Boundary2D c = make_circle(0.0, 0.0, 1.0);
    const double step = 0.01;
    IntersectionSignature sig = intersection_signature(c, uniform_directions(2, 32), offset_grid(-1.5, 1.5, step));
    REQUIRE(sig.jump_offsets.size() == 32);
    for (std::size_t d = 0; d < 32; ++d) {
        const auto& j = sig.jump_offsets[d];
        REQUIRE(j.size() == 2);
        CHECK(std::is_sorted(j.begin(), j.end()));
        CHECK(std::abs(j[0] + 1.0) <= step);
        CHECK(std::abs(j[1] - 1.0) <= step);
        for (std::size_t i = 0; i < sig.offsets.size(); ++i) {
            int n = sig.counts[d][i];
            CHECK(n >= 0);
            CHECK(n <= 2);
            if (n == 1) CHECK(sig.tangent[d][i]);
            if (std::abs(sig.offsets[i]) > 1.0 + step) CHECK(n == 0);
        }
    }
}

TEST_CASE("convex polygon counts agree with brute force")
{
    std::vector<Vec> v{{-0.8, -0.5}, {0.6, -0.7}, {0.9, 0.2}, {0.1, 0.8}, {-0.7, 0.4}};
    Boundary2D p = make_polygon(v);
    DirectionSet dirs = uniform_directions(2, 24);
    IntersectionSignature sig = intersection_signature(p, dirs, offset_grid(-1.3, 1.3, 0.013));
    for (std::size_t d = 0; d < dirs.dirs.size(); ++d) {
        for (std::size_t i = 0; i < sig.offsets.size(); ++i) {
            if (sig.tangent[d][i]) continue;
            CHECK((sig.counts[d][i] == 0 || sig.counts[d][i] == 2));
            CHECK(sig.counts[d][i] == segment_crossings(v, dirs.dirs[d], sig.offsets[i]));
        }
    }
}

TEST_CASE("non-tangent counts are even on a star")
{
    Boundary2D s = make_star(0.1, -0.1, 0.8, 0.3, 5);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), off(-1.2, 1.2);
    int odd = 0, tangent = 0;
    for (int i = 0; i < 2000; ++i) {
        double a = ang(rng);
        LineHit h = line_intersections(s, {std::cos(a), std::sin(a)}, off(rng));
        if (h.tangent) {
            ++tangent;
            continue;
        }
        if (h.count % 2) ++odd;
    }
    CHECK(odd == 0);
    CHECK(tangent < 20);
}

TEST_CASE("signature recovers the conormal bundle")
{
    const double step = 0.005;
    const DirectionSet dirs = uniform_directions(2, 48);
    const Tolerance tol{2.0 * step, 1.5 * dirs.cap_half_angle};
    for (const Boundary2D& b : {make_circle(0.0, 0.0, 1.0), make_ellipse(0.1, 0.0, 1.0, 0.5, 0.3),
                                make_star(0.0, 0.0, 0.8, 0.25, 5)}) {
        ConicSet wf = wf_from_signature(intersection_signature(b, dirs, offset_grid(-1.4, 1.4, step)), b);
        ConicSet cn = conormal_bundle(b);
        REQUIRE_FALSE(wf.samples.empty());
        for (const auto& s : wf.samples) {
            if (s.flagged) continue;
            CHECK(member(cn, s.x, s.k, tol));
        }
    }
}

TEST_CASE("signature of the unit disk is the radial conormal")
{
    const DirectionSet dirs = uniform_directions(2, 32);
    Boundary2D c = make_circle(0.0, 0.0, 1.0);
    ConicSet wf = wf_from_signature(intersection_signature(c, dirs, offset_grid(-1.5, 1.5, 0.01)), c);
    for (const auto& d : dirs.dirs) CHECK(member(wf, d, d, Tolerance{0.01, 1e-6}));
    for (const auto& s : wf.samples) {
        CHECK(norm(s.x) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(std::min(angle_between(s.k, s.x), angle_between(s.k, -s.x)) < 0.02);
    }
}

TEST_CASE("polygon edge normals come out of the signature")
{
    Boundary2D sq = make_polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
    ConicSet wf = wf_from_signature(intersection_signature(sq, uniform_directions(2, 8), offset_grid(-1.0, 1.0, 0.01)), sq);
    bool edge_bottom = false;
    for (const auto& s : wf.samples)
        if (std::abs(s.x[1] + 0.5) < 1e-9 && std::abs(s.x[0]) < 0.45 && std::abs(s.k[0]) < 1e-9) edge_bottom = true;
    CHECK(edge_bottom);
}

TEST_CASE("spectral samples of a rasterized ellipse lie on its conormal")
{
    Grid g = make_grid(2, -1.6, 3.2, 256);
    Boundary2D e = make_ellipse(0.0, 0.0, 1.0, 0.75, 0.2);
    SampledField f = rasterize_char_antialiased(e, g);
    EstimatorParams p = default_params(g);
    std::vector<Vec> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(g.node(g.nearest_index(e.gamma(i / 6.0 + 0.03))));
    ConicSet wf = estimate_wf(f, pts, p);
    REQUIRE_FALSE(wf.samples.empty());
    // the normal turns by up to curvature * r1 inside the window plateau
    const Tolerance tol{2.0 * g.spacing(), kPi / 12.0};
    ConicSet cn = conormal_bundle(e);
    for (const auto& s : wf.samples) {
        CHECK(member(cn, s.x, s.k, tol));
    }
}

TEST_CASE("boundary JSON")
{
    Boundary2D p = boundary_from_json_text(R"({"polygon": [[0,0],[1,0],[0,1]]})");
    CHECK(p.kind == Boundary2D::Kind::Polygon);
    CHECK(signed_area(p) == doctest::Approx(0.5));
    Boundary2D e = boundary_from_json_text(R"({"curve": "ellipse", "params": {"a": 2, "b": 1}})");
    CHECK(e.kind == Boundary2D::Kind::Curve);
    CHECK(signed_area(e) == doctest::Approx(2.0 * kPi).epsilon(1e-4));
    CHECK(contains_point(e, {1.9, 0.0}));
    CHECK_FALSE(contains_point(e, {0.0, 1.1}));
    CHECK_THROWS_AS(boundary_from_json_text("{"), InputError);
    CHECK_THROWS_AS(boundary_from_json_text(R"({"curve": "blob"})"), InputError);
    CHECK_THROWS_AS(boundary_from_json_text(R"({"polygon": [[0,0],[1]]})"), InputError);
    CHECK_THROWS_AS(boundary_from_json_text(R"({"shape": 1})"), InputError);
}

TEST_CASE("exact polygon spectrum")
{
    Boundary2D sq = make_polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
    CHECK(std::abs(char_fourier(sq, {0.0, 0.0}) - cplx(1.0)) < 1e-12);
    for (Vec k : std::vector<Vec>{{3.0, 0.0}, {1.0, 2.0}, {-4.0, 0.5}}) {
        auto sinc = [](double t) { return std::abs(t) < 1e-12 ? 1.0 : std::sin(t) / t; };
        cplx want = sinc(0.5 * k[0]) * sinc(0.5 * k[1]);
        CHECK(std::abs(char_fourier(sq, k) - want) < 1e-10);
    }
}

}  // TEST_SUITE
