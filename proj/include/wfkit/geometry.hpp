#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"

namespace wfkit {

struct Boundary2D {
    enum class Kind { Polygon, Curve };

    Kind kind = Kind::Polygon;
    std::vector<Vec> vertices;  // counterclockwise, closing edge implied
    std::string curve;          // circle | ellipse | star
    std::map<std::string, double> params;
    std::function<Vec(double)> gamma;   // t in [0,1)
    std::function<Vec(double)> dgamma;  // derivative with respect to t
};

Boundary2D make_polygon(std::vector<Vec> vertices);
Boundary2D make_circle(double cx, double cy, double r);
Boundary2D make_ellipse(double cx, double cy, double a, double b, double rotation = 0.0);
// r(theta) = r0 (1 + amp cos(lobes theta)) around (cx, cy).
Boundary2D make_star(double cx, double cy, double r0, double amp, int lobes);

// {"polygon": [[x,y],...]} or {"curve": "ellipse", "params": {...}}
Boundary2D boundary_from_json_text(const std::string& text);

bool contains_point(const Boundary2D& b, const Vec& x);
std::vector<Vec> polyline(const Boundary2D& b, int samples = 4096);
Box bounding_box(const Boundary2D& b);
double signed_area(const Boundary2D& b);

struct NearestPoint {
    double t = 0.0;  // curve parameter, or edge index + fraction for polygons
    Vec point;
    Vec normal;      // outward unit normal
    double dist = 0.0;
    bool at_vertex = false;
};

NearestPoint nearest_point(const Boundary2D& b, const Vec& x);

ConicSet conormal_bundle(const Boundary2D& b);

SampledField rasterize_char(const Boundary2D& b, const Grid& g);
// Exact polygon spectrum (curves are polygonised), smooth radial low-pass, inverse transform.
SampledField rasterize_char_antialiased(const Boundary2D& b, const Grid& g);

// Fourier transform of the domain's indicator, e^{+ik.x} convention.
cplx char_fourier(const Boundary2D& b, const Vec& k);

struct LineHit {
    int count = 0;
    bool tangent = false;
};

LineHit line_intersections(const Boundary2D& b, const Vec& nu, double a, double tangent_angle_tol = 1e-6);

struct IntersectionSignature {
    std::vector<Vec> directions;
    std::vector<double> offsets;
    std::vector<std::vector<int>> counts;        // [direction][offset]
    std::vector<std::vector<char>> tangent;      // [direction][offset]
    std::vector<std::vector<double>> jump_offsets;
};

IntersectionSignature intersection_signature(const Boundary2D& b, const DirectionSet& dirs,
                                             const std::vector<double>& offsets);

ConicSet wf_from_signature(const IntersectionSignature& sig, const Boundary2D& b);

}  // namespace wfkit
