#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"

namespace wfkit {

struct PhaseFunction {
    std::string name;
    int n = 2;  // base dimension
    int s = 1;  // fibre dimension
    std::function<double(const Vec& x, const Vec& xi)> phi;
    std::function<Vec(const Vec& x, const Vec& xi)> dx_phi;
    std::function<Vec(const Vec& x, const Vec& xi)> dxi_phi;
    bool homogeneous = true;
};

PhaseFunction circle_phase();
PhaseFunction wightman_phase();
// phi(x, xi) = sum_i p_i(x) xi_i with p_i(x) = c0 + c1 x1 + c2 x2 + c3 x1^2 + c4 x1 x2 + c5 x2^2.
PhaseFunction linear_phase(const std::vector<std::array<double, 6>>& coefficients);
// "circle", "wightman" or "linear:[[c0,...,c5],...]".
PhaseFunction phase_from_id(const std::string& id);

struct PhaseCheck {
    double homogeneity_error = 0.0;  // max |phi(x,2xi) - 2 phi(x,xi)| / (1 + |phi|)
    double gradient_error = 0.0;     // max relative deviation from central differences
    bool ok = false;
};

PhaseCheck verify_phase(const PhaseFunction& p, int samples = 64, unsigned seed = 7);

// Unit-sphere search grid in fibre space: {+1,-1}, 720 circle points, or 1280 icosahedral face centres.
std::vector<Vec> sphere_samples(int s);

std::vector<Vec> critical_directions(const PhaseFunction& p, const Vec& x);

struct PhaseBound {
    ConicSet set;
    std::vector<std::pair<Vec, Vec>> degenerate;  // (x, xi) with d_x phi = 0
};

PhaseBound wf_bound_from_phase(const PhaseFunction& p, const std::vector<Vec>& xs);

struct FeynmanReport {
    int samples = 0;
    int route_a = 0;  // glued Wightman samples
    int route_b = 0;  // pull-back samples
    bool dstar_ok = false;
    std::vector<std::pair<Vec, Vec>> witnesses;
    bool ok() const { return dstar_ok && witnesses.empty() && route_a == samples && route_b == samples; }
};

// Random points on the light cone (half with x0 > 0), deterministic for a given seed.
std::vector<Vec> light_cone_samples(int count, unsigned seed = 11);

FeynmanReport feynman_wf_oracle_check(int n_samples, unsigned seed = 11);

}  // namespace wfkit
