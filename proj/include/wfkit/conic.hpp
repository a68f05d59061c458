#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfkit/core.hpp"

namespace wfkit {

struct Tolerance {
    double position = 1e-9;
    double angle = 1e-6;
};

// Position tolerance 2 grid cells, angle tolerance 1.5 cap half-angles.
Tolerance default_tolerance(const Grid& g, const DirectionSet& d);

struct WFSample {
    Vec x;
    Vec k;  // unit direction
    double score = 1.0;
    double exponent = std::numeric_limits<double>::quiet_NaN();
    bool low_confidence = false;
    bool flagged = false;
};

using Predicate = std::function<bool(const Vec& x, const Vec& k, const Tolerance& tol)>;
// Unit directions of the set over (a neighbourhood of) x.
using FiberFn = std::function<std::vector<Vec>(const Vec& x, const Tolerance& tol)>;

struct ConicSet {
    enum class Form { Exact, Sampled };

    int dim = 1;
    Form form = Form::Sampled;
    std::string tag;

    Predicate predicate;
    FiberFn fiber_fn;
    std::vector<Vec> base_points;

    std::vector<WFSample> samples;

    // Base points where an oplus produced k + q = 0.
    std::vector<Vec> zero_hits;

    bool is_empty() const;
};

ConicSet empty_set(int dim);
ConicSet sampled_set(int dim, std::vector<WFSample> samples, std::string tag = "sampled");
ConicSet exact_set(int dim, std::string tag, Predicate pred, FiberFn fiber, std::vector<Vec> base_points);

bool member(const ConicSet& s, const Vec& x, const Vec& k, const Tolerance& tol = {});
std::vector<Vec> fiber(const ConicSet& s, const Vec& x, const Tolerance& tol = {});
std::vector<Vec> candidate_points(const ConicSet& s);

ConicSet union_of(const ConicSet& a, const ConicSet& b);
ConicSet oplus(const ConicSet& a, const ConicSet& b, const Tolerance& tol = {});

struct Verdict {
    bool ok = true;
    std::optional<std::pair<Vec, Vec>> witness;  // (x, k) with (x,k) in u and (x,-k) in v
};

Verdict hormander_check(const ConicSet& wf_u, const ConicSet& wf_v, const Tolerance& tol = {});

struct SupportSet {
    std::function<bool(const Vec&)> contains;
    std::vector<Vec> samples;
};

SupportSet support_everywhere(std::vector<Vec> samples = {});
SupportSet support_from_box(const Box& box, std::vector<Vec> samples = {});
SupportSet support_predicate(std::function<bool(const Vec&)> pred, std::vector<Vec> samples = {});

// Restriction of s to base points inside supp.
ConicSet restrict_to(const ConicSet& s, const SupportSet& supp);

ConicSet product_wf_bound(const ConicSet& wf_u, const SupportSet& supp_u, const ConicSet& wf_v,
                          const SupportSet& supp_v, const Tolerance& tol = {});

struct SmoothMap {
    int in_dim = 1;
    int out_dim = 1;
    std::function<Vec(const Vec&)> f;
    // Rows of the Jacobian: out_dim vectors of length in_dim.
    std::function<std::vector<Vec>(const Vec&)> jacobian;
};

struct PullbackResult {
    ConicSet set;
    Verdict verdict;
    std::vector<std::pair<Vec, Vec>> nf_hits;  // (x, k) with k o df_x = 0
};

PullbackResult pullback_wf(const SmoothMap& f, const ConicSet& wf_u, const std::vector<Vec>& base_points,
                           const Tolerance& tol = {});

ConicSet tensor_wf(const ConicSet& wf_u, const SupportSet& supp_u, const ConicSet& wf_v, const SupportSet& supp_v);

ConicSet kernel_wf_from_difference(const ConicSet& wf_v);

}  // namespace wfkit
