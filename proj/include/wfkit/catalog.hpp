#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"
#include "wfkit/geometry.hpp"

namespace wfkit {

enum class CatalogKind {
    DeltaAt,
    Heaviside1D,
    BoundaryValue,  // 1/(x + i sign 0)
    ShiftedSum,     // 1/(x+i0) + 1/(x+a-i0)
    TensorDelta1,   // delta(x1) on R^2
    TensorDelta2,   // delta(x2) on R^2
    CharHalfPlane,  // indicator of x2 >= 0
    CharDisk,
    CharDomain,
    WightmanDeltaPlus,
    FeynmanDeltaF,
    MasslessFeynman,
};

struct CatalogDistribution {
    CatalogKind kind = CatalogKind::DeltaAt;
    std::string id;
    int dim = 1;
    Vec x0;            // DeltaAt location
    int sign = +1;     // BoundaryValue
    double a = 1.0;    // ShiftedSum
    double radius = 1.0;
    double mass = 0.0;
    std::shared_ptr<Boundary2D> boundary;
    double epsilon = 0.0;  // 0 selects 4 grid spacings

    bool oracle_only() const;
};

CatalogDistribution make_delta(Vec x0);
CatalogDistribution make_heaviside();
CatalogDistribution make_boundary_value(int sign);
CatalogDistribution make_shifted_sum(double a);
CatalogDistribution make_tensor_delta(int axis);
CatalogDistribution make_half_plane();
CatalogDistribution make_disk(double radius);
CatalogDistribution make_domain(Boundary2D b);
CatalogDistribution make_wightman(double mass);
CatalogDistribution make_feynman(double mass);
CatalogDistribution make_massless_feynman();

// Ids: delta, delta2, heaviside, bv+, bv-, sum:a=..., disk:r=..., halfplane,
// tensor-delta-1, tensor-delta-2, wightman:m=..., feynman:m=..., massless-feynman.
CatalogDistribution parse_catalog_id(const std::string& id);

struct CatalogEntry {
    std::string id;
    std::string description;
    std::string wf;
};
std::vector<CatalogEntry> catalog_listing();

// Regularised samples; epsilon <= 0 uses d.epsilon or 4 grid spacings.
SampledField sample(const CatalogDistribution& d, const Grid& g, double epsilon = 0.0);
// Curved indicators built from their exact spectrum with a smooth low-pass; other kinds fall back to sample().
SampledField sample_antialiased(const CatalogDistribution& d, const Grid& g, double epsilon = 0.0);

std::optional<std::function<cplx(const Vec&)>> exact_fourier(const CatalogDistribution& d);

ConicSet exact_wf(const CatalogDistribution& d);
SupportSet support_of(const CatalogDistribution& d);
// Distance from x to the singular support (projection of exact_wf onto the base space).
double singular_support_distance(const CatalogDistribution& d, const Vec& x);

// C = ||f'||_1 + ||f||_1 + |f(0)| for a 1D window f.
double heaviside_ft_bound_constant(const Window& w);

}  // namespace wfkit
