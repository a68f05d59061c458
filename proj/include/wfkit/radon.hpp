#pragma once

#include <vector>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"

namespace wfkit {

enum class Interpolation {
    Bilinear,
    Lagrange6,  // tensor 6-point Lagrange
    Sinc,       // exact line integral of the band-limited interpolant of window*field
};

struct RadonParams {
    double line_step = 0.0;  // 0 selects the grid spacing
    int m_max = 3;
    Interpolation interpolation = Interpolation::Lagrange6;
};

struct RadonProfile {
    Vec direction;
    std::vector<double> offsets;
    std::vector<cplx> values;
    std::vector<double> derivative_growth;  // index m = 0..m_max
};

// Offsets covering the projection of the window support, at half the grid spacing.
std::vector<double> default_offsets(const Grid& g, const Window& w, const Vec& nu);

cplx interpolate(const SampledField& f, const Vec& x, Interpolation mode);

RadonProfile radon(const SampledField& field, const Window& w, const Vec& nu, const std::vector<double>& offsets,
                   const RadonParams& params = {});

// Max deviation between the 2D transform of window*field along k nu and the 1D transform
// of the Radon profile, over |k| <= k_fraction * Nyquist, relative to the largest 2D value.
double fourier_slice(const SampledField& field, const Window& w, const Vec& nu, double k_fraction = 0.5,
                     const RadonParams& params = {});

struct RadonWFParams {
    double window_r1 = 0.0;
    double window_r2 = 0.0;
    WindowProfile window_profile = WindowProfile::CompactGaussian;
    int directions = 64;     // over the full circle; lines use the half with angle in [0, pi)
    double coarse_step = 0.0;  // finer offset step of the ratio test; 0 selects the grid spacing
    double locus = 0.0;      // jumps must lie within this distance of nu.x; 0 selects 2 spacings
    double growth_factor = 1.2;  // non-smooth when D_m(ds)/D_m(2ds) > factor * 2^(m-1)
    double relevance = 0.02;     // ignore differences below this fraction of the profile scale
    int m_max = 3;
    Interpolation interpolation = Interpolation::Sinc;

    void validate(const Grid& g) const;
};

RadonWFParams default_radon_params(const Grid& g);

struct SmoothnessTest {
    bool smooth = true;
    int order = 0;          // derivative order that triggered
    double ratio = 0.0;
    double jump_offset = 0.0;
};

// Differences below relevance * max(max|R|, field_scale * line integral of the window) are ignored.
// field_scale <= 0 selects max|field|.
SmoothnessTest radon_smoothness(const SampledField& field, const Vec& x, const Vec& nu, const RadonWFParams& params,
                                double field_scale = 0.0);

ConicSet estimate_wf_pm(const SampledField& field, const std::vector<Vec>& base_points, const RadonWFParams& params);

}  // namespace wfkit
