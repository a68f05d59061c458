#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wfkit/conic.hpp"
#include "wfkit/core.hpp"

namespace wfkit {

// In-place radix-2 transform: a_m <- sum_j a_j exp(sign * 2 pi i j m / n), unnormalised.
void fft_inplace(std::vector<cplx>& a, int sign);
// Same along both axes of a row-major n x n array.
void fft2_inplace(std::vector<cplx>& a, int n, int sign);

// Spectrum on the centred frequency grid k_m = m * 2 pi / extent, m in [-n/2, n/2).
struct SpectralField {
    Grid source;
    std::vector<cplx> values;

    int dim() const { return source.dim; }
    int n() const { return source.n; }
    double dk(int axis = 0) const { return 2.0 * kPi / source.extent[axis]; }
    double k(int axis, int idx) const { return (idx - source.n / 2) * dk(axis); }
    Vec k_at(std::size_t flat) const;
    cplx& at(int i, int j = 0) { return values[source.flat(i, j)]; }
    const cplx& at(int i, int j = 0) const { return values[source.flat(i, j)]; }
    double peak() const;
};

// Forward transform with the e^{+ik.x} convention, measure h^d and the grid-origin phase.
SpectralField dft(const SampledField& field);
// Inverse: u(x) = (2 pi)^{-d} sum dk^d e^{-ik.x} u^(k).
SampledField inverse_dft(const SpectralField& spec);

// Smooth radial low-pass: 1 up to 0.7 Nyquist, 0 at and beyond Nyquist.
double antialias_taper(double k_radius, double nyquist);

// Field whose centred-grid spectrum is `spectrum(k)`, optionally multiplied by antialias_taper.
SampledField synthesize(const Grid& g, const std::function<cplx(const Vec&)>& spectrum, bool antialias);

SpectralField localized_spectrum(const SampledField& field, const Window& window);

struct DecayProfile {
    Vec direction;
    double cap_half_angle = 0.0;
    std::vector<double> radii;
    std::vector<double> amplitudes;
    double floor = 0.0;
    double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    double fit_residual = std::numeric_limits<double>::quiet_NaN();
    bool available = false;
    bool decayed = false;  // tail below the amplitude floor
};

// Amplitude at radius tau: max |spec| over nodes within cap of `direction` with
// |k| in [tau/sqrt(ratio), tau*sqrt(ratio)) and |k| below the Nyquist radius.
DecayProfile decay_profile(const SpectralField& spec, const Vec& direction, double cap_half_angle,
                           const std::vector<double>& radii, double radius_ratio, double floor_abs);

// Least-squares slope of log amplitude against log radius over points above the floor.
void fit_exponent(DecayProfile& p);

struct EstimatorParams {
    double window_r1 = 0.0;
    double window_r2 = 0.0;
    WindowProfile window_profile = WindowProfile::CompactGaussian;
    int directions = 64;
    double k_min = 0.0;
    int radius_count = 5;
    double radius_ratio = 2.0;
    double p_thr = 2.0;
    double floor_rel = 1e-5;
    double residual_bound = std::numeric_limits<double>::infinity();

    std::vector<double> radii() const;
    Window window_at(const Vec& center) const;
    void validate(const Grid& g) const;
};

EstimatorParams default_params(const Grid& g);

enum class Decay { Fast, Slow };

struct Classification {
    Decay decay = Decay::Slow;
    bool low_confidence = false;
};

Classification classify_direction(const DecayProfile& p, const EstimatorParams& params);

// Score in [0,1]: 0 at the threshold, 1 at exponent >= 0 or when unavailable.
double exponent_score(const DecayProfile& p, const EstimatorParams& params);

// Profiles for every direction of `dirs` in a single pass over the spectrum.
std::vector<DecayProfile> direction_profiles(const SpectralField& spec, const DirectionSet& dirs,
                                             const EstimatorParams& params, double floor_abs);

// Floor reference: max(spectral peak, max|u| * integral of the window).
double floor_reference(const SampledField& field, const Window& w, const SpectralField& spec);

ConicSet estimate_wf(const SampledField& field, const std::vector<Vec>& base_points, const EstimatorParams& params);

struct FrequencySetResult {
    DirectionSet directions;
    std::vector<bool> in_sigma_a;  // cap-maximum fit
    std::vector<bool> in_sigma_b;  // worst per-ray fit over the cap
    std::vector<double> exponent_a;
    std::vector<double> exponent_b;
    bool variants_agree() const { return in_sigma_a == in_sigma_b; }
};

FrequencySetResult frequency_set(const SampledField& field, const EstimatorParams& params);

// Central-difference derivative along an axis (periodic wrap).
SampledField finite_difference(const SampledField& f, int axis);

}  // namespace wfkit
