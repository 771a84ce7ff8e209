#pragma once

#include <cstdint>

namespace superres {

/// Coherent pulse entering the detector. `mean_photons` is the maximal detected
/// mean (losses in the interferometer and detector already folded in).
struct SourceSpec {
    double mean_photons = 0.0;

    void validate() const;
    bool operator==(const SourceSpec &) const = default;
};

/// Interferometer imperfection expressed as the mean background count at
/// the dark fringe (phi = pi).
struct InterferometerSpec {
    double background_mean = 0.0;

    /// Background that produces visibility `v` for the given source.
    static InterferometerSpec from_visibility(double v, const SourceSpec &source);

    /// (n - n_b) / (n + n_b); 1 when both are zero.
    double visibility(const SourceSpec &source) const;

    void validate() const;
    bool operator==(const InterferometerSpec &) const = default;
};

enum class ObservableKind : std::uint8_t { Parity, ZeroPhoton };

/// Exponent multiplier of the observable: 2 for parity, 1 for zero-photon.
constexpr double beta(ObservableKind kind) {
    return kind == ObservableKind::Parity ? 2.0 : 1.0;
}

const char *observable_name(ObservableKind kind);

/// Mean photon number reaching the detector at phase `phi`:
/// n cos^2(phi/2) + n_b sin^2(phi/2).
double detected_mean(const SourceSpec &source, const InterferometerSpec &ifm, double phi);

/// d(detected_mean)/d(phi) = -(n - n_b) sin(phi) / 2.
double detected_mean_slope(const SourceSpec &source, const InterferometerSpec &ifm, double phi);

/// Poisson probability evaluated in the log domain; stable for large means.
double poisson_pmf(double mean, std::uint64_t n);
double log_poisson_pmf(double mean, std::uint64_t n);

/// Index beyond which the Poisson tail is negligible (mean + 20 sqrt(mean) + 30).
std::uint64_t poisson_tail_cutoff(double mean);

/// <(-1)^N> of a coherent state: exp(-2 mean).
double analytic_parity(double mean);

/// Zero-photon probability exp(-mean).
double analytic_p0(double mean);

/// Expectation value of `kind` for a Poisson photon distribution.
double analytic_observable(ObservableKind kind, double mean);

/// Gaussian approximation of the observable around phi = pi.
double asymptotic_curve(ObservableKind kind, const SourceSpec &source, double phi);

/// Parity or P0 when the detector can only report counts up to `cutoff`;
/// counts at or above the cutoff are reported as the cutoff value.
double truncated_observable(ObservableKind kind, double mean, std::uint64_t cutoff);

}  // namespace superres
