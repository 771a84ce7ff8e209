#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "superres/photonics.hpp"

namespace superres {

/// Tally of fired-element counts. Bins 0..cutoff-1 are exact; the last bin
/// (index `cutoff`) collects every count >= cutoff and is read as `cutoff`.
class CountHistogram {
   public:
    explicit CountHistogram(std::uint32_t overflow_cutoff);
    explicit CountHistogram(std::vector<std::uint64_t> counts);

    void add(std::uint64_t fired, std::uint64_t times = 1);
    CountHistogram &operator+=(const CountHistogram &other);

    std::uint32_t overflow_cutoff() const { return static_cast<std::uint32_t>(counts_.size() - 1); }
    std::uint64_t total_shots() const { return total_; }
    std::span<const std::uint64_t> counts() const { return counts_; }
    std::uint64_t operator[](std::size_t bin) const { return counts_.at(bin); }

    bool operator==(const CountHistogram &) const = default;

   private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct ObservableEstimate {
    ObservableKind kind = ObservableKind::Parity;
    double value = 0.0;
    double std_error = 0.0;
};

ObservableEstimate parity_estimate(const CountHistogram &hist);
ObservableEstimate p0_estimate(const CountHistogram &hist);
ObservableEstimate estimate(ObservableKind kind, const CountHistogram &hist);

/// Single-shot spread of the observable: sqrt(1 - v^2) for parity,
/// sqrt(v (1 - v)) for the zero-photon projector.
double observable_spread(ObservableKind kind, double value);

struct SlopeEstimate {
    double slope = 0.0;
    bool one_sided = false;
};

/// Central difference on a uniform grid; first-order one-sided difference at
/// either end (flagged).
SlopeEstimate curve_slope(std::span<const double> phi, std::span<const double> values, std::size_t index);

inline constexpr double kSlopeFloor = 1e-12;
inline constexpr double kSpreadFloor = 1e-9;

struct UncertaintyResult {
    double delta_phi = 0.0;  // +inf when divergent
    bool divergent = false;
};

/// Error propagation delta_phi = spread / |slope|. A vanishing slope with a
/// finite spread diverges. When both vanish the phi -> pi limit 1/sqrt(n) is
/// reported, which needs `mean_photons`.
UncertaintyResult phase_uncertainty(const ObservableEstimate &est, double slope,
                                    std::optional<double> mean_photons = std::nullopt);

class OutOfWindowError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Half width at max/e of a sampled peak, linearly interpolated and averaged
/// over both flanks.
double resolution_1e(std::span<const double> phi, std::span<const double> values);

struct PeakHeightSeries {
    ObservableKind kind = ObservableKind::Parity;
    std::vector<std::pair<double, double>> points;  // (mean photons, height)
};

struct PeakHeightFit {
    double visibility = 1.0;
    double dark_mean = 0.0;
    double slope = 0.0;      // d ln h / d n
    double intercept = 0.0;  // ln h at n = 0
    double residual_norm = 0.0;
};

/// Least squares of ln h against n for h = exp[-beta (n_d + (1 - V) n / 2)].
PeakHeightFit fit_peak_heights(const PeakHeightSeries &series);

/// Peak height predicted by the same model.
double peak_height_model(ObservableKind kind, double mean_photons, double visibility, double dark_mean);

/// Closed-form curve for a source through an imperfect interferometer with
/// dark counts added to the detected mean.
struct TheoryPoint {
    double mean = 0.0;
    double value = 0.0;
    double slope = 0.0;
};
TheoryPoint theory_point(ObservableKind kind, const SourceSpec &source, const InterferometerSpec &ifm,
                         double dark_mean, double phi);

/// Exact propagated uncertainty of the analytic curve.
UncertaintyResult theory_uncertainty(ObservableKind kind, const SourceSpec &source, const InterferometerSpec &ifm,
                                     double dark_mean, double phi);

/// Small-offset expansion around pi: (1 + c (phi - pi)^2 / 8) / sqrt(n) with
/// c = 2n + 1 for parity and n/2 + 1 for P0.
double asymptotic_uncertainty(ObservableKind kind, double mean_photons, double phi);

}  // namespace superres
