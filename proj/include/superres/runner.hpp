#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "superres/detector.hpp"
#include "superres/estimation.hpp"
#include "superres/photonics.hpp"

namespace superres {

struct ExecutionOptions {
    unsigned threads = 1;  // 0 selects std::thread::hardware_concurrency()
};

struct ScanSpec {
    double phi_start = 0.0;
    double phi_end = 2.0 * std::numbers::pi;
    std::uint32_t num_points = 201;
    std::uint64_t shots_per_point = 100000;
    SourceSpec source;
    InterferometerSpec ifm;
    DetectorSpec detector;
    std::uint64_t seed = 1;

    void validate() const;
    std::vector<double> grid() const;
    bool operator==(const ScanSpec &) const = default;
};

struct ScanRow {
    double phi = 0.0;
    double mean_detected = 0.0;  // n cos^2 + n_b sin^2, without dark counts
    CountHistogram histogram{1};
    ObservableEstimate parity;
    ObservableEstimate p0;
    double parity_analytic = 0.0;  // evaluated at mean_detected + dark_mean
    double p0_analytic = 0.0;
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanRow> rows;

    std::vector<double> phis() const;
    std::vector<double> values(ObservableKind kind) const;
};

/// Every shot draws from RngStream(seed, point_index * shots_per_point + shot_index),
/// so the result is bitwise independent of the thread count.
ScanResult run_scan(const ScanSpec &spec, const ExecutionOptions &exec = {});

/// Histogram of one scan point built from the half-open shot range [first, last).
CountHistogram simulate_shots(const ScanSpec &spec, std::size_t point_index, double phi, std::uint64_t first_shot,
                              std::uint64_t last_shot);

struct PointUncertainty {
    double phi = 0.0;
    double slope = 0.0;
    bool one_sided = false;
    bool degenerate = false;  // observed spread vanished
    UncertaintyResult uncertainty;
};

struct CurveAnalysis {
    ObservableKind kind = ObservableKind::Parity;
    std::vector<PointUncertainty> points;
    std::optional<double> resolution;     // empty when no 1/e crossing in the window
    std::optional<double> min_delta_phi;  // interior, finite, non-degenerate points only
    double phi_at_min = 0.0;
};

/// Propagated uncertainty at every grid point plus the 1/e resolution and
/// the smallest finite uncertainty of a sampled curve.
CurveAnalysis analyze_curve(ObservableKind kind, std::span<const double> phi, std::span<const double> values,
                            std::optional<double> mean_photons = std::nullopt);

/// Expected parity half width sqrt(2/n).
double parity_width_estimate(double mean_photons);

/// Grid centred on pi spanning +-half_widths * sqrt(2/n) (capped at pi), with an
/// odd point count and spacing no coarser than a tenth of the parity width.
ScanSpec centered_scan(const ScanSpec &base, double mean_photons, double half_widths = 5.0);

struct SweepOptions {
    std::optional<double> visibility;  // when set, n_b is derived per photon number
    double window_half_widths = 5.0;
    ExecutionOptions exec;
};

struct SweepRow {
    double mean_photons = 0.0;
    double background_mean = 0.0;
    ObservableEstimate parity_height;
    ObservableEstimate p0_height;
    double parity_resolution = 0.0;
    double p0_resolution = 0.0;
    std::optional<double> parity_min_dphi;
    std::optional<double> p0_min_dphi;
    double snl = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;

    PeakHeightSeries heights(ObservableKind kind) const;
};

SweepResult run_sweep(const ScanSpec &base, std::span<const double> photon_numbers, const SweepOptions &opts = {});

/// Seed used for the scan at `row` of a sweep.
std::uint64_t sweep_row_seed(std::uint64_t seed, std::size_t row);

/// Shot-noise limit 1/sqrt(n).
double snl_reference(double mean_photons);

}  // namespace superres
