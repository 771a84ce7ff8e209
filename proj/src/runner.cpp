#include "superres/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace superres {

namespace {

constexpr std::uint64_t kChunkShots = 1 << 16;

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

void ScanSpec::validate() const {
    if (num_points < 3) {
        throw std::invalid_argument("num_points must be >= 3");
    }
    if (!(std::isfinite(phi_start) && std::isfinite(phi_end) && phi_start < phi_end)) {
        throw std::invalid_argument("phi_start must be < phi_end");
    }
    if (shots_per_point < 1) {
        throw std::invalid_argument("shots_per_point must be >= 1");
    }
    source.validate();
    ifm.validate();
    detector.validate();
}

std::vector<double> ScanSpec::grid() const {
    std::vector<double> phi(num_points);
    double step = (phi_end - phi_start) / static_cast<double>(num_points - 1);
    for (std::uint32_t i = 0; i < num_points; ++i) {
        phi[i] = phi_start + step * static_cast<double>(i);
    }
    return phi;
}

std::vector<double> ScanResult::phis() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(r.phi);
    }
    return out;
}

std::vector<double> ScanResult::values(ObservableKind kind) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(kind == ObservableKind::Parity ? r.parity.value : r.p0.value);
    }
    return out;
}

CountHistogram simulate_shots(const ScanSpec &spec, std::size_t point_index, double phi, std::uint64_t first_shot,
                              std::uint64_t last_shot) {
    CountHistogram hist(spec.detector.overflow_cutoff);
    double mean = detected_mean(spec.source, spec.ifm, phi);
    std::uint64_t base = static_cast<std::uint64_t>(point_index) * spec.shots_per_point;
    for (std::uint64_t shot = first_shot; shot < last_shot; ++shot) {
        RngStream rng(spec.seed, base + shot);
        hist.add(detect_at_mean(mean, spec.detector, rng).fired_elements);
    }
    return hist;
}

ScanResult run_scan(const ScanSpec &spec, const ExecutionOptions &exec) {
    spec.validate();
    auto grid = spec.grid();
    std::uint64_t chunks = (spec.shots_per_point + kChunkShots - 1) / kChunkShots;
    std::size_t tasks = grid.size() * chunks;

    std::vector<CountHistogram> partial(tasks, CountHistogram(spec.detector.overflow_cutoff));
    parallel_for(tasks, exec.threads, [&](std::size_t task) {
        std::size_t point = task / chunks;
        std::uint64_t first = (task % chunks) * kChunkShots;
        std::uint64_t last = std::min(first + kChunkShots, spec.shots_per_point);
        try {
            partial[task] = simulate_shots(spec, point, grid[point], first, last);
        } catch (const std::exception &e) {
            throw std::runtime_error("scan point " + std::to_string(point) + " (phi=" + std::to_string(grid[point]) +
                                     "): " + e.what());
        }
    });

    ScanResult result;
    result.spec = spec;
    result.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ScanRow row;
        row.phi = grid[i];
        row.mean_detected = detected_mean(spec.source, spec.ifm, grid[i]);
        row.histogram = CountHistogram(spec.detector.overflow_cutoff);
        for (std::uint64_t c = 0; c < chunks; ++c) {
            row.histogram += partial[i * chunks + c];
        }
        row.parity = parity_estimate(row.histogram);
        row.p0 = p0_estimate(row.histogram);
        double total_mean = row.mean_detected + spec.detector.dark_mean;
        row.parity_analytic = analytic_parity(total_mean);
        row.p0_analytic = analytic_p0(total_mean);
        result.rows.push_back(std::move(row));
    }
    return result;
}

CurveAnalysis analyze_curve(ObservableKind kind, std::span<const double> phi, std::span<const double> values,
                            std::optional<double> mean_photons) {
    CurveAnalysis out;
    out.kind = kind;
    out.points.reserve(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        SlopeEstimate s = curve_slope(phi, values, i);
        PointUncertainty p{phi[i], s.slope, s.one_sided, false,
                           phase_uncertainty({kind, values[i], 0.0}, s.slope, mean_photons)};
        // A sample with zero observed spread (every shot even, or every shot
        // dark or every shot bright) carries no variance information.
        p.degenerate = observable_spread(kind, values[i]) <= kSpreadFloor;
        out.points.push_back(p);
        if (p.one_sided || p.uncertainty.divergent || p.degenerate) {
            continue;
        }
        if (!out.min_delta_phi || p.uncertainty.delta_phi < *out.min_delta_phi) {
            out.min_delta_phi = p.uncertainty.delta_phi;
            out.phi_at_min = phi[i];
        }
    }
    try {
        out.resolution = resolution_1e(phi, values);
    } catch (const std::exception &) {
        out.resolution.reset();
    }
    return out;
}

double parity_width_estimate(double mean_photons) {
    if (!(mean_photons > 0)) {
        throw std::invalid_argument("mean photon number must be positive");
    }
    return std::sqrt(2.0 / mean_photons);
}

ScanSpec centered_scan(const ScanSpec &base, double mean_photons, double half_widths) {
    double width = parity_width_estimate(mean_photons);
    double half = std::min(half_widths * width, std::numbers::pi);
    // spacing <= width / 10
    auto needed = static_cast<std::uint32_t>(std::ceil(2.0 * half / (width / 10.0) - 1e-9)) + 1;
    std::uint32_t points = std::max(base.num_points, needed);
    if (points % 2 == 0) {
        ++points;
    }
    ScanSpec spec = base;
    spec.source.mean_photons = mean_photons;
    spec.phi_start = std::numbers::pi - half;
    spec.phi_end = std::numbers::pi + half;
    spec.num_points = points;
    return spec;
}

PeakHeightSeries SweepResult::heights(ObservableKind kind) const {
    PeakHeightSeries series;
    series.kind = kind;
    for (const auto &r : rows) {
        const auto &h = kind == ObservableKind::Parity ? r.parity_height : r.p0_height;
        series.points.emplace_back(r.mean_photons, h.value);
    }
    return series;
}

std::uint64_t sweep_row_seed(std::uint64_t seed, std::size_t row) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(row)));
}

SweepResult run_sweep(const ScanSpec &base, std::span<const double> photon_numbers, const SweepOptions &opts) {
    if (photon_numbers.empty()) {
        throw std::invalid_argument("sweep needs at least one photon number");
    }
    for (std::size_t i = 0; i < photon_numbers.size(); ++i) {
        if (!(photon_numbers[i] > 0)) {
            throw std::invalid_argument("sweep photon numbers must be positive");
        }
        if (i > 0 && !(photon_numbers[i] > photon_numbers[i - 1])) {
            throw std::invalid_argument("sweep photon numbers must be strictly increasing");
        }
    }
    SweepResult result;
    for (std::size_t r = 0; r < photon_numbers.size(); ++r) {
        double n = photon_numbers[r];
        ScanSpec spec = centered_scan(base, n, opts.window_half_widths);
        spec.seed = sweep_row_seed(base.seed, r);
        if (opts.visibility) {
            spec.ifm = InterferometerSpec::from_visibility(*opts.visibility, spec.source);
        }
        ScanResult scan = run_scan(spec, opts.exec);
        auto phi = scan.phis();
        auto parity = scan.values(ObservableKind::Parity);
        auto p0 = scan.values(ObservableKind::ZeroPhoton);
        auto pa = analyze_curve(ObservableKind::Parity, phi, parity, n);
        auto za = analyze_curve(ObservableKind::ZeroPhoton, phi, p0, n);
        if (!pa.resolution || !za.resolution) {
            throw OutOfWindowError("sweep row n=" + std::to_string(n) + ": no 1/e crossing inside the scan window");
        }
        const ScanRow &centre = scan.rows[scan.rows.size() / 2];
        SweepRow row;
        row.mean_photons = n;
        row.background_mean = spec.ifm.background_mean;
        row.parity_height = centre.parity;
        row.p0_height = centre.p0;
        row.parity_resolution = *pa.resolution;
        row.p0_resolution = *za.resolution;
        row.parity_min_dphi = pa.min_delta_phi;
        row.p0_min_dphi = za.min_delta_phi;
        row.snl = snl_reference(n);
        result.rows.push_back(row);
    }
    return result;
}

double snl_reference(double mean_photons) {
    if (!(mean_photons > 0)) {
        throw std::invalid_argument("mean photon number must be positive");
    }
    return 1.0 / std::sqrt(mean_photons);
}

}  // namespace superres
