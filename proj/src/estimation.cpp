#include "superres/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace superres {

CountHistogram::CountHistogram(std::uint32_t overflow_cutoff) : counts_(std::size_t{overflow_cutoff} + 1, 0) {
    if (overflow_cutoff == 0) {
        throw std::invalid_argument("overflow_cutoff must be positive");
    }
}

CountHistogram::CountHistogram(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
    if (counts_.size() < 2) {
        throw std::invalid_argument("histogram needs at least one exact bin and the overflow bin");
    }
    for (auto c : counts_) {
        total_ += c;
    }
}

void CountHistogram::add(std::uint64_t fired, std::uint64_t times) {
    std::size_t bin = std::min<std::uint64_t>(fired, counts_.size() - 1);
    counts_[bin] += times;
    total_ += times;
}

CountHistogram &CountHistogram::operator+=(const CountHistogram &other) {
    if (other.counts_.size() != counts_.size()) {
        throw std::invalid_argument("cannot merge histograms with different overflow cutoffs");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    total_ += other.total_;
    return *this;
}

namespace {

void require_shots(const CountHistogram &hist) {
    if (hist.total_shots() == 0) {
        throw std::invalid_argument("empty histogram");
    }
}

}  // namespace

double observable_spread(ObservableKind kind, double value) {
    double var = kind == ObservableKind::Parity ? 1.0 - value * value : value * (1.0 - value);
    return std::sqrt(std::max(var, 0.0));
}

ObservableEstimate parity_estimate(const CountHistogram &hist) {
    require_shots(hist);
    // Integer accumulation keeps the estimate exact and order independent.
    std::int64_t even = 0;
    std::int64_t odd = 0;
    auto counts = hist.counts();
    for (std::size_t n = 0; n < counts.size(); ++n) {
        (n % 2 == 0 ? even : odd) += static_cast<std::int64_t>(counts[n]);
    }
    double shots = static_cast<double>(hist.total_shots());
    double value = static_cast<double>(even - odd) / shots;
    return {ObservableKind::Parity, value, observable_spread(ObservableKind::Parity, value) / std::sqrt(shots)};
}

ObservableEstimate p0_estimate(const CountHistogram &hist) {
    require_shots(hist);
    double shots = static_cast<double>(hist.total_shots());
    double value = static_cast<double>(hist[0]) / shots;
    return {ObservableKind::ZeroPhoton, value,
            observable_spread(ObservableKind::ZeroPhoton, value) / std::sqrt(shots)};
}

ObservableEstimate estimate(ObservableKind kind, const CountHistogram &hist) {
    return kind == ObservableKind::Parity ? parity_estimate(hist) : p0_estimate(hist);
}

SlopeEstimate curve_slope(std::span<const double> phi, std::span<const double> values, std::size_t index) {
    if (phi.size() != values.size()) {
        throw std::invalid_argument("phi and value series differ in length");
    }
    if (phi.size() < 3) {
        throw std::invalid_argument("slope needs at least 3 grid points");
    }
    if (index >= phi.size()) {
        throw std::out_of_range("slope index outside the grid");
    }
    double step = (phi.back() - phi.front()) / static_cast<double>(phi.size() - 1);
    if (!(step > 0)) {
        throw std::invalid_argument("phi grid must be increasing");
    }
    for (std::size_t i = 1; i < phi.size(); ++i) {
        if (std::fabs((phi[i] - phi[i - 1]) - step) > 1e-9 * std::max(1.0, step)) {
            throw std::invalid_argument("phi grid is not uniform");
        }
    }
    if (index == 0) {
        return {(values[1] - values[0]) / step, true};
    }
    if (index == phi.size() - 1) {
        return {(values[index] - values[index - 1]) / step, true};
    }
    return {(values[index + 1] - values[index - 1]) / (2.0 * step), false};
}

UncertaintyResult phase_uncertainty(const ObservableEstimate &est, double slope, std::optional<double> mean_photons) {
    double spread = observable_spread(est.kind, est.value);
    double abs_slope = std::fabs(slope);
    if (abs_slope < kSlopeFloor) {
        if (spread > kSpreadFloor) {
            return {std::numeric_limits<double>::infinity(), true};
        }
        if (!mean_photons || !(*mean_photons > 0)) {
            throw std::invalid_argument("zero spread and zero slope: the limit needs a positive mean photon number");
        }
        return {1.0 / std::sqrt(*mean_photons), false};
    }
    return {spread / abs_slope, false};
}

double resolution_1e(std::span<const double> phi, std::span<const double> values) {
    if (phi.size() != values.size() || phi.size() < 3) {
        throw std::invalid_argument("resolution needs matching phi/value series with >= 3 points");
    }
    auto peak = static_cast<std::size_t>(std::distance(values.begin(), std::max_element(values.begin(), values.end())));
    double top = values[peak];
    if (!(top > 0)) {
        throw std::invalid_argument("curve has no positive maximum");
    }
    double level = top / std::exp(1.0);

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        double t = (values[inside] - level) / (values[inside] - values[outside]);
        return phi[inside] + t * (phi[outside] - phi[inside]);
    };

    std::optional<double> right;
    for (std::size_t j = peak + 1; j < values.size(); ++j) {
        if (values[j] < level) {
            right = crossing(j - 1, j);
            break;
        }
    }
    std::optional<double> left;
    for (std::size_t j = peak; j-- > 0;) {
        if (values[j] < level) {
            left = crossing(j + 1, j);
            break;
        }
    }
    if (!left || !right) {
        throw OutOfWindowError("curve does not fall below max/e on both sides inside the scan window");
    }
    return 0.5 * (*right - *left);
}

PeakHeightFit fit_peak_heights(const PeakHeightSeries &series) {
    const auto &pts = series.points;
    if (pts.size() < 2) {
        throw std::invalid_argument("peak height fit needs at least 2 points");
    }
    for (const auto &[n, h] : pts) {
        if (!std::isfinite(h) || h <= 0) {
            throw std::invalid_argument("peak heights must be positive, got " + std::to_string(h));
        }
        if (!std::isfinite(n)) {
            throw std::invalid_argument("mean photon numbers must be finite");
        }
    }
    bool all_equal = std::all_of(pts.begin(), pts.end(), [&](const auto &p) { return p.first == pts.front().first; });
    if (all_equal) {
        throw std::invalid_argument("rank-deficient fit: all mean photon numbers are equal");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i].first > pts[i - 1].first)) {
            throw std::invalid_argument("mean photon numbers must be strictly increasing");
        }
    }

    double k = static_cast<double>(pts.size());
    double mx = 0, my = 0;
    for (const auto &[n, h] : pts) {
        mx += n;
        my += std::log(h);
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (const auto &[n, h] : pts) {
        sxx += (n - mx) * (n - mx);
        sxy += (n - mx) * (std::log(h) - my);
    }
    PeakHeightFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0;
    for (const auto &[n, h] : pts) {
        double r = std::log(h) - (fit.intercept + fit.slope * n);
        rss += r * r;
    }
    fit.residual_norm = std::sqrt(rss);
    double b = beta(series.kind);
    fit.visibility = 1.0 + 2.0 * fit.slope / b;
    fit.dark_mean = -fit.intercept / b;
    return fit;
}

double peak_height_model(ObservableKind kind, double mean_photons, double visibility, double dark_mean) {
    return std::exp(-beta(kind) * (dark_mean + 0.5 * (1.0 - visibility) * mean_photons));
}

TheoryPoint theory_point(ObservableKind kind, const SourceSpec &source, const InterferometerSpec &ifm,
                         double dark_mean, double phi) {
    TheoryPoint p;
    p.mean = detected_mean(source, ifm, phi) + dark_mean;
    p.value = analytic_observable(kind, p.mean);
    p.slope = -beta(kind) * p.value * detected_mean_slope(source, ifm, phi);
    return p;
}

UncertaintyResult theory_uncertainty(ObservableKind kind, const SourceSpec &source, const InterferometerSpec &ifm,
                                     double dark_mean, double phi) {
    TheoryPoint p = theory_point(kind, source, ifm, dark_mean, phi);
    // 1 - v computed from the mean so the spread survives near the peak
    double one_minus = -std::expm1(-beta(kind) * p.mean);
    double var = kind == ObservableKind::Parity ? one_minus * (1.0 + p.value) : p.value * one_minus;
    double spread = std::sqrt(var);
    double abs_slope = std::fabs(p.slope);
    if (abs_slope < kSlopeFloor) {
        return phase_uncertainty({kind, p.value, 0.0}, p.slope, source.mean_photons);
    }
    return {spread / abs_slope, false};
}

double asymptotic_uncertainty(ObservableKind kind, double mean_photons, double phi) {
    double d = phi - std::numbers::pi;
    double c = kind == ObservableKind::Parity ? 2.0 * mean_photons + 1.0 : 0.5 * mean_photons + 1.0;
    return (1.0 + c * d * d / 8.0) / std::sqrt(mean_photons);
}

}  // namespace superres
