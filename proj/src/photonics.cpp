#include "superres/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace superres {

void SourceSpec::validate() const {
    if (!std::isfinite(mean_photons) || mean_photons < 0) {
        throw std::invalid_argument("mean_photons must be finite and >= 0, got " + std::to_string(mean_photons));
    }
}

InterferometerSpec InterferometerSpec::from_visibility(double v, const SourceSpec &source) {
    if (!(v > 0.0 && v <= 1.0)) {
        throw std::invalid_argument("visibility out of range (0, 1]: " + std::to_string(v));
    }
    source.validate();
    return InterferometerSpec{source.mean_photons * (1.0 - v) / (1.0 + v)};
}

double InterferometerSpec::visibility(const SourceSpec &source) const {
    double total = source.mean_photons + background_mean;
    if (total == 0.0) {
        return 1.0;
    }
    return (source.mean_photons - background_mean) / total;
}

void InterferometerSpec::validate() const {
    if (!std::isfinite(background_mean) || background_mean < 0) {
        throw std::invalid_argument("background_mean must be finite and >= 0");
    }
}

const char *observable_name(ObservableKind kind) {
    return kind == ObservableKind::Parity ? "parity" : "p0";
}

double detected_mean(const SourceSpec &source, const InterferometerSpec &ifm, double phi) {
    double c = std::cos(0.5 * phi);
    double s = std::sin(0.5 * phi);
    return source.mean_photons * c * c + ifm.background_mean * s * s;
}

double detected_mean_slope(const SourceSpec &source, const InterferometerSpec &ifm, double phi) {
    return -0.5 * (source.mean_photons - ifm.background_mean) * std::sin(phi);
}

double log_poisson_pmf(double mean, std::uint64_t n) {
    if (mean == 0.0) {
        return n == 0 ? 0.0 : -INFINITY;
    }
    double k = static_cast<double>(n);
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

double poisson_pmf(double mean, std::uint64_t n) {
    return std::exp(log_poisson_pmf(mean, n));
}

std::uint64_t poisson_tail_cutoff(double mean) {
    return static_cast<std::uint64_t>(std::ceil(mean + 20.0 * std::sqrt(mean) + 30.0));
}

double analytic_parity(double mean) {
    return std::exp(-2.0 * mean);
}

double analytic_p0(double mean) {
    return std::exp(-mean);
}

double analytic_observable(ObservableKind kind, double mean) {
    return std::exp(-beta(kind) * mean);
}

double asymptotic_curve(ObservableKind kind, const SourceSpec &source, double phi) {
    double d = phi - std::numbers::pi;
    return std::exp(-beta(kind) * source.mean_photons * d * d / 4.0);
}

double truncated_observable(ObservableKind kind, double mean, std::uint64_t cutoff) {
    if (cutoff == 0) {
        throw std::invalid_argument("cutoff must be positive");
    }
    if (kind == ObservableKind::ZeroPhoton) {
        return poisson_pmf(mean, 0);
    }
    // Head and tail are summed separately so the tail keeps full relative
    // precision even when it is far below 1e-16.
    double head = 0.0;
    for (std::uint64_t n = 0; n < cutoff; ++n) {
        double p = poisson_pmf(mean, n);
        head += (n % 2 == 0) ? p : -p;
    }
    double tail = 0.0;
    std::uint64_t last = std::max(poisson_tail_cutoff(mean), cutoff);
    for (std::uint64_t n = cutoff; n <= last; ++n) {
        tail += poisson_pmf(mean, n);
    }
    return head + ((cutoff % 2 == 0) ? tail : -tail);
}

}  // namespace superres
