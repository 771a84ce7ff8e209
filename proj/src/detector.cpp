#include "superres/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superres {

void DetectorSpec::validate() const {
    if (num_elements == 0) {
        throw std::invalid_argument("num_elements must be positive");
    }
    if (!std::isfinite(dark_mean) || dark_mean < 0) {
        throw std::invalid_argument("dark_mean must be finite and >= 0");
    }
    if (!(crosstalk_prob >= 0.0 && crosstalk_prob < 1.0)) {
        throw std::invalid_argument("crosstalk_prob out of range [0, 1)");
    }
    if (overflow_cutoff == 0) {
        throw std::invalid_argument("overflow_cutoff must be positive");
    }
    if (overflow_cutoff > num_elements) {
        throw std::invalid_argument("overflow_cutoff must not exceed num_elements");
    }
}

namespace {

// Sequential-search inversion, one uniform per draw.
std::uint64_t poisson_inversion(double mean, RngStream &rng) {
    double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p == 0.0) {
            break;
        }
    }
    return k;
}

// Hoermann's transformed rejection with squeeze (PTRS), valid for mean >= 10.
std::uint64_t poisson_ptrs(double mean, RngStream &rng) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::uint64_t>(k);
        }
        if (k < 0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace

std::uint64_t sample_poisson(double mean, RngStream &rng) {
    if (mean <= 0.0) {
        return 0;
    }
    return mean < 10.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

std::uint64_t sample_binomial(std::uint64_t trials, double p, RngStream &rng) {
    if (p <= 0.0) {
        return 0;
    }
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        hits += rng.uniform() < p;
    }
    return hits;
}

std::uint64_t sample_incident(double mean, RngStream &rng) {
    return sample_poisson(mean, rng);
}

std::uint64_t apply_dark(std::uint64_t count, const DetectorSpec &spec, RngStream &rng) {
    return count + sample_poisson(spec.dark_mean, rng);
}

std::uint64_t apply_saturation(std::uint64_t primaries, const DetectorSpec &spec, RngStream &rng) {
    const std::uint64_t cells = spec.num_elements;
    if (primaries <= 1) {
        return primaries;
    }
    std::uint64_t fired = 1;
    for (std::uint64_t i = 1; i < primaries && fired < cells; ++i) {
        if (rng.uniform() * static_cast<double>(cells) < static_cast<double>(cells - fired)) {
            ++fired;
        }
    }
    return fired;
}

std::vector<std::uint64_t> occupancy_placements(std::uint32_t primaries, std::uint32_t cells) {
    // stirling[n][k] by the recurrence S(n, k) = k S(n-1, k) + S(n-1, k-1)
    std::vector<std::vector<std::uint64_t>> stirling(primaries + 1, std::vector<std::uint64_t>(primaries + 1, 0));
    stirling[0][0] = 1;
    for (std::uint32_t n = 1; n <= primaries; ++n) {
        for (std::uint32_t k = 1; k <= n; ++k) {
            stirling[n][k] = k * stirling[n - 1][k] + stirling[n - 1][k - 1];
        }
    }
    std::vector<std::uint64_t> out(std::min(primaries, cells) + 1, 0);
    for (std::uint32_t k = 0; k < out.size(); ++k) {
        // falling factorial M (M-1) ... (M-k+1) = C(M, k) k!
        std::uint64_t falling = 1;
        for (std::uint32_t j = 0; j < k; ++j) {
            falling *= cells - j;
        }
        out[k] = falling * stirling[primaries][k];
    }
    return out;
}

std::uint64_t apply_crosstalk(std::uint64_t fired, const DetectorSpec &spec, RngStream &rng) {
    if (spec.crosstalk_prob <= 0.0 || fired >= spec.num_elements) {
        return fired;
    }
    std::uint64_t total = fired + sample_binomial(fired, spec.crosstalk_prob, rng);
    return std::min<std::uint64_t>(total, spec.num_elements);
}

ShotOutcome detect_at_mean(double mean, const DetectorSpec &spec, RngStream &rng) {
    std::uint64_t count = sample_incident(mean, rng);
    count = apply_dark(count, spec, rng);
    if (spec.saturation) {
        count = apply_saturation(count, spec, rng);
    }
    count = apply_crosstalk(count, spec, rng);
    return ShotOutcome{count};
}

ShotOutcome detect(const SourceSpec &source, const InterferometerSpec &ifm, double phi, const DetectorSpec &spec,
                   RngStream &rng) {
    return detect_at_mean(detected_mean(source, ifm, phi), spec, rng);
}

}  // namespace superres
