#pragma once

#include <cstdint>
#include <vector>

#include "superres/photonics.hpp"
#include "superres/rng.hpp"

namespace superres {

/// Silicon photomultiplier: an array of single-photon avalanche cells.
struct DetectorSpec {
    std::uint32_t num_elements = 100;
    double dark_mean = 0.0;       // mean dark avalanches per detection window
    double crosstalk_prob = 0.0;  // per fired cell, single generation
    std::uint32_t overflow_cutoff = 26;
    bool saturation = true;  // off: ideal photon counter with no cell occupancy limit

    void validate() const;
    bool operator==(const DetectorSpec &) const = default;
};

struct ShotOutcome {
    std::uint64_t fired_elements = 0;
};

std::uint64_t sample_poisson(double mean, RngStream &rng);
std::uint64_t sample_binomial(std::uint64_t trials, double p, RngStream &rng);

std::uint64_t sample_incident(double mean, RngStream &rng);
std::uint64_t apply_dark(std::uint64_t count, const DetectorSpec &spec, RngStream &rng);

/// Number of distinct cells hit when `primaries` avalanches land uniformly on
/// the array. Sampled as the sequential occupancy chain: each new event lands
/// on a fresh cell with probability (M - fired) / M.
std::uint64_t apply_saturation(std::uint64_t primaries, const DetectorSpec &spec, RngStream &rng);

/// Exact occupancy law: entry k counts the cells^primaries placements that hit
/// exactly k distinct cells, C(M, k) * S(n, k) * k! with S the Stirling
/// numbers of the second kind. Exact for cells^primaries < 2^64.
std::vector<std::uint64_t> occupancy_placements(std::uint32_t primaries, std::uint32_t cells);

std::uint64_t apply_crosstalk(std::uint64_t fired, const DetectorSpec &spec, RngStream &rng);

/// photons + darks -> occupancy -> cross-talk.
ShotOutcome detect(const SourceSpec &source, const InterferometerSpec &ifm, double phi, const DetectorSpec &spec,
                   RngStream &rng);

/// Same pipeline with the Poisson mean already evaluated.
ShotOutcome detect_at_mean(double mean, const DetectorSpec &spec, RngStream &rng);

}  // namespace superres
