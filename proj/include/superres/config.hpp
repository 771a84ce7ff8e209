#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "superres/detector.hpp"
#include "superres/runner.hpp"

namespace superres {

class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Fully materialized run configuration. Exactly one of `visibility` /
/// `background_mean` is set after parsing.
struct RunConfig {
    std::string command;
    std::optional<double> mean_photons;
    std::vector<double> photon_list;
    std::optional<double> visibility;
    std::optional<double> background_mean;
    DetectorSpec detector;
    std::optional<double> phi_start;
    std::optional<double> phi_end;
    double window_half_widths = 5.0;
    std::uint32_t num_points = 201;
    std::uint64_t shots_per_point = 100000;
    std::uint64_t seed = 1;
    double wavelength_nm = 780.0;
    OutputFormat format = OutputFormat::Csv;

    bool operator==(const RunConfig &) const = default;
};

/// Strict parse of a JSON config document: unknown keys are errors, all
/// defaults are filled in. `command` fills in a missing "command" key and
/// must agree with it when both are present.
RunConfig parse_config(std::string_view text, std::string_view command = {});

/// Single-line JSON echo; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig &config);

/// Scan window, source and imperfections for the single-n commands.
ScanSpec scan_spec(const RunConfig &config);
ScanSpec sweep_base(const RunConfig &config);
SweepOptions sweep_options(const RunConfig &config, const ExecutionOptions &exec);

bool is_known_command(std::string_view command);

}  // namespace superres
