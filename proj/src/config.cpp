#include "superres/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"

namespace superres {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string, std::less<>> kCommands = {"scan", "sweep", "fit-heights", "analyze"};

void reject_unknown(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto &[key, value] : obj.items()) {
        bool ok = false;
        for (const char *a : allowed) {
            ok |= key == a;
        }
        if (!ok) {
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

template <typename T>
T get_field(const json &obj, const std::string &path) {
    try {
        return obj.get<T>();
    } catch (const json::exception &) {
        throw ConfigError("field '" + path + "' has the wrong type");
    }
}

double get_real(const json &obj, const std::string &path) {
    if (!obj.is_number()) {
        throw ConfigError("field '" + path + "' must be a number");
    }
    double v = obj.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError("field '" + path + "' must be finite");
    }
    return v;
}

std::uint64_t get_count(const json &obj, const std::string &path) {
    if (!obj.is_number_unsigned()) {
        throw ConfigError("field '" + path + "' must be a nonnegative integer");
    }
    return obj.get<std::uint64_t>();
}

void validate(RunConfig &c) {
    if (c.mean_photons && !c.photon_list.empty()) {
        throw ConfigError("source: give either mean_photons or photon_list, not both");
    }
    if (c.mean_photons && *c.mean_photons < 0) {
        throw ConfigError("source.mean_photons must be >= 0");
    }
    for (std::size_t i = 0; i < c.photon_list.size(); ++i) {
        if (!(c.photon_list[i] > 0)) {
            throw ConfigError("source.photon_list entries must be positive");
        }
        if (i > 0 && !(c.photon_list[i] > c.photon_list[i - 1])) {
            throw ConfigError("source.photon_list must be strictly increasing");
        }
    }
    if (c.visibility && c.background_mean) {
        throw ConfigError("interferometer: give either visibility or background_mean, not both");
    }
    if (c.visibility && !(*c.visibility > 0 && *c.visibility <= 1)) {
        throw ConfigError("interferometer.visibility: visibility out of range (0, 1]");
    }
    if (c.background_mean && *c.background_mean < 0) {
        throw ConfigError("interferometer.background_mean must be >= 0");
    }
    if (!c.visibility && !c.background_mean) {
        c.visibility = 1.0;
    }
    try {
        c.detector.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("detector: ") + e.what());
    }
    if (c.num_points < 3) {
        throw ConfigError("scan.num_points must be >= 3");
    }
    if (c.shots_per_point < 1) {
        throw ConfigError("scan.shots_per_point must be >= 1");
    }
    if (!(c.window_half_widths > 0)) {
        throw ConfigError("scan.window_half_widths must be positive");
    }
    if (c.phi_start.has_value() != c.phi_end.has_value()) {
        throw ConfigError("scan: phi_start and phi_end must be given together");
    }
    if (c.phi_start && !(*c.phi_start < *c.phi_end)) {
        throw ConfigError("scan: phi_start must be < phi_end");
    }
    if (c.command == "sweep" || c.command == "fit-heights") {
        if (c.phi_start) {
            throw ConfigError("scan.phi_start/phi_end are not used by " + c.command +
                              "; the window is centred automatically");
        }
    } else if (!c.phi_start && c.mean_photons) {
        // Materialize the automatic window so the echo reproduces the run.
        if (*c.mean_photons > 0) {
            double half = std::min(c.window_half_widths * std::sqrt(2.0 / *c.mean_photons), std::numbers::pi);
            c.phi_start = std::numbers::pi - half;
            c.phi_end = std::numbers::pi + half;
        } else {
            c.phi_start = 0.0;
            c.phi_end = 2.0 * std::numbers::pi;
        }
    }
    if (!(c.wavelength_nm > 0)) {
        throw ConfigError("report.wavelength_nm must be positive");
    }
}

}  // namespace

bool is_known_command(std::string_view command) {
    return kCommands.contains(command);
}

RunConfig parse_config(std::string_view text, std::string_view command) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    reject_unknown(doc, "", {"command", "seed", "source", "interferometer", "detector", "scan", "report"});

    RunConfig c;
    if (doc.contains("command")) {
        c.command = get_field<std::string>(doc["command"], "command");
        if (!command.empty() && c.command != command) {
            throw ConfigError("config command '" + c.command + "' does not match '" + std::string(command) + "'");
        }
    } else {
        c.command = std::string(command);
    }
    if (c.command.empty()) {
        throw ConfigError("no command given");
    }
    if (!is_known_command(c.command)) {
        throw ConfigError("unknown command '" + c.command + "'");
    }
    if (doc.contains("seed")) {
        c.seed = get_count(doc["seed"], "seed");
    }
    if (doc.contains("source")) {
        const json &s = doc["source"];
        reject_unknown(s, "source", {"mean_photons", "photon_list"});
        if (s.contains("mean_photons")) {
            c.mean_photons = get_real(s["mean_photons"], "source.mean_photons");
        }
        if (s.contains("photon_list")) {
            if (!s["photon_list"].is_array()) {
                throw ConfigError("field 'source.photon_list' must be an array");
            }
            for (const auto &v : s["photon_list"]) {
                c.photon_list.push_back(get_real(v, "source.photon_list"));
            }
        }
    }
    if (doc.contains("interferometer")) {
        const json &s = doc["interferometer"];
        reject_unknown(s, "interferometer", {"visibility", "background_mean"});
        if (s.contains("visibility")) {
            c.visibility = get_real(s["visibility"], "interferometer.visibility");
        }
        if (s.contains("background_mean")) {
            c.background_mean = get_real(s["background_mean"], "interferometer.background_mean");
        }
    }
    if (doc.contains("detector")) {
        const json &s = doc["detector"];
        reject_unknown(s, "detector", {"num_elements", "dark_mean", "crosstalk_prob", "overflow_cutoff", "saturation"});
        if (s.contains("num_elements")) {
            auto v = get_count(s["num_elements"], "detector.num_elements");
            if (v == 0 || v > UINT32_MAX) {
                throw ConfigError("detector.num_elements out of range");
            }
            c.detector.num_elements = static_cast<std::uint32_t>(v);
        }
        if (s.contains("dark_mean")) {
            c.detector.dark_mean = get_real(s["dark_mean"], "detector.dark_mean");
        }
        if (s.contains("crosstalk_prob")) {
            c.detector.crosstalk_prob = get_real(s["crosstalk_prob"], "detector.crosstalk_prob");
        }
        if (s.contains("overflow_cutoff")) {
            auto v = get_count(s["overflow_cutoff"], "detector.overflow_cutoff");
            if (v == 0 || v > UINT32_MAX) {
                throw ConfigError("detector.overflow_cutoff out of range");
            }
            c.detector.overflow_cutoff = static_cast<std::uint32_t>(v);
        }
        if (s.contains("saturation")) {
            const json &v = s["saturation"];
            if (v.is_boolean()) {
                c.detector.saturation = v.get<bool>();
            } else if (v == "on" || v == "off") {
                c.detector.saturation = v == "on";
            } else {
                throw ConfigError("detector.saturation must be \"on\" or \"off\"");
            }
        }
    }
    if (doc.contains("scan")) {
        const json &s = doc["scan"];
        reject_unknown(s, "scan", {"phi_start", "phi_end", "num_points", "shots_per_point", "window_half_widths"});
        if (s.contains("phi_start")) {
            c.phi_start = get_real(s["phi_start"], "scan.phi_start");
        }
        if (s.contains("phi_end")) {
            c.phi_end = get_real(s["phi_end"], "scan.phi_end");
        }
        if (s.contains("num_points")) {
            auto v = get_count(s["num_points"], "scan.num_points");
            if (v > UINT32_MAX) {
                throw ConfigError("scan.num_points out of range");
            }
            c.num_points = static_cast<std::uint32_t>(v);
        }
        if (s.contains("shots_per_point")) {
            c.shots_per_point = get_count(s["shots_per_point"], "scan.shots_per_point");
        }
        if (s.contains("window_half_widths")) {
            c.window_half_widths = get_real(s["window_half_widths"], "scan.window_half_widths");
        }
    }
    if (doc.contains("report")) {
        const json &s = doc["report"];
        reject_unknown(s, "report", {"wavelength_nm", "format"});
        if (s.contains("wavelength_nm")) {
            c.wavelength_nm = get_real(s["wavelength_nm"], "report.wavelength_nm");
        }
        if (s.contains("format")) {
            auto f = get_field<std::string>(s["format"], "report.format");
            if (f == "csv") {
                c.format = OutputFormat::Csv;
            } else if (f == "json") {
                c.format = OutputFormat::Json;
            } else {
                throw ConfigError("report.format must be csv or json");
            }
        }
    }
    validate(c);
    return c;
}

std::string emit_config(const RunConfig &c) {
    ordered_json doc;
    doc["command"] = c.command;
    doc["seed"] = c.seed;
    ordered_json source = ordered_json::object();
    if (c.mean_photons) {
        source["mean_photons"] = *c.mean_photons;
    }
    if (!c.photon_list.empty()) {
        source["photon_list"] = c.photon_list;
    }
    doc["source"] = source;
    ordered_json ifm = ordered_json::object();
    if (c.visibility) {
        ifm["visibility"] = *c.visibility;
    }
    if (c.background_mean) {
        ifm["background_mean"] = *c.background_mean;
    }
    doc["interferometer"] = ifm;
    doc["detector"] = {
        {"num_elements", c.detector.num_elements},
        {"dark_mean", c.detector.dark_mean},
        {"crosstalk_prob", c.detector.crosstalk_prob},
        {"overflow_cutoff", c.detector.overflow_cutoff},
        {"saturation", c.detector.saturation ? "on" : "off"},
    };
    ordered_json scan = ordered_json::object();
    if (c.phi_start) {
        scan["phi_start"] = *c.phi_start;
        scan["phi_end"] = *c.phi_end;
    }
    scan["num_points"] = c.num_points;
    scan["shots_per_point"] = c.shots_per_point;
    scan["window_half_widths"] = c.window_half_widths;
    doc["scan"] = scan;
    doc["report"] = {
        {"wavelength_nm", c.wavelength_nm},
        {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
    };
    return doc.dump();
}

namespace {

ScanSpec base_spec(const RunConfig &c) {
    ScanSpec spec;
    spec.num_points = c.num_points;
    spec.shots_per_point = c.shots_per_point;
    spec.detector = c.detector;
    spec.seed = c.seed;
    if (c.background_mean) {
        spec.ifm.background_mean = *c.background_mean;
    }
    return spec;
}

}  // namespace

ScanSpec scan_spec(const RunConfig &c) {
    if (!c.mean_photons) {
        throw ConfigError(c.command + " needs source.mean_photons");
    }
    ScanSpec spec = base_spec(c);
    spec.source.mean_photons = *c.mean_photons;
    spec.phi_start = *c.phi_start;
    spec.phi_end = *c.phi_end;
    if (c.visibility) {
        spec.ifm = InterferometerSpec::from_visibility(*c.visibility, spec.source);
    }
    return spec;
}

ScanSpec sweep_base(const RunConfig &c) {
    if (c.photon_list.empty()) {
        throw ConfigError(c.command + " needs source.photon_list");
    }
    return base_spec(c);
}

SweepOptions sweep_options(const RunConfig &c, const ExecutionOptions &exec) {
    SweepOptions opts;
    opts.visibility = c.visibility;
    opts.window_half_widths = c.window_half_widths;
    opts.exec = exec;
    return opts;
}

}  // namespace superres
