#include "superres/commands.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "superres/rng.hpp"

namespace superres {

namespace {

ResultTable with_header(const RunConfig &config) {
    ResultTable t;
    t.metadata = {
        {"tool", std::string("superres ") + kToolVersion},
        {"command", config.command},
        {"rng", kRngAlgorithm},
        {"seed", format_number(config.seed)},
        {"config", emit_config(config)},
    };
    return t;
}

std::string optional_number(const std::optional<double> &v) {
    return v ? format_number(*v) : "nan";
}

std::string fraction_cell(const std::optional<double> &phase) {
    return phase ? format_number(wavelength_fraction(*phase)) : "nan";
}

std::string nm_cell(const std::optional<double> &phase, double wavelength_nm) {
    return phase ? format_number(wavelength_nm / wavelength_fraction(*phase)) : "nan";
}

const char *flag(const PointUncertainty &p) {
    if (p.uncertainty.divergent) {
        return "divergent";
    }
    if (p.degenerate) {
        return "degenerate";
    }
    return p.one_sided ? "one_sided" : "ok";
}

}  // namespace

double wavelength_fraction(double phase_rad) {
    return 2.0 * std::numbers::pi / phase_rad;
}

ResultTable cmd_scan(const RunConfig &config, const ExecutionOptions &exec) {
    ScanResult scan = run_scan(scan_spec(config), exec);
    ResultTable t = with_header(config);
    t.columns = {"phi_rad", "mean_detected", "parity_est", "parity_err", "parity_analytic",
                 "p0_est",  "p0_err",        "p0_analytic", "shots"};
    for (const auto &r : scan.rows) {
        t.rows.push_back({format_number(r.phi), format_number(r.mean_detected), format_number(r.parity.value),
                          format_number(r.parity.std_error), format_number(r.parity_analytic),
                          format_number(r.p0.value), format_number(r.p0.std_error), format_number(r.p0_analytic),
                          format_number(r.histogram.total_shots())});
    }
    return t;
}

ResultTable cmd_sweep(const RunConfig &config, const ExecutionOptions &exec) {
    SweepResult sweep = run_sweep(sweep_base(config), config.photon_list, sweep_options(config, exec));
    ResultTable t = with_header(config);
    t.metadata.emplace_back("wavelength_nm", format_number(config.wavelength_nm));
    t.columns = {"mean_photons",
                 "background_mean",
                 "parity_height",
                 "parity_height_err",
                 "p0_height",
                 "p0_height_err",
                 "parity_resolution_rad",
                 "parity_resolution_X",
                 "parity_resolution_nm",
                 "p0_resolution_rad",
                 "p0_resolution_X",
                 "p0_resolution_nm",
                 "parity_min_dphi_rad",
                 "parity_sensitivity_X",
                 "parity_sensitivity_nm",
                 "p0_min_dphi_rad",
                 "p0_sensitivity_X",
                 "p0_sensitivity_nm",
                 "snl_rad",
                 "snl_X"};
    double wl = config.wavelength_nm;
    for (const auto &r : sweep.rows) {
        t.rows.push_back({
            format_number(r.mean_photons),
            format_number(r.background_mean),
            format_number(r.parity_height.value),
            format_number(r.parity_height.std_error),
            format_number(r.p0_height.value),
            format_number(r.p0_height.std_error),
            format_number(r.parity_resolution),
            fraction_cell(r.parity_resolution),
            nm_cell(r.parity_resolution, wl),
            format_number(r.p0_resolution),
            fraction_cell(r.p0_resolution),
            nm_cell(r.p0_resolution, wl),
            optional_number(r.parity_min_dphi),
            fraction_cell(r.parity_min_dphi),
            nm_cell(r.parity_min_dphi, wl),
            optional_number(r.p0_min_dphi),
            fraction_cell(r.p0_min_dphi),
            nm_cell(r.p0_min_dphi, wl),
            format_number(r.snl),
            fraction_cell(r.snl),
        });
    }
    return t;
}

ResultTable cmd_fit_heights(const RunConfig &config, const ExecutionOptions &exec, const ResultTable *input) {
    ResultTable sweep_table;
    if (input == nullptr) {
        sweep_table = cmd_sweep(config, exec);
        input = &sweep_table;
    }
    auto n = input->numeric_column("mean_photons");
    ResultTable t = with_header(config);
    t.columns = {"observable", "beta", "visibility", "dark_mean", "slope", "intercept", "residual_norm", "points"};
    double slopes[2] = {0, 0};
    int i = 0;
    for (ObservableKind kind : {ObservableKind::Parity, ObservableKind::ZeroPhoton}) {
        auto h = input->numeric_column(std::string(observable_name(kind)) + "_height");
        PeakHeightSeries series{kind, {}};
        for (std::size_t j = 0; j < n.size(); ++j) {
            series.points.emplace_back(n[j], h[j]);
        }
        PeakHeightFit fit = fit_peak_heights(series);
        slopes[i++] = fit.slope;
        t.rows.push_back({observable_name(kind), format_number(beta(kind)), format_number(fit.visibility),
                          format_number(fit.dark_mean), format_number(fit.slope), format_number(fit.intercept),
                          format_number(fit.residual_norm), format_number(static_cast<std::uint64_t>(n.size()))});
    }
    t.metadata.emplace_back("slope_ratio_parity_over_p0", format_number(slopes[0] / slopes[1]));
    return t;
}

ResultTable cmd_analyze(const RunConfig &config, const ExecutionOptions &exec, const ResultTable *input) {
    ResultTable scan_table;
    if (input == nullptr) {
        scan_table = cmd_scan(config, exec);
        input = &scan_table;
    }
    auto phi = input->numeric_column("phi_rad");
    auto parity = analyze_curve(ObservableKind::Parity, phi, input->numeric_column("parity_est"), config.mean_photons);
    auto p0 = analyze_curve(ObservableKind::ZeroPhoton, phi, input->numeric_column("p0_est"), config.mean_photons);

    ResultTable t = with_header(config);
    for (const auto *a : {&parity, &p0}) {
        std::string name = observable_name(a->kind);
        t.metadata.emplace_back(name + "_resolution_rad", optional_number(a->resolution));
        t.metadata.emplace_back(name + "_resolution_X", fraction_cell(a->resolution));
        t.metadata.emplace_back(name + "_min_dphi_rad", optional_number(a->min_delta_phi));
        t.metadata.emplace_back(name + "_sensitivity_X", fraction_cell(a->min_delta_phi));
    }
    t.columns = {"phi_rad", "parity_slope", "parity_dphi_rad", "parity_flag", "p0_slope", "p0_dphi_rad", "p0_flag"};
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto &a = parity.points[i];
        const auto &b = p0.points[i];
        t.rows.push_back({format_number(phi[i]), format_number(a.slope), format_number(a.uncertainty.delta_phi),
                          flag(a), format_number(b.slope), format_number(b.uncertainty.delta_phi), flag(b)});
    }
    return t;
}

ResultTable run_command(const RunConfig &config, const ExecutionOptions &exec, const ResultTable *input) {
    if (config.command == "scan") {
        return cmd_scan(config, exec);
    }
    if (config.command == "sweep") {
        return cmd_sweep(config, exec);
    }
    if (config.command == "fit-heights") {
        return cmd_fit_heights(config, exec, input);
    }
    if (config.command == "analyze") {
        return cmd_analyze(config, exec, input);
    }
    throw ConfigError("unknown command '" + config.command + "'");
}

std::string render(const ResultTable &table, OutputFormat format) {
    return format == OutputFormat::Csv ? table.to_csv() : table.to_json();
}

}  // namespace superres
