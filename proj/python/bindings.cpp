#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "superres/commands.hpp"
#include "superres/config.hpp"
#include "superres/detector.hpp"
#include "superres/estimation.hpp"
#include "superres/photonics.hpp"
#include "superres/runner.hpp"

namespace py = pybind11;
using namespace superres;

namespace {

void register_photonics(py::module_ &m) {
    py::enum_<ObservableKind>(m, "ObservableKind")
        .value("Parity", ObservableKind::Parity)
        .value("ZeroPhoton", ObservableKind::ZeroPhoton);

    py::class_<SourceSpec>(m, "SourceSpec")
        .def(py::init([](double n) { return SourceSpec{n}; }), py::arg("mean_photons") = 0.0)
        .def_readwrite("mean_photons", &SourceSpec::mean_photons)
        .def("__repr__", [](const SourceSpec &s) { return "SourceSpec(mean_photons=" + format_number(s.mean_photons) + ")"; });

    py::class_<InterferometerSpec>(m, "InterferometerSpec")
        .def(py::init([](double nb) { return InterferometerSpec{nb}; }), py::arg("background_mean") = 0.0)
        .def_static("from_visibility", &InterferometerSpec::from_visibility, py::arg("visibility"), py::arg("source"))
        .def_readwrite("background_mean", &InterferometerSpec::background_mean)
        .def("visibility", &InterferometerSpec::visibility, py::arg("source"));

    m.def("beta", &beta, py::arg("kind"));
    m.def("detected_mean", &detected_mean, py::arg("source"), py::arg("ifm"), py::arg("phi"));
    m.def("poisson_pmf", &poisson_pmf, py::arg("mean"), py::arg("n"));
    m.def("analytic_parity", &analytic_parity, py::arg("mean"));
    m.def("analytic_p0", &analytic_p0, py::arg("mean"));
    m.def("asymptotic_curve", &asymptotic_curve, py::arg("kind"), py::arg("source"), py::arg("phi"));
    m.def("truncated_observable", &truncated_observable, py::arg("kind"), py::arg("mean"), py::arg("cutoff"));
}

void register_detector(py::module_ &m) {
    py::class_<DetectorSpec>(m, "DetectorSpec")
        .def(py::init<>())
        .def_readwrite("num_elements", &DetectorSpec::num_elements)
        .def_readwrite("dark_mean", &DetectorSpec::dark_mean)
        .def_readwrite("crosstalk_prob", &DetectorSpec::crosstalk_prob)
        .def_readwrite("overflow_cutoff", &DetectorSpec::overflow_cutoff)
        .def_readwrite("saturation", &DetectorSpec::saturation)
        .def("validate", &DetectorSpec::validate);

    m.def(
        "detect",
        [](const SourceSpec &source, const InterferometerSpec &ifm, double phi, const DetectorSpec &spec,
           std::uint64_t seed, std::uint64_t stream_index) {
            RngStream rng(seed, stream_index);
            return detect(source, ifm, phi, spec, rng).fired_elements;
        },
        py::arg("source"), py::arg("ifm"), py::arg("phi"), py::arg("detector"), py::arg("seed"),
        py::arg("stream_index"), "Fired-element count of one shot drawn from RngStream(seed, stream_index).");
}

void register_estimation(py::module_ &m) {
    py::class_<CountHistogram>(m, "CountHistogram")
        .def(py::init<std::uint32_t>(), py::arg("overflow_cutoff"))
        .def(py::init<std::vector<std::uint64_t>>(), py::arg("counts"))
        .def("add", &CountHistogram::add, py::arg("fired"), py::arg("times") = 1)
        .def("__iadd__", &CountHistogram::operator+=)
        .def_property_readonly("total_shots", &CountHistogram::total_shots)
        .def_property_readonly("overflow_cutoff", &CountHistogram::overflow_cutoff)
        .def_property_readonly("counts", [](const CountHistogram &h) {
            return std::vector<std::uint64_t>(h.counts().begin(), h.counts().end());
        });

    py::class_<ObservableEstimate>(m, "ObservableEstimate")
        .def(py::init([](ObservableKind k, double v, double e) { return ObservableEstimate{k, v, e}; }),
             py::arg("kind"), py::arg("value"), py::arg("std_error") = 0.0)
        .def_readonly("kind", &ObservableEstimate::kind)
        .def_readonly("value", &ObservableEstimate::value)
        .def_readonly("std_error", &ObservableEstimate::std_error);

    py::class_<UncertaintyResult>(m, "UncertaintyResult")
        .def_readonly("delta_phi", &UncertaintyResult::delta_phi)
        .def_readonly("divergent", &UncertaintyResult::divergent);

    py::class_<PeakHeightFit>(m, "PeakHeightFit")
        .def_readonly("visibility", &PeakHeightFit::visibility)
        .def_readonly("dark_mean", &PeakHeightFit::dark_mean)
        .def_readonly("slope", &PeakHeightFit::slope)
        .def_readonly("intercept", &PeakHeightFit::intercept)
        .def_readonly("residual_norm", &PeakHeightFit::residual_norm);

    m.def("parity_estimate", &parity_estimate, py::arg("hist"));
    m.def("p0_estimate", &p0_estimate, py::arg("hist"));
    m.def(
        "curve_slope",
        [](const std::vector<double> &phi, const std::vector<double> &values, std::size_t index) {
            auto s = curve_slope(phi, values, index);
            return py::make_tuple(s.slope, s.one_sided);
        },
        py::arg("phi"), py::arg("values"), py::arg("index"));
    m.def("phase_uncertainty", &phase_uncertainty, py::arg("estimate"), py::arg("slope"),
          py::arg("mean_photons") = std::nullopt);
    m.def(
        "resolution_1e",
        [](const std::vector<double> &phi, const std::vector<double> &values) { return resolution_1e(phi, values); },
        py::arg("phi"), py::arg("values"));
    m.def(
        "fit_peak_heights",
        [](ObservableKind kind, const std::vector<std::pair<double, double>> &points) {
            return fit_peak_heights(PeakHeightSeries{kind, points});
        },
        py::arg("kind"), py::arg("points"));
    m.def("peak_height_model", &peak_height_model, py::arg("kind"), py::arg("mean_photons"), py::arg("visibility"),
          py::arg("dark_mean"));
    m.def("theory_uncertainty", &theory_uncertainty, py::arg("kind"), py::arg("source"), py::arg("ifm"),
          py::arg("dark_mean"), py::arg("phi"));
    m.def("asymptotic_uncertainty", &asymptotic_uncertainty, py::arg("kind"), py::arg("mean_photons"), py::arg("phi"));
}

// Scans and sweeps are exposed through the table layer so Python sees the
// same columns the CLI writes.
void register_runner(py::module_ &m) {
    m.def("snl_reference", &snl_reference, py::arg("mean_photons"));

    py::class_<ResultTable>(m, "ResultTable")
        .def_readonly("metadata", &ResultTable::metadata)
        .def_readonly("columns", &ResultTable::columns)
        .def_readonly("rows", &ResultTable::rows)
        .def("column", &ResultTable::numeric_column, py::arg("name"))
        .def("meta", &ResultTable::meta, py::arg("key"))
        .def("to_csv", &ResultTable::to_csv)
        .def("to_json", &ResultTable::to_json)
        .def_static("parse", &ResultTable::parse, py::arg("text"));

    m.def("parse_config", [](const std::string &text) { return emit_config(parse_config(text)); }, py::arg("text"),
          "Validate a config document and return its fully materialized echo.");
    m.def(
        "run",
        [](const std::string &config_text, unsigned threads, const ResultTable *input) {
            RunConfig cfg = parse_config(config_text);
            py::gil_scoped_release release;
            return run_command(cfg, ExecutionOptions{threads}, input);
        },
        py::arg("config"), py::arg("threads") = 1, py::arg("input") = nullptr,
        "Run the command named in a config document and return its result table.");

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monte Carlo simulation of super-resolved parity and zero-photon phase measurements";
    register_photonics(m);
    register_detector(m);
    register_estimation(m);
    register_runner(m);
    m.attr("__version__") = kToolVersion;
    m.attr("RNG_ALGORITHM") = kRngAlgorithm;
}
