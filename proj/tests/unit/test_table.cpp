#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "superres/commands.hpp"

using namespace superres;

namespace {

RunConfig tiny_scan() {
    return parse_config(R"({
        "command": "scan", "seed": 7,
        "source": {"mean_photons": 200},
        "interferometer": {"visibility": 0.99981},
        "detector": {"dark_mean": 0.0016},
        "scan": {"num_points": 21, "shots_per_point": 3000}
    })");
}

std::string header_lines(const std::string &csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        out += line + "\n";
        if (line.rfind("#", 0) != 0) {
            break;
        }
    }
    return out;
}

std::string read_golden(const std::string &name) {
    std::ifstream in(std::string(SUPERRES_GOLDEN_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(table, NumberFormatting) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(std::uint64_t{100000}), "100000");
    double x = 0.1 + 0.2;
    EXPECT_EQ(parse_number(format_number(x)), x);
    EXPECT_TRUE(std::isinf(parse_number("inf")));
    EXPECT_THROW(parse_number("1.5x"), std::invalid_argument);
}

TEST(table, ScanColumnsMatchDictionary) {
    auto t = cmd_scan(tiny_scan());
    EXPECT_EQ(t.columns, (std::vector<std::string>{"phi_rad", "mean_detected", "parity_est", "parity_err",
                                                   "parity_analytic", "p0_est", "p0_err", "p0_analytic", "shots"}));
    EXPECT_EQ(t.rows.size(), 21u);
    EXPECT_EQ(t.meta("rng"), "philox4x32-10");
    EXPECT_EQ(t.meta("seed"), "7");
    EXPECT_EQ(parse_config(*t.meta("config")), tiny_scan());
}

TEST(table, GoldenHeaderLayout) {
    auto csv = cmd_scan(tiny_scan()).to_csv();
    EXPECT_EQ(header_lines(csv), read_golden("scan_header.csv"));
}

TEST(table, CsvAndJsonParseBack) {
    auto t = cmd_scan(tiny_scan());
    auto from_csv = ResultTable::parse(t.to_csv());
    EXPECT_EQ(from_csv, t);
    auto from_json = ResultTable::parse(t.to_json());
    EXPECT_EQ(from_json.columns, t.columns);
    EXPECT_EQ(from_json.rows, t.rows);
    EXPECT_EQ(from_json.meta("config"), t.meta("config"));
}

TEST(table, ByteIdenticalAcrossThreads) {
    auto cfg = tiny_scan();
    cfg.shots_per_point = 70000;
    auto one = render(cmd_scan(cfg, {1}), OutputFormat::Csv);
    EXPECT_EQ(render(cmd_scan(cfg, {4}), OutputFormat::Csv), one);
    EXPECT_EQ(render(cmd_scan(cfg, {16}), OutputFormat::Csv), one);
}

TEST(table, AnalyzeConstantTableDivergesEverywhere) {
    ResultTable scan = cmd_scan(tiny_scan());
    for (auto &row : scan.rows) {
        row[scan.column("parity_est")] = "0.25";
        row[scan.column("p0_est")] = "0.5";
    }
    auto cfg = tiny_scan();
    cfg.command = "analyze";
    auto t = cmd_analyze(cfg, {}, &scan);
    ASSERT_EQ(t.rows.size(), scan.rows.size());
    for (const auto &row : t.rows) {
        EXPECT_EQ(row[t.column("parity_flag")], "divergent");
        EXPECT_EQ(row[t.column("p0_flag")], "divergent");
        EXPECT_EQ(row[t.column("parity_dphi_rad")], "inf");
    }
    EXPECT_EQ(t.meta("p0_min_dphi_rad"), "nan");
}

TEST(table, AnalyzeFlagsDarkFringeOnAnalyticCurve) {
    ResultTable scan = cmd_scan(tiny_scan());
    for (auto &row : scan.rows) {
        row[scan.column("parity_est")] = row[scan.column("parity_analytic")];
        row[scan.column("p0_est")] = row[scan.column("p0_analytic")];
    }
    auto cfg = tiny_scan();
    cfg.command = "analyze";
    auto t = cmd_analyze(cfg, {}, &scan);
    auto centre = t.rows[t.rows.size() / 2];
    EXPECT_EQ(centre[t.column("parity_flag")], "divergent");
    EXPECT_EQ(centre[t.column("p0_flag")], "divergent");
    EXPECT_EQ(t.rows[t.rows.size() / 2 + 2][t.column("p0_flag")], "ok");
}

TEST(table, FitHeightsFromSweepTable) {
    ResultTable sweep;
    sweep.columns = {"mean_photons", "parity_height", "p0_height"};
    for (double n : {4.6, 25.0, 200.0, 1190.0, 4150.0}) {
        sweep.rows.push_back({format_number(n),
                              format_number(peak_height_model(ObservableKind::Parity, n, 0.99981, 0.0016)),
                              format_number(peak_height_model(ObservableKind::ZeroPhoton, n, 0.99981, 0.0016))});
    }
    auto cfg = parse_config(R"({"command":"fit-heights","source":{"photon_list":[4.6,25,200,1190,4150]}})");
    auto t = cmd_fit_heights(cfg, {}, &sweep);
    ASSERT_EQ(t.rows.size(), 2u);
    for (const auto &row : t.rows) {
        EXPECT_NEAR(parse_number(row[t.column("visibility")]), 0.99981, 1e-9);
        EXPECT_NEAR(parse_number(row[t.column("dark_mean")]), 0.0016, 1e-9);
    }
    EXPECT_NEAR(parse_number(*t.meta("slope_ratio_parity_over_p0")), 2.0, 1e-9);
}

TEST(table, WavelengthFraction) {
    EXPECT_NEAR(wavelength_fraction(std::sqrt(2.0 / 4150)), 286.21271203257496, 1e-9);
    EXPECT_NEAR(wavelength_fraction(2 * std::numbers::pi), 1.0, 1e-15);
}
