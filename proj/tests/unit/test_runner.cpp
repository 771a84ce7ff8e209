#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "superres/runner.hpp"

using namespace superres;

namespace {

constexpr double kPi = std::numbers::pi;

ScanSpec small_scan(double n, std::uint64_t shots) {
    ScanSpec spec;
    spec.source.mean_photons = n;
    spec.num_points = 41;
    spec.shots_per_point = shots;
    double w = parity_width_estimate(n);
    spec.phi_start = kPi - 4 * w;
    spec.phi_end = kPi + 4 * w;
    spec.seed = 2024;
    return spec;
}

}  // namespace

TEST(runner, ScanSpecValidation) {
    ScanSpec s;
    s.num_points = 2;
    EXPECT_THROW(run_scan(s), std::invalid_argument);
    s = {};
    s.phi_start = 1;
    s.phi_end = 1;
    EXPECT_THROW(run_scan(s), std::invalid_argument);
    s = {};
    s.shots_per_point = 0;
    EXPECT_THROW(run_scan(s), std::invalid_argument);
}

TEST(runner, VacuumScan) {
    ScanSpec s;
    s.num_points = 11;
    s.shots_per_point = 500;
    auto r = run_scan(s);
    ASSERT_EQ(r.rows.size(), 11u);
    for (const auto &row : r.rows) {
        EXPECT_DOUBLE_EQ(row.parity.value, 1.0);
        EXPECT_DOUBLE_EQ(row.p0.value, 1.0);
        EXPECT_EQ(row.histogram.total_shots(), 500u);
    }
}

TEST(runner, IdealScanTracksAnalyticParity) {
    ScanSpec s = small_scan(25, 100000);
    s.detector.num_elements = 1000000;
    s.detector.overflow_cutoff = 1000;
    s.detector.saturation = false;
    auto r = run_scan(s, {4});
    double worst = 0;
    for (const auto &row : r.rows) {
        double se = std::sqrt(std::max(1 - row.parity_analytic * row.parity_analytic, 1e-12) / s.shots_per_point);
        worst = std::max(worst, std::fabs(row.parity.value - row.parity_analytic) / se);
    }
    EXPECT_LT(worst, 5.0);
}

TEST(runner, ScanIndependentOfThreadCount) {
    ScanSpec s = small_scan(200, 150000);  // several shot chunks per point
    s.ifm = InterferometerSpec::from_visibility(0.99981, s.source);
    s.detector.dark_mean = 0.0016;
    s.detector.crosstalk_prob = 0.02;
    auto one = run_scan(s, {1});
    for (unsigned t : {3u, 8u}) {
        auto many = run_scan(s, {t});
        ASSERT_EQ(one.rows.size(), many.rows.size());
        for (std::size_t i = 0; i < one.rows.size(); ++i) {
            EXPECT_EQ(one.rows[i].histogram, many.rows[i].histogram);
            EXPECT_EQ(one.rows[i].parity.value, many.rows[i].parity.value);
        }
    }
}

TEST(runner, ShotChunkingMergesExactly) {
    ScanSpec s = small_scan(30, 9000);
    s.detector.dark_mean = 0.1;
    auto whole = simulate_shots(s, 3, 2.9, 0, 9000);
    for (auto cuts : {std::vector<std::uint64_t>{0, 1, 9000}, {0, 4500, 9000}, {0, 17, 4000, 8999, 9000}}) {
        CountHistogram merged(s.detector.overflow_cutoff);
        for (std::size_t i = cuts.size() - 1; i > 0; --i) {  // merge back to front
            merged += simulate_shots(s, 3, 2.9, cuts[i - 1], cuts[i]);
        }
        EXPECT_EQ(merged, whole);
    }
}

TEST(runner, CenteredScanGrid) {
    ScanSpec base;
    for (double n : {4.6, 25.0, 4150.0}) {
        auto s = centered_scan(base, n);
        EXPECT_EQ(s.num_points % 2, 1u);
        double step = (s.phi_end - s.phi_start) / (s.num_points - 1);
        EXPECT_LE(step, parity_width_estimate(n) / 10 + 1e-15);
        EXPECT_NEAR(s.grid()[s.num_points / 2], kPi, 1e-12);
        EXPECT_LE(s.phi_end - kPi, kPi + 1e-12);
    }
}

TEST(runner, SnlReference) {
    EXPECT_NEAR(snl_reference(200), 0.070710678118654752, 1e-15);
    EXPECT_DOUBLE_EQ(snl_reference(1), 1.0);
    EXPECT_NEAR(snl_reference(4200), 0.015430334996209191, 1e-15);
    EXPECT_THROW(snl_reference(0), std::invalid_argument);
}

TEST(runner, AnalyzeCurveFlagsAndMinimum) {
    std::vector<double> phi, v;
    for (int i = 0; i <= 100; ++i) {
        phi.push_back(kPi - 0.5 + i * 0.01);
        v.push_back(analytic_p0(detected_mean(SourceSpec{200}, {}, phi.back())));
    }
    auto a = analyze_curve(ObservableKind::ZeroPhoton, phi, v, 200.0);
    EXPECT_TRUE(a.points.front().one_sided);
    EXPECT_TRUE(a.points.back().one_sided);
    ASSERT_TRUE(a.min_delta_phi.has_value());
    EXPECT_NEAR(*a.min_delta_phi, snl_reference(200), 0.01 * snl_reference(200));
    ASSERT_TRUE(a.resolution.has_value());
    EXPECT_NEAR(*a.resolution, 2 / std::sqrt(200.0), 0.01);
}

TEST(runner, DegenerateSamplesExcludedFromMinimum) {
    std::vector<double> phi{0, 1, 2, 3, 4}, v{0, 0, 0.5, 0, 0};
    auto a = analyze_curve(ObservableKind::ZeroPhoton, phi, v, 10.0);
    EXPECT_TRUE(a.points[1].degenerate);
    EXPECT_FALSE(a.points[2].degenerate);
    EXPECT_TRUE(a.points[2].uncertainty.divergent);
    EXPECT_FALSE(a.min_delta_phi.has_value());
}

TEST(runner, SweepHeightsDegrade) {
    ScanSpec base;
    base.shots_per_point = 20000;
    base.detector.dark_mean = 0.0016;
    std::vector<double> photons{25, 200, 1190, 4150};
    SweepOptions opts;
    opts.visibility = 0.99981;
    opts.exec.threads = 4;
    auto sweep = run_sweep(base, photons, opts);
    ASSERT_EQ(sweep.rows.size(), photons.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const auto &r = sweep.rows[i];
        EXPECT_LT(r.parity_height.value, r.p0_height.value);
        EXPECT_GT(r.parity_height.value, 0.0);
        EXPECT_LE(r.p0_height.value, 1.0);
        if (i > 0) {
            EXPECT_LT(r.parity_height.value, sweep.rows[i - 1].parity_height.value);
            EXPECT_LT(r.p0_height.value, sweep.rows[i - 1].p0_height.value);
        }
    }
}

TEST(runner, SweepRejectsBadPhotonLists) {
    ScanSpec base;
    std::vector<double> empty, unsorted{10, 5}, nonpositive{0, 5};
    EXPECT_THROW(run_sweep(base, empty), std::invalid_argument);
    EXPECT_THROW(run_sweep(base, unsorted), std::invalid_argument);
    EXPECT_THROW(run_sweep(base, nonpositive), std::invalid_argument);
}

TEST(runner, ZeroPhotonReachesShotNoiseWhenIdeal) {
    for (double n : {25.0, 200.0}) {
        ScanSpec base;
        base.shots_per_point = 1000000;
        base.detector.num_elements = 1000000;
        base.detector.overflow_cutoff = 26;
        base.detector.saturation = false;
        base.seed = 99;
        base.num_points = 3;  // let the width/10 spacing rule pick the count
        // the minimum lies within one parity width of the peak
        ScanSpec s = centered_scan(base, n, 1.5);
        auto scan = run_scan(s, {0});
        auto a = analyze_curve(ObservableKind::ZeroPhoton, scan.phis(), scan.values(ObservableKind::ZeroPhoton), n);
        ASSERT_TRUE(a.min_delta_phi.has_value());
        EXPECT_NEAR(*a.min_delta_phi / snl_reference(n), 1.0, 0.10) << "n=" << n;
    }
}
