#include <gtest/gtest.h>

#include <set>

#include "gyrofdi/montecarlo.hpp"
#include "gyrofdi/seeds.hpp"

using namespace gyrofdi;

TEST(Seeds, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {0ull, 1ull, 2ull}) {
        for (std::size_t i = 0; i < 1000; ++i) seen.insert(run_seed(base, i));
    }
    EXPECT_EQ(seen.size(), 3000u);
    EXPECT_EQ(run_seed(7, 3), derive_seed(7, 3));
    // splitmix64 reference value for input 0
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Stats, SummarizeOracle) {
    const Stats s = summarize({4, 1, 3, 2, std::nan(""), 5});
    EXPECT_EQ(s.n, 5u);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.std, std::sqrt(2.5));
    EXPECT_DOUBLE_EQ(s.median, 3.0);
    EXPECT_DOUBLE_EQ(s.q01, 1.04);
    EXPECT_DOUBLE_EQ(s.q99, 4.96);
    EXPECT_EQ(summarize({}).n, 0u);
}

TEST(Sampling, NoneIsIdentityAndTableThreeMatchesSigmas) {
    ScenarioConfig c;
    const ScenarioConfig same = sample_initial(c, UncertaintySpec::none(), 5);
    EXPECT_EQ(same.primary.a, c.primary.a);
    EXPECT_EQ(same.omega0, c.omega0);

    const UncertaintySpec u = UncertaintySpec::reference();
    EXPECT_DOUBLE_EQ(u.sigma_a, 15000.0);
    EXPECT_DOUBLE_EQ(UncertaintySpec::reference_metre().sigma_a, 15.0);
    const int n = 20000;
    double sa = 0, sw = 0;
    for (int i = 0; i < n; ++i) {
        const ScenarioConfig s = sample_initial(c, u, derive_seed(99, i));
        sa += (s.primary.a - c.primary.a) * (s.primary.a - c.primary.a);
        sw += (s.omega0.x() - c.omega0.x()) * (s.omega0.x() - c.omega0.x());
    }
    EXPECT_NEAR(std::sqrt(sa / n) / u.sigma_a, 1.0, 0.03);
    EXPECT_NEAR(std::sqrt(sw / n) / u.sigma_omega0.x(), 1.0, 0.03);
    UncertaintySpec bad;
    bad.sigma_e = -1;
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

TEST(Campaign, IndependentOfWorkerCount) {
    ScenarioConfig c;
    c.fault = parse_fault("sx=0.5@56");
    CampaignOptions o;
    o.runs = 12;
    o.base_seed = 77;
    o.workers = 1;
    const CampaignResult a = run_campaign(c, UncertaintySpec::reference(), o);
    o.workers = 4;
    const CampaignResult b = run_campaign(c, UncertaintySpec::reference(), o);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
        EXPECT_EQ(a.runs[i].t_fd, b.runs[i].t_fd);
        EXPECT_EQ(a.runs[i].point_estimate, b.runs[i].point_estimate);
    }
    EXPECT_EQ(a.t_fd.mean, b.t_fd.mean);
    EXPECT_EQ(a.envelope.size(), b.envelope.size());
    EXPECT_EQ(a.envelope.back().std, b.envelope.back().std);
    EXPECT_EQ(a.detection_rate, 1.0);
}

TEST(Campaign, ProgressAndZeroRuns) {
    CampaignOptions o;
    o.runs = 3;
    std::size_t calls = 0;
    o.progress = [&](std::size_t, std::size_t total) {
        ++calls;
        EXPECT_EQ(total, 3u);
    };
    run_campaign(ScenarioConfig{}, UncertaintySpec::none(), o);
    EXPECT_EQ(calls, 3u);
    o.runs = 0;
    EXPECT_THROW(run_campaign(ScenarioConfig{}, UncertaintySpec::none(), o), std::invalid_argument);
}

TEST(Calibration, ThresholdBoundsFaultlessSamples) {
    CampaignOptions o;
    o.runs = 10;
    ScenarioConfig c;
    c.fault = parse_fault("sx=0.5@56");  // dropped by calibrate
    const Calibration cal = calibrate(c, UncertaintySpec::reference(), o, 0.999);
    EXPECT_EQ(cal.runs, 10u);
    EXPECT_GT(cal.threshold, 0.0);
    EXPECT_LE(cal.threshold, cal.max_abs_psi);
    EXPECT_LT(cal.max_abs_psi, 500.0);
}

TEST(Sweep, ScaleResponseIsParabolicAboutOne) {
    ScenarioConfig c;
    c.gyro.sigma_g = 0;
    c.ranging.sigma_axis = 0;
    c.derivatives = DerivativeMode::Exact;
    std::vector<double> s;
    for (int i = 0; i <= 8; ++i) s.push_back(0.25 * i);
    const auto recs = sweep(c, SweepParam::Scale, s);
    ASSERT_EQ(recs.size(), s.size());
    std::vector<double> y;
    for (const auto& r : recs) y.push_back(r.psi_probe);
    const ParabolaFit f = fit_parabola(s, y);
    EXPECT_GT(f.r2, 1 - 1e-10);
    EXPECT_LT(f.a, 0.0);
    // the linear term in the rate error shifts the vertex by g / (coeff w)
    EXPECT_NEAR(f.vertex(), 1.0, 0.05);
    EXPECT_NEAR(recs[4].psi_probe, 0.0, 1e-6);
}

TEST(Sweep, SeparationSweepRuns) {
    const auto recs = sweep(ScenarioConfig{}, SweepParam::DeltaA, {100.0, 500.0, 1000.0});
    ASSERT_EQ(recs.size(), 3u);
    for (const auto& r : recs) EXPECT_TRUE(r.valid);
    EXPECT_EQ(parse_sweep_param(to_string(SweepParam::Bias)), SweepParam::Bias);
    EXPECT_THROW(parse_sweep_param("x"), std::invalid_argument);
    EXPECT_THROW(sweep(ScenarioConfig{}, SweepParam::Scale, {}), std::invalid_argument);
}

TEST(Parabola, ExactFit) {
    const std::vector<double> x{-1, 0, 1, 2, 3};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v * v - 3 * v + 1);
    const ParabolaFit f = fit_parabola(x, y);
    EXPECT_NEAR(f.a, 2, 1e-12);
    EXPECT_NEAR(f.b, -3, 1e-12);
    EXPECT_NEAR(f.c, 1, 1e-12);
    EXPECT_NEAR(f.vertex(), 0.75, 1e-12);
    EXPECT_THROW(fit_parabola({1, 2}, {1, 2}), std::invalid_argument);
}
