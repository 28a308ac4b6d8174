#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gyrofdi/sensors.hpp"

using namespace gyrofdi;

TEST(Fault, ParseScale) {
    const FaultSpec f = parse_fault("sx=0.5@56");
    EXPECT_EQ(f.axis, Axis::X);
    EXPECT_EQ(f.kind, FaultKind::ScaleFactor);
    EXPECT_DOUBLE_EQ(f.value, 0.5);
    EXPECT_DOUBLE_EQ(f.t_activate, 56.0);
}

TEST(Fault, ParseBiasConvertsDegrees) {
    const FaultSpec f = parse_fault("bz=0.1@56");
    EXPECT_EQ(f.axis, Axis::Z);
    EXPECT_EQ(f.kind, FaultKind::Bias);
    EXPECT_NEAR(f.value, 0.1 * kPi / 180.0, 1e-18);
    EXPECT_NEAR(parse_fault(describe(f)).value, f.value, 1e-18);
}

TEST(Fault, ParseRejectsGarbage) {
    for (const char* s : {"", "qx=1@2", "sx=@3", "sx=1", "sw=1@2", "sx=1@-1", "sx=abc@3"}) {
        EXPECT_THROW(parse_fault(s), std::invalid_argument) << s;
    }
}

TEST(Fault, ApplyOnlyAfterActivation) {
    const FaultSpec s = parse_fault("sy=0.5@10");
    const Vec3 w(0.1, 0.2, 0.3);
    EXPECT_EQ(apply_fault(w, &s, 9.99), w);
    EXPECT_NEAR(apply_fault(w, &s, 10.0).y(), 0.1, 1e-17);
    const FaultSpec b = parse_fault("bx=1@0");
    EXPECT_NEAR(apply_fault(w, &b, 5.0).x(), 0.1 + kPi / 180.0, 1e-16);
    EXPECT_EQ(apply_fault(w, nullptr, 5.0), w);
}

TEST(Fault, TimeVaryingProfile) {
    FaultSpec f = parse_fault("sx=1@0");
    f.profile = [](double t) { return 1.0 + 0.1 * t; };
    EXPECT_NEAR(apply_fault(Vec3(1, 0, 0), &f, 2.0).x(), 1.2, 1e-15);
}

TEST(Noise, ZeroSigmaDrawsNothing) {
    NoiseStream a(5), b(5);
    EXPECT_EQ(a.draw(0.0), Vec3::Zero());
    EXPECT_EQ(a.draw(1.0), b.draw(1.0));
}

TEST(Noise, SampleMomentsMatchSigma) {
    NoiseStream s(123);
    const int n = 200000;
    const double sigma = 3.6 * kDegPerHour;
    Vec3 sum = Vec3::Zero(), sq = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
        const Vec3 d = s.draw(sigma);
        sum += d;
        sq += d.cwiseProduct(d);
    }
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT(std::abs(sum[k] / n), 5 * sigma / std::sqrt(n));
        EXPECT_NEAR(std::sqrt(sq[k] / n) / sigma, 1.0, 0.01);
    }
}

TEST(Sensors, GyroIsDeterministicPerSeed) {
    GyroSensor g1({1e-3, 9}, std::nullopt), g2({1e-3, 9}, std::nullopt);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(g1.measure(Vec3(1, 2, 3), i), g2.measure(Vec3(1, 2, 3), i));
    RangeSensor r({0.0, 1});
    EXPECT_EQ(r.measure(Vec3(1, 2, 3)), Vec3(1, 2, 3));
}

TEST(FiniteDifference, ExactOnQuartics) {
    // five-point stencils are exact for polynomials up to degree 4
    auto f = [](double t) { return Vec3(t * t * t * t, 3 * t * t - t, 2.0 - t * t * t); };
    auto df = [](double t) { return Vec3(4 * t * t * t, 6 * t - 1, -3 * t * t); };
    auto ddf = [](double t) { return Vec3(12 * t * t, 6.0, -6 * t); };
    const double t = 0.7, h = 0.3;
    std::array<Vec3, 5> w;
    for (int i = 0; i < 5; ++i) w[i] = f(t + (i - 2) * h);
    EXPECT_LT((fd4_first_derivative(w, h) - df(t)).norm(), 1e-12);
    EXPECT_LT((fd4_second_derivative(w, h) - ddf(t)).norm(), 1e-11);
}

TEST(FiniteDifference, FourthOrderConvergence) {
    auto f = [](double t) { return Vec3(std::sin(t), std::cos(2 * t), std::exp(0.3 * t)); };
    const double t = 0.4;
    double prev = 0.0;
    for (double h : {0.2, 0.1}) {
        std::array<Vec3, 5> w;
        for (int i = 0; i < 5; ++i) w[i] = f(t + (i - 2) * h);
        const double err = std::abs(fd4_second_derivative(w, h).x() + std::sin(t));
        if (prev > 0) {
            EXPECT_NEAR(prev / err, 16.0, 1.0);
        }
        prev = err;
    }
}

TEST(FiniteDifference, NoiseGainsMatchStencilNorms) {
    // independent oracle: root-sum-square of the stencil weights
    const double w1[] = {1, -8, 0, 8, -1};
    const double w2[] = {-1, 16, -30, 16, -1};
    double s1 = 0, s2 = 0;
    for (int i = 0; i < 5; ++i) {
        s1 += w1[i] * w1[i];
        s2 += w2[i] * w2[i];
    }
    EXPECT_NEAR(fd4_first_noise_gain(), std::sqrt(s1) / 12.0, 1e-15);
    EXPECT_NEAR(fd4_second_noise_gain(), std::sqrt(s2) / 12.0, 1e-15);
}

TEST(FiniteDifference, CentredWindowEdges) {
    std::vector<Vec3> series(20);
    for (int i = 0; i < 20; ++i) series[i] = Vec3::Constant(i);
    const auto w = centred_window(series, 10, 3);
    EXPECT_EQ(w[0].x(), 4);
    EXPECT_EQ(w[4].x(), 16);
    EXPECT_THROW(centred_window(series, 5, 3), std::out_of_range);
    EXPECT_THROW(centred_window(series, 14, 3), std::out_of_range);
}
