#include <gtest/gtest.h>

#include "gyrofdi/bounds.hpp"

using namespace gyrofdi;

namespace {

BoundInputs scenario2() {
    BoundInputs in;
    in.r_sp = 1000.0;
    in.omega_axis = 0.055;
    return in;
}

double X(const BoundInputs& in) {
    return in.earth.mu * in.earth.j2 * in.earth.re * in.earth.re / std::pow(in.r_p, 4);
}

}  // namespace

TEST(Bounds, DeltaPsiIsDotProduct) {
    EXPECT_DOUBLE_EQ(delta_psi_from_perturbation(Vec3(1000, 0, 0), Vec3(1e-5, 0, 0)), 1e-2);
    EXPECT_DOUBLE_EQ(delta_psi_from_perturbation(Vec3(1000, 0, 0), Vec3(0, 3, 0)), 0.0);
}

TEST(Bounds, DeltaSMatchesNumericalRootShift) {
    // independent oracle: move psi and re-solve psi = coeff w^2 (1 - 1/s)^2 for s
    const double coeff = -9e5, w = 0.055, s = 0.4;
    auto psi_of = [&](double sv) { return coeff * w * w * (1 - 1 / sv) * (1 - 1 / sv); };
    const double psi0 = psi_of(s);
    const double dpsi = 1e-6 * std::abs(psi0);
    double lo = 0.3, hi = 0.999;  // psi_of increases on (0, 1)
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (psi_of(mid) < psi0 + dpsi ? lo : hi) = mid;
    }
    const double ds_num = 0.5 * (lo + hi) - s;
    // the closed form carries the magnitude; its sign depends on the root branch
    EXPECT_NEAR(std::abs(delta_s_from_delta_psi(s, psi0, dpsi) / ds_num), 1.0, 1e-4);
}

TEST(Bounds, DeltaBMatchesNumericalRootShift) {
    const double coeff = -9e5, b = 0.01;
    const double psi0 = coeff * b * b;
    const double dpsi = -1e-6 * std::abs(psi0);
    const double b_new = std::sqrt((psi0 + dpsi) / coeff);
    EXPECT_NEAR(delta_b_from_delta_psi(b, coeff, dpsi) / (b_new - b), 1.0, 1e-5);
}

TEST(Bounds, J2ScaleValue) {
    const BoundInputs in = scenario2();
    EXPECT_NEAR(j2_scale(in.r_p, in.earth) / X(in), 1.0, 1e-14);
    EXPECT_NEAR(j2_scale(in.r_p, in.earth), 8.29e-3, 1e-5);
}

TEST(Bounds, CombinedJ2Limits) {
    const BoundInputs in = scenario2();
    EXPECT_NEAR(max_combined_j2(in.r_p, 0.0, in.earth), 6 * X(in), 1e-15);
    EXPECT_NEAR(max_combined_j2(in.r_p, in.r_sp, in.earth) / (6 * X(in)), 1.0, 1e-6);
    EXPECT_GT(max_combined_j2(7.0e6, 1000, in.earth), max_combined_j2(7.1e6, 1000, in.earth));
}

TEST(Bounds, GenericBoundReducesToJ2Bound) {
    BoundInputs in = scenario2();
    const double approx_sum = 6 * X(in);
    for (double s : {0.1, 0.5, 0.9}) {
        in.s = s;
        EXPECT_NEAR(max_delta_s_generic(in.r_sp, in.omega_axis, s, approx_sum) / max_delta_s_j2(in), 1.0, 1e-12);
    }
}

TEST(Bounds, ScaleBoundShape) {
    BoundInputs in = scenario2();
    in.s = 1e-9;
    EXPECT_LT(max_delta_s_j2(in), 1e-9);
    double prev = 0.0;
    for (double s = 0.05; s < 1.0; s += 0.05) {
        in.s = s;
        const double v = max_delta_s_j2(in);
        EXPECT_GT(v, prev);
        prev = v;
    }
    in.s = 1.0;
    EXPECT_THROW(max_delta_s_j2(in), std::invalid_argument);
    in.s = 0.0;
    EXPECT_THROW(max_delta_s_j2(in), std::invalid_argument);
}

TEST(Bounds, BiasBoundHalvesWhenBDoubles) {
    BoundInputs in = scenario2();
    in.b = 0.01;
    const double v1 = max_delta_b_j2(in);
    in.b = 0.02;
    EXPECT_NEAR(max_delta_b_j2(in), v1 / 2, 1e-15);
    in.b = 0.0;
    EXPECT_THROW(max_delta_b_j2(in), std::invalid_argument);
}

TEST(Bounds, AdmissibleSetsShape) {
    const BoundInputs in = scenario2();
    const double c = s_plus_coefficient(in);
    double prev = -1e300;
    for (double a : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
        const AdmissibleSets s = admissible_sets(a, 0.5, in);
        EXPECT_NEAR(s.s_plus, 1.0 - c / a, 1e-15);
        EXPECT_LT(s.s_plus, 1.0);
        EXPECT_GT(s.s_plus, prev);
        EXPECT_EQ(s.s_empty, s.s_plus <= 0.0);
        EXPECT_GT(s.b_plus, 0.0);
        prev = s.s_plus;
    }
    EXPECT_TRUE(admissible_sets(c, 1.0, in).s_empty);
    EXPECT_NEAR(admissible_sets(1.0, 0.25, in).b_plus, std::sqrt(b_plus_coefficient(in) / 0.25), 1e-15);
    EXPECT_THROW(admissible_sets(0.0, 0.5, in), std::invalid_argument);
    EXPECT_THROW(admissible_sets(0.5, 1.5, in), std::invalid_argument);
}

TEST(Bounds, DragSmallSeparationLimit) {
    // the bracketed difference is O(r_sp), so the bound tends to a finite limit
    BoundInputs in = scenario2();
    in.drag = thermosphere_400km();
    std::vector<double> ratios;
    for (double r : {1.0, 0.1, 0.01}) {
        in.r_sp = r;
        ratios.push_back(drag_bounds(in).delta_accel / r);
    }
    // analytic derivative of exp((h0 + Re - r)/H)/r at r_p
    const DragParams& d = in.drag;
    const double k = in.earth.mu * d.area * d.cd * d.rho0 / d.mass;
    const double ep = std::exp((d.h0 + in.earth.re - in.r_p) / d.scale_height) / in.r_p;
    const double limit = 0.5 * k * ep * (1.0 / d.scale_height + 1.0 / in.r_p);
    EXPECT_NEAR(ratios[2] / limit, 1.0, 1e-6);
    EXPECT_NEAR(ratios[0] / limit, 1.0, 1e-4);
}

TEST(Bounds, DragRatiosConsistent) {
    BoundInputs in = scenario2();
    in.drag = thermosphere_400km();
    in.s = 0.5;
    in.b = 0.01;
    const DragBounds d = drag_bounds(in);
    EXPECT_NEAR(d.max_ds / in.s, d.ratio_s / (1 - in.s), 1e-12 * d.ratio_s);
    EXPECT_NEAR(d.max_db / in.b, d.ratio_b / (in.b * in.b), 1e-12 * d.ratio_b / (in.b * in.b));
}

TEST(Bounds, ValidateInputs) {
    BoundInputs in = scenario2();
    in.r_sp = 0;
    EXPECT_THROW(validate(in), std::invalid_argument);
    in = scenario2();
    in.r_p = 6.0e6;
    EXPECT_THROW(validate(in), std::invalid_argument);
}
