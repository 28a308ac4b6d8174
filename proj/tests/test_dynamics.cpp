#include <gtest/gtest.h>

#include "gyrofdi/astro.hpp"
#include "gyrofdi/dynamics.hpp"

using namespace gyrofdi;

namespace {

const EarthConstants kEarth;

InertialState leo_state() {
    return elements_to_state({6783.34174e3, 0.0014021, 51.27632 * kDeg, 90.69731 * kDeg, 275.17058 * kDeg,
                              309.67626 * kDeg},
                             kEarth.mu);
}

}  // namespace

TEST(Dynamics, TwoBodyConservesEnergyAndMomentum) {
    const InertialState s0 = leo_state();
    SimulationGrid g;
    g.t_end = 600.0;
    g.dt = 0.1;
    const auto traj = propagate_orbit(s0, ForceModel{}, g);
    ASSERT_EQ(traj.size(), g.steps() + 1);
    const double e0 = specific_energy(s0, kEarth.mu);
    const Vec3 h0 = s0.r.cross(s0.v);
    for (const auto& s : traj) {
        EXPECT_NEAR(specific_energy(s, kEarth.mu) / e0, 1.0, 1e-11);
        EXPECT_LT((s.r.cross(s.v) - h0).norm() / h0.norm(), 1e-11);
    }
}

TEST(Dynamics, KeplerPeriodClosesOrbit) {
    const InertialState s0 = leo_state();
    const double a = state_to_elements(s0, kEarth.mu).a;
    const double period = 2 * kPi * std::sqrt(a * a * a / kEarth.mu);
    SimulationGrid g;
    g.t_end = period;
    g.dt = period / 20000.0;
    const auto traj = propagate_orbit(s0, ForceModel{}, g);
    EXPECT_LT((traj.back().r - s0.r).norm(), 1e-3);
}

TEST(Dynamics, J2AccelIsMinusPotentialGradient) {
    const Vec3 r(4.1e6, -3.3e6, 4.2e6);
    const double h = 1.0;
    Vec3 grad;
    for (int k = 0; k < 3; ++k) {
        Vec3 dp = r, dm = r;
        dp[k] += h;
        dm[k] -= h;
        grad[k] = (j2_potential(dp, kEarth) - j2_potential(dm, kEarth)) / (2 * h);
    }
    const Vec3 a = j2_accel(r, kEarth);
    EXPECT_LT((a + grad).norm() / a.norm(), 1e-6);
}

TEST(Dynamics, J2EquatorialMagnitude) {
    // on the equator J2 pulls inward by 3/2 mu J2 Re^2 / r^4
    const double r = 7.0e6;
    const Vec3 a = j2_accel(Vec3(r, 0, 0), kEarth);
    const double expected = 1.5 * kEarth.mu * kEarth.j2 * kEarth.re * kEarth.re / std::pow(r, 4);
    EXPECT_NEAR(a.x() / -expected, 1.0, 1e-12);
    EXPECT_NEAR(a.y(), 0.0, 1e-18);
}

TEST(Dynamics, DragOpposesAtmosphereRelativeVelocity) {
    const InertialState s = leo_state();
    const Vec3 a = drag_accel(s, thermosphere_400km(), kEarth);
    EXPECT_LT(a.dot(s.v), 0.0);
    EXPECT_GT(a.norm(), 1e-7);
    EXPECT_LT(a.norm(), 1e-3);
}

TEST(Dynamics, TorqueFreeInvariants) {
    const InertiaTensor in{2.29e-2, 2.42e-2, 2.14e-2};
    AttitudeState a0;
    a0.omega = Vec3(3.0, 2.5, 5.0) * kDeg;
    SimulationGrid g;
    const auto traj = propagate_attitude(a0, in, g);
    const Vec3 I = in.diagonal();
    const double t0 = a0.omega.dot(I.cwiseProduct(a0.omega));
    const double l0 = I.cwiseProduct(a0.omega).norm();
    const Vec3 h0_inertial = a0.eci_to_body().transpose() * I.cwiseProduct(a0.omega);
    for (const auto& s : traj) {
        EXPECT_NEAR(s.omega.dot(I.cwiseProduct(s.omega)) / t0, 1.0, 1e-12);
        EXPECT_NEAR(I.cwiseProduct(s.omega).norm() / l0, 1.0, 1e-12);
        EXPECT_NEAR(s.q.norm(), 1.0, 1e-12);
        const Vec3 h = s.eci_to_body().transpose() * I.cwiseProduct(s.omega);
        EXPECT_LT((h - h0_inertial).norm() / l0, 1e-9);
    }
}

TEST(Dynamics, FormationRelativeMatchesIndependentPropagation) {
    const InertialState p = leo_state();
    OrbitalElements es = state_to_elements(p, kEarth.mu);
    es.a += 1000.0;
    const InertialState s = elements_to_state(es, kEarth.mu);
    SimulationGrid g;
    g.t_end = 120;
    const auto form = propagate_formation(p, s, ForceModel{}, g);
    const auto ts = propagate_orbit(s, ForceModel{}, g);
    for (std::size_t k = 0; k < ts.size(); k += 500) {
        EXPECT_LT((form.secondary(k).r - ts[k].r).norm(), 1e-5);
    }
}

TEST(Dynamics, RejectsSubsurfaceOrbit) {
    InertialState s{Vec3(6.0e6, 0, 0), Vec3(0, 1000, 0)};
    SimulationGrid g;
    g.t_end = 10;
    EXPECT_THROW(propagate_orbit(s, ForceModel{}, g), SimulationError);
}

TEST(Dynamics, InertiaValidation) {
    EXPECT_THROW(validate(InertiaTensor{-1, 1, 1}), std::invalid_argument);
    EXPECT_NO_THROW(validate(InertiaTensor{1, 1, 1}));
}
