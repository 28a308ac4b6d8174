#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "gyrofdi/astro.hpp"
#include "gyrofdi/constants.hpp"

namespace gyrofdi {

/// Fatal propagation failure (re-entry, invalid atmosphere, bad grid).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Attitude of the primary body. `q` maps ECI components to body components
/// (v_body = q * v_eci); `omega` is the inertial rate in body axes [rad/s].
struct AttitudeState {
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    Vec3 omega = Vec3::Zero();

    Mat3 eci_to_body() const { return q.toRotationMatrix(); }
};

/// Principal moments of inertia [kg m^2].
struct InertiaTensor {
    double ixx = 1.0;
    double iyy = 1.0;
    double izz = 1.0;

    Vec3 diagonal() const { return {ixx, iyy, izz}; }
};

void validate(const InertiaTensor& inertia);

/// Single-layer exponential atmosphere plus ballistic properties of one satellite.
struct DragParams {
    double cd = 2.5;
    double area = 1.0;             // [m^2]
    double mass = 4.1;             // [kg]
    double rho0 = 1.225;           // reference density [kg/m^3]
    double h0 = 0.0;               // reference altitude [m]
    double scale_height = 8500.0;  // [m]
};

/// Exponential layer anchored at 400 km (2.803e-12 kg/m^3, H = 58.515 km).
inline DragParams thermosphere_400km() {
    DragParams d;
    d.rho0 = 2.803e-12;
    d.h0 = 400.0e3;
    d.scale_height = 58.515e3;
    return d;
}

struct ForceModel {
    bool j2 = false;
    bool drag = false;
    DragParams drag_primary;
    DragParams drag_secondary;
    EarthConstants earth;
};

/// Fixed-step time grid; t_end - t0 must be an integer number of steps.
struct SimulationGrid {
    double t0 = 0.0;
    double t_end = 120.0;
    double dt = 0.01;

    /// Number of steps; throws std::invalid_argument on an invalid grid.
    std::size_t steps() const;
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

Vec3 two_body_accel(const Vec3& r, double mu);
Vec3 j2_accel(const Vec3& r, const EarthConstants& earth);

/// Gravitational potential of the J2 term (for gradient checks).
double j2_potential(const Vec3& r, const EarthConstants& earth);

/// Exponential-atmosphere drag, opposite to the inertial velocity.
Vec3 drag_accel(const InertialState& st, const DragParams& drag, const EarthConstants& earth);

/// Total acceleration for one satellite under the enabled force terms.
Vec3 total_accel(const InertialState& st, const ForceModel& fm, const DragParams& drag);

/// Euler's equations without external torque.
Vec3 torque_free_rate(const Vec3& omega, const InertiaTensor& inertia);

/// RK4 propagation; returns the state at every grid point (steps()+1 entries).
/// Throws SimulationError when the orbit radius drops below the Earth radius.
std::vector<InertialState> propagate_orbit(const InertialState& st, const ForceModel& fm,
                                           const SimulationGrid& grid);

/// Torque-free rigid-body RK4 propagation with quaternion renormalisation.
std::vector<AttitudeState> propagate_attitude(const AttitudeState& att, const InertiaTensor& inertia,
                                              const SimulationGrid& grid);

/// Primary orbit plus the secondary's ECI offset from it. The offset is
/// integrated directly so that it keeps full precision at kilometre range.
struct FormationTrajectory {
    std::vector<InertialState> primary;
    std::vector<InertialState> relative;  // r_S - r_P, v_S - v_P (ECI)

    InertialState secondary(std::size_t k) const {
        return {primary[k].r + relative[k].r, primary[k].v + relative[k].v};
    }
};

FormationTrajectory propagate_formation(const InertialState& primary, const InertialState& secondary,
                                        const ForceModel& fm, const SimulationGrid& grid);

}  // namespace gyrofdi
