#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gyrofdi/constants.hpp"

namespace gyrofdi {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Raised when an orbit or frame cannot be built from the given state
/// (rectilinear motion, r parallel to v, non-elliptic elements).
class DegenerateOrbitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Classical Keplerian elements. SI units, angles in radians.
struct OrbitalElements {
    double a = 0.0;     // semi-major axis [m]
    double e = 0.0;     // eccentricity
    double i = 0.0;     // inclination [rad]
    double argp = 0.0;  // argument of perigee [rad]
    double raan = 0.0;  // right ascension of ascending node [rad]
    double ta = 0.0;    // true anomaly [rad]
};

/// Position and velocity in the Earth-centred inertial frame.
struct InertialState {
    Vec3 r = Vec3::Zero();  // [m]
    Vec3 v = Vec3::Zero();  // [m/s]
};

enum class Frame { Eci, Body, Rsw };

std::string to_string(Frame f);

/// Direction-cosine matrix taking components in `from` to components in `to`.
struct FrameRotation {
    Mat3 dcm = Mat3::Identity();
    Frame from = Frame::Eci;
    Frame to = Frame::Eci;

    Vec3 apply(const Vec3& v) const { return dcm * v; }
    FrameRotation inverse() const { return {dcm.transpose(), to, from}; }
};

/// Throws std::invalid_argument when a <= 0, e outside [0, 1) or i outside [0, pi].
void validate(const OrbitalElements& el);

InertialState elements_to_state(const OrbitalElements& el, double mu);

/// Inverse of elements_to_state. For e < 1e-11 the argument of perigee is
/// reported as 0 (the true anomaly is then measured from the node), and for
/// i < 1e-11 the node is reported at 0 (angles measured from the x axis).
OrbitalElements state_to_elements(const InertialState& st, double mu);

/// ECI -> RSW rotation: rows are r/|r|, (h x r)/|h x r|, h/|h| with h = r x v.
FrameRotation rsw_frame(const InertialState& st);

double specific_energy(const InertialState& st, double mu);

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);

}  // namespace gyrofdi
