#include "gyrofdi/astro.hpp"

#include <algorithm>
#include <cmath>

namespace gyrofdi {

namespace {

constexpr double kCircularTol = 1e-11;
constexpr double kEquatorialTol = 1e-11;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

std::string to_string(Frame f) {
    switch (f) {
        case Frame::Eci: return "ECI";
        case Frame::Body: return "BODY";
        case Frame::Rsw: return "RSW";
    }
    return "?";
}

double wrap_two_pi(double angle) {
    double w = std::fmod(angle, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    if (w >= 2.0 * kPi) w = 0.0;
    return w;
}

void validate(const OrbitalElements& el) {
    if (!(el.a > 0.0)) throw std::invalid_argument("semi-major axis must be positive");
    if (!(el.e >= 0.0)) throw std::invalid_argument("eccentricity must be non-negative");
    if (!(el.e < 1.0)) throw DegenerateOrbitError("only elliptic orbits (e < 1) are supported");
    if (!(el.i >= 0.0 && el.i <= kPi)) throw std::invalid_argument("inclination must lie in [0, pi]");
}

InertialState elements_to_state(const OrbitalElements& el, double mu) {
    validate(el);
    const double p = el.a * (1.0 - el.e * el.e);
    const double cnu = std::cos(el.ta);
    const double snu = std::sin(el.ta);
    const double r = p / (1.0 + el.e * cnu);
    const double vscale = std::sqrt(mu / p);

    // perifocal frame
    const Vec3 r_pf(r * cnu, r * snu, 0.0);
    const Vec3 v_pf(-vscale * snu, vscale * (el.e + cnu), 0.0);

    const Mat3 rot = (Eigen::AngleAxisd(el.raan, Vec3::UnitZ()) *
                      Eigen::AngleAxisd(el.i, Vec3::UnitX()) *
                      Eigen::AngleAxisd(el.argp, Vec3::UnitZ()))
                         .toRotationMatrix();
    return {rot * r_pf, rot * v_pf};
}

OrbitalElements state_to_elements(const InertialState& st, double mu) {
    const Vec3& rv = st.r;
    const Vec3& vv = st.v;
    const double r = rv.norm();
    if (!(r > 0.0)) throw DegenerateOrbitError("zero position vector");

    const Vec3 h = rv.cross(vv);
    const double hn = h.norm();
    if (hn < 1e-9 * r * std::max(vv.norm(), 1e-300)) {
        throw DegenerateOrbitError("angular momentum vanishes (rectilinear orbit)");
    }

    const Vec3 evec = ((vv.squaredNorm() - mu / r) * rv - rv.dot(vv) * vv) / mu;
    const double e = evec.norm();
    const double energy = 0.5 * vv.squaredNorm() - mu / r;
    if (!(energy < 0.0)) throw DegenerateOrbitError("orbit is not elliptic");

    OrbitalElements el;
    el.a = -mu / (2.0 * energy);
    el.e = e;
    el.i = std::acos(clamp_unit(h.z() / hn));

    const Vec3 node = Vec3::UnitZ().cross(h);
    const double nn = node.norm();
    const bool equatorial = el.i < kEquatorialTol || (kPi - el.i) < kEquatorialTol;
    const bool circular = e < kCircularTol;

    // reference direction in the orbital plane from which argp / ta are measured
    Vec3 node_dir = Vec3::UnitX();
    if (!equatorial && nn > 0.0) {
        node_dir = node / nn;
        el.raan = wrap_two_pi(std::atan2(node.y(), node.x()));
    } else {
        el.raan = 0.0;
    }

    const Vec3 hhat = h / hn;
    auto angle_in_plane = [&](const Vec3& from, const Vec3& to) {
        return wrap_two_pi(std::atan2(hhat.dot(from.cross(to)), from.dot(to)));
    };

    if (circular) {
        el.argp = 0.0;
        el.ta = angle_in_plane(node_dir, rv);
    } else {
        el.argp = angle_in_plane(node_dir, evec);
        el.ta = angle_in_plane(evec, rv);
    }
    return el;
}

FrameRotation rsw_frame(const InertialState& st) {
    const double r = st.r.norm();
    const Vec3 h = st.r.cross(st.v);
    const double hn = h.norm();
    if (!(r > 0.0) || !(hn > 1e-12 * r * std::max(st.v.norm(), 1e-300))) {
        throw DegenerateOrbitError("RSW frame undefined: position parallel to velocity");
    }
    const Vec3 x = st.r / r;
    const Vec3 z = h / hn;
    const Vec3 y = z.cross(x);
    FrameRotation rot;
    rot.dcm.row(0) = x.transpose();
    rot.dcm.row(1) = y.transpose();
    rot.dcm.row(2) = z.transpose();
    rot.from = Frame::Eci;
    rot.to = Frame::Rsw;
    return rot;
}

double specific_energy(const InertialState& st, double mu) {
    return 0.5 * st.v.squaredNorm() - mu / st.r.norm();
}

}  // namespace gyrofdi
