#include "gyrofdi/dynamics.hpp"

#include <cmath>
#include <string>

namespace gyrofdi {

namespace {

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

template <int N, class Rhs>
VecN<N> rk4_step(const VecN<N>& y, double dt, Rhs&& rhs) {
    const VecN<N> k1 = rhs(y);
    const VecN<N> k2 = rhs(y + 0.5 * dt * k1);
    const VecN<N> k3 = rhs(y + 0.5 * dt * k2);
    const VecN<N> k4 = rhs(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_altitude(const Vec3& r, const EarthConstants& earth, double t) {
    if (!(r.norm() > earth.re)) {
        throw SimulationError("orbit radius below Earth radius at t = " + std::to_string(t) + " s");
    }
}

}  // namespace

void validate(const InertiaTensor& in) {
    if (!(in.ixx > 0.0 && in.iyy > 0.0 && in.izz > 0.0)) {
        throw std::invalid_argument("moments of inertia must be positive");
    }
    if (in.ixx + in.iyy < in.izz || in.iyy + in.izz < in.ixx || in.izz + in.ixx < in.iyy) {
        throw std::invalid_argument("moments of inertia violate the triangle inequality");
    }
}

std::size_t SimulationGrid::steps() const {
    if (!(dt > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (!(t_end >= t0)) throw std::invalid_argument("grid end precedes start");
    const double n = (t_end - t0) / dt;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
        throw std::invalid_argument("grid span is not an integer number of steps");
    }
    return static_cast<std::size_t>(rounded);
}

Vec3 two_body_accel(const Vec3& r, double mu) {
    const double rn = r.norm();
    return -mu / (rn * rn * rn) * r;
}

Vec3 j2_accel(const Vec3& r, const EarthConstants& earth) {
    const double rn = r.norm();
    const double zr2 = (r.z() / rn) * (r.z() / rn);
    const double k = -1.5 * earth.mu * earth.j2 * earth.re * earth.re / std::pow(rn, 5);
    return {k * (1.0 - 5.0 * zr2) * r.x(), k * (1.0 - 5.0 * zr2) * r.y(), k * (3.0 - 5.0 * zr2) * r.z()};
}

double j2_potential(const Vec3& r, const EarthConstants& earth) {
    const double rn = r.norm();
    const double s = r.z() / rn;
    // acceleration is -grad(potential)
    return earth.mu * earth.j2 * earth.re * earth.re / (2.0 * rn * rn * rn) * (3.0 * s * s - 1.0);
}

Vec3 drag_accel(const InertialState& st, const DragParams& drag, const EarthConstants& earth) {
    if (!(drag.scale_height > 0.0) || !(drag.rho0 > 0.0)) {
        throw SimulationError("atmosphere needs positive scale height and reference density");
    }
    if (!(drag.mass > 0.0) || !(drag.area > 0.0) || !(drag.cd > 0.0)) {
        throw SimulationError("drag needs positive mass, area and drag coefficient");
    }
    const double speed = st.v.norm();
    if (speed == 0.0) return Vec3::Zero();
    const double h = st.r.norm() - earth.re;
    const double rho = drag.rho0 * std::exp(-(h - drag.h0) / drag.scale_height);
    const double q = 0.5 * rho * speed * speed;
    return -(q * drag.area * drag.cd / drag.mass) * (st.v / speed);
}

Vec3 total_accel(const InertialState& st, const ForceModel& fm, const DragParams& drag) {
    Vec3 a = two_body_accel(st.r, fm.earth.mu);
    if (fm.j2) a += j2_accel(st.r, fm.earth);
    if (fm.drag) a += drag_accel(st, drag, fm.earth);
    return a;
}

Vec3 torque_free_rate(const Vec3& w, const InertiaTensor& in) {
    return {(in.iyy - in.izz) / in.ixx * w.y() * w.z(),
            (in.izz - in.ixx) / in.iyy * w.z() * w.x(),
            (in.ixx - in.iyy) / in.izz * w.x() * w.y()};
}

std::vector<InertialState> propagate_orbit(const InertialState& st, const ForceModel& fm,
                                           const SimulationGrid& grid) {
    const std::size_t n = grid.steps();
    std::vector<InertialState> out;
    out.reserve(n + 1);

    VecN<6> y;
    y << st.r, st.v;
    auto rhs = [&](const VecN<6>& s) {
        const InertialState cur{s.head<3>(), s.tail<3>()};
        VecN<6> d;
        d << cur.v, total_accel(cur, fm, fm.drag_primary);
        return d;
    };

    check_altitude(st.r, fm.earth, grid.t0);
    out.push_back(st);
    for (std::size_t k = 0; k < n; ++k) {
        y = rk4_step<6>(y, grid.dt, rhs);
        check_altitude(y.head<3>(), fm.earth, grid.time(k + 1));
        out.push_back({y.head<3>(), y.tail<3>()});
    }
    return out;
}

std::vector<AttitudeState> propagate_attitude(const AttitudeState& att, const InertiaTensor& inertia,
                                              const SimulationGrid& grid) {
    validate(inertia);
    const std::size_t n = grid.steps();
    std::vector<AttitudeState> out;
    out.reserve(n + 1);

    // state: quaternion (w, x, y, z) then omega
    VecN<7> y;
    const Eigen::Quaterniond q0 = att.q.normalized();
    y << q0.w(), q0.x(), q0.y(), q0.z(), att.omega;

    auto rhs = [&](const VecN<7>& s) {
        const Eigen::Quaterniond q(s(0), s(1), s(2), s(3));
        const Vec3 w = s.tail<3>();
        // qdot = -1/2 (0, w) (x) q  for the ECI->body quaternion
        const Eigen::Quaterniond wq(0.0, w.x(), w.y(), w.z());
        const Eigen::Quaterniond prod = wq * q;
        VecN<7> d;
        d << -0.5 * prod.w(), -0.5 * prod.x(), -0.5 * prod.y(), -0.5 * prod.z(), torque_free_rate(w, inertia);
        return d;
    };

    out.push_back({q0, att.omega});
    for (std::size_t k = 0; k < n; ++k) {
        y = rk4_step<7>(y, grid.dt, rhs);
        y.head<4>().normalize();
        out.push_back({Eigen::Quaterniond(y(0), y(1), y(2), y(3)), y.tail<3>()});
    }
    return out;
}

FormationTrajectory propagate_formation(const InertialState& primary, const InertialState& secondary,
                                        const ForceModel& fm, const SimulationGrid& grid) {
    const std::size_t n = grid.steps();
    FormationTrajectory tr;
    tr.primary.reserve(n + 1);
    tr.relative.reserve(n + 1);

    VecN<12> y;
    y << primary.r, primary.v, secondary.r - primary.r, secondary.v - primary.v;

    auto rhs = [&](const VecN<12>& s) {
        const InertialState p{s.segment<3>(0), s.segment<3>(3)};
        const InertialState q{p.r + s.segment<3>(6), p.v + s.segment<3>(9)};
        const Vec3 ap = total_accel(p, fm, fm.drag_primary);
        const Vec3 as = total_accel(q, fm, fm.drag_secondary);
        VecN<12> d;
        d << p.v, ap, s.segment<3>(9), as - ap;
        return d;
    };

    auto record = [&](const VecN<12>& s, double t) {
        check_altitude(s.segment<3>(0), fm.earth, t);
        check_altitude(s.segment<3>(0) + s.segment<3>(6), fm.earth, t);
        tr.primary.push_back({s.segment<3>(0), s.segment<3>(3)});
        tr.relative.push_back({s.segment<3>(6), s.segment<3>(9)});
    };

    record(y, grid.t0);
    for (std::size_t k = 0; k < n; ++k) {
        y = rk4_step<12>(y, grid.dt, rhs);
        record(y, grid.time(k + 1));
    }
    return tr;
}

}  // namespace gyrofdi
