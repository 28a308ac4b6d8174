#pragma once

#include "gyrofdi/astro.hpp"
#include "gyrofdi/constants.hpp"
#include "gyrofdi/dynamics.hpp"

namespace gyrofdi {

/// Worst-case geometry for the perturbation error bounds (SI units).
struct BoundInputs {
    double r_sp = 1000.0;      // relative distance [m]
    double r_p = 6783.34174e3; // primary orbit radius [m]
    double omega_axis = 0.055; // true rate on the faulty axis [rad/s]
    double s = 0.5;            // hypothesised scale factor
    double b = 0.1 * kDeg;     // hypothesised bias [rad/s]
    DragParams drag;           // shared by both satellites
    EarthConstants earth;
};

void validate(const BoundInputs& in);

/// r_SP . delta_f
double delta_psi_from_perturbation(const Vec3& r_sp, const Vec3& delta_f);

/// First-order change of the scale-factor root for a residual change dpsi:
/// s (1 - s) dpsi / (2 psi).
double delta_s_from_delta_psi(double s, double psi_tilde, double delta_psi);

/// Same for the bias root: dpsi / (2 coeff b).
double delta_b_from_delta_psi(double b, double coeff, double delta_psi);

/// Generic scale-factor bound for a worst-case perturbation magnitude sum.
double max_delta_s_generic(double r_sp, double omega_axis, double s, double max_accel_sum);

/// Generic bias bound as printed: max_accel_sum / (2 b).
double max_delta_b_generic(double b, double max_accel_sum);

/// mu J2 Re^2 / r^4 [m/s^2]
double j2_scale(double r_p, const EarthConstants& earth);

/// Worst-case |a_J2(S)| + |a_J2(P)|.
double max_combined_j2(double r_p, double r_sp, const EarthConstants& earth = {});

/// Throws std::invalid_argument unless 0 < s < 1.
double max_delta_s_j2(const BoundInputs& in);

/// Throws std::invalid_argument when b == 0.
double max_delta_b_j2(const BoundInputs& in);

struct DragBounds {
    double max_ds = 0.0;
    double max_db = 0.0;
    double ratio_s = 0.0;  // max|ds|/s = ratio_s / (1 - s)
    double ratio_b = 0.0;  // max|db|/b = ratio_b / b^2
    double delta_accel = 0.0;  // |a_d(S) - a_d(P)| on circular orbits [m/s^2]
};

/// Circular orbits, identical ballistic properties for both satellites.
DragBounds drag_bounds(const BoundInputs& in);

struct AdmissibleSets {
    double alpha = 0.0;
    double beta = 0.0;
    double s_plus = 0.0;  // S = {0 < s < s_plus}
    double b_plus = 0.0;  // B = {b > b_plus}
    bool s_empty = false;
};

AdmissibleSets admissible_sets(double alpha, double beta, const BoundInputs& in);

/// Coefficient c in s_plus = 1 - c/alpha.
double s_plus_coefficient(const BoundInputs& in);
/// Coefficient c in b_plus = sqrt(c/beta).
double b_plus_coefficient(const BoundInputs& in);

}  // namespace gyrofdi
