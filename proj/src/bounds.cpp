#include "gyrofdi/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace gyrofdi {

void validate(const BoundInputs& in) {
    if (!(in.r_sp > 0.0)) throw std::invalid_argument("relative distance must be positive");
    if (!(in.r_p > in.earth.re)) throw std::invalid_argument("primary radius must exceed the Earth radius");
    if (!(in.omega_axis != 0.0) || !std::isfinite(in.omega_axis)) {
        throw std::invalid_argument("faulty-axis rate must be non-zero");
    }
}

double delta_psi_from_perturbation(const Vec3& r_sp, const Vec3& delta_f) { return r_sp.dot(delta_f); }

double delta_s_from_delta_psi(double s, double psi_tilde, double delta_psi) {
    if (psi_tilde == 0.0) throw std::invalid_argument("residual must be non-zero");
    return s * (1.0 - s) / (2.0 * psi_tilde) * delta_psi;
}

double delta_b_from_delta_psi(double b, double coeff, double delta_psi) {
    if (b == 0.0 || coeff == 0.0) throw std::invalid_argument("bias and coefficient must be non-zero");
    return delta_psi / (2.0 * coeff * b);
}

double max_delta_s_generic(double r_sp, double w, double s, double max_accel_sum) {
    return max_accel_sum / (2.0 * r_sp * w * w) * s / (1.0 - s);
}

double max_delta_b_generic(double b, double max_accel_sum) { return max_accel_sum / (2.0 * std::abs(b)); }

double j2_scale(double r_p, const EarthConstants& e) {
    const double r2 = r_p * r_p;
    return e.mu * e.j2 * e.re * e.re / (r2 * r2);
}

double max_combined_j2(double r_p, double r_sp, const EarthConstants& e) {
    if (!(r_p > 0.0)) throw std::invalid_argument("primary radius must be positive");
    const double k = 3.0 * e.mu * e.j2 * e.re * e.re;
    const double q = r_p * r_p + r_sp * r_sp;
    const double r2 = r_p * r_p;
    return k * (1.0 / (q * q) + 1.0 / (r2 * r2));
}

double max_delta_s_j2(const BoundInputs& in) {
    validate(in);
    if (!(in.s > 0.0 && in.s < 1.0)) throw std::invalid_argument("scale-factor bound requires 0 < s < 1");
    const double w2 = in.omega_axis * in.omega_axis;
    return 3.0 / (in.r_sp * w2) * in.s / (1.0 - in.s) * j2_scale(in.r_p, in.earth);
}

double max_delta_b_j2(const BoundInputs& in) {
    validate(in);
    if (in.b == 0.0) throw std::invalid_argument("bias bound requires b != 0");
    return 3.0 / std::abs(in.b) * j2_scale(in.r_p, in.earth);
}

DragBounds drag_bounds(const BoundInputs& in) {
    validate(in);
    const DragParams& d = in.drag;
    if (!(d.scale_height > 0.0) || !(d.rho0 > 0.0) || !(d.mass > 0.0) || !(d.area > 0.0) || !(d.cd > 0.0)) {
        throw std::invalid_argument("drag bound needs positive atmosphere and ballistic parameters");
    }
    const double H = d.scale_height;
    const double rp = in.r_p;
    const double rs = in.r_p + in.r_sp;
    // exp((h0+Re)/H) exp(-r/H) folded into one exponent to avoid overflow
    const double es = std::exp((d.h0 + in.earth.re - rs) / H) / rs;
    const double ep = std::exp((d.h0 + in.earth.re - rp) / H) / rp;
    const double bracket = std::abs(es - ep);
    const double k = in.earth.mu * d.area * d.cd * d.rho0 / d.mass;

    DragBounds out;
    out.delta_accel = 0.5 * k * bracket;
    const double w2 = in.omega_axis * in.omega_axis;
    out.ratio_s = k / (4.0 * in.r_sp * w2) * bracket;
    out.ratio_b = out.delta_accel / 2.0;
    if (in.s > 0.0 && in.s < 1.0) out.max_ds = out.ratio_s * in.s / (1.0 - in.s);
    if (in.b != 0.0) out.max_db = out.ratio_b / std::abs(in.b);
    return out;
}

double s_plus_coefficient(const BoundInputs& in) {
    validate(in);
    return 3.0 * j2_scale(in.r_p, in.earth) / (in.r_sp * in.omega_axis * in.omega_axis);
}

double b_plus_coefficient(const BoundInputs& in) {
    validate(in);
    return 3.0 * j2_scale(in.r_p, in.earth);
}

AdmissibleSets admissible_sets(double alpha, double beta, const BoundInputs& in) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
    AdmissibleSets out;
    out.alpha = alpha;
    out.beta = beta;
    out.s_plus = 1.0 - s_plus_coefficient(in) / alpha;
    out.b_plus = std::sqrt(b_plus_coefficient(in) / beta);
    out.s_empty = out.s_plus <= 0.0;
    return out;
}

}  // namespace gyrofdi
