#include "gyrofdi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gyrofdi/seeds.hpp"

namespace gyrofdi {

std::string to_string(DerivativeMode m) { return m == DerivativeMode::Fd4 ? "fd4" : "exact"; }
std::string to_string(WindowStart w) { return w == WindowStart::Detection ? "detection" : "activation"; }

OrbitalElements apply_offsets(const OrbitalElements& p, const ElementOffsets& o) {
    OrbitalElements s = p;
    s.a += o.da;
    s.e += o.de;
    s.i += o.di;
    s.argp += o.dargp;
    s.raan += o.draan;
    s.ta += o.dta;
    return s;
}

void validate(const ScenarioConfig& cfg) {
    validate(cfg.primary);
    validate(apply_offsets(cfg.primary, cfg.secondary));
    validate(cfg.inertia);
    cfg.grid.steps();
    decimation(cfg);
    if (cfg.fd_stride == 0) throw std::invalid_argument("simulation.fd_stride must be positive");
    if (cfg.gyro.sigma_g < 0.0) throw std::invalid_argument("sensors.gyro_sigma must be non-negative");
    if (cfg.ranging.sigma_axis < 0.0) throw std::invalid_argument("sensors.range_sigma must be non-negative");
    if (!(cfg.threshold > 0.0)) throw std::invalid_argument("fdi.threshold must be positive");
    if (cfg.persistence == 0) throw std::invalid_argument("fdi.persistence must be positive");
    if (cfg.fault && (cfg.fault->t_activate < cfg.grid.t0 || cfg.fault->t_activate > cfg.grid.t_end)) {
        throw std::invalid_argument("fault activation time lies outside the simulation span");
    }
    if (!cfg.omega0.allFinite()) throw std::invalid_argument("attitude.omega0 must be finite");
}

std::size_t decimation(const ScenarioConfig& cfg) {
    if (!(cfg.dt_meas > 0.0)) throw std::invalid_argument("simulation.dt_meas must be positive");
    const double m = cfg.dt_meas / cfg.grid.dt;
    const double r = std::round(m);
    if (r < 1.0 || std::abs(m - r) > 1e-9 * r) {
        throw std::invalid_argument("simulation.dt_meas must be an integer multiple of simulation.dt");
    }
    return static_cast<std::size_t>(r);
}

std::size_t first_index_at(const std::vector<double>& t, double time) {
    const auto it = std::lower_bound(t.begin(), t.end(), time - 1e-9);
    return static_cast<std::size_t>(it - t.begin());
}

RunOutput run_once(const ScenarioConfig& cfg) {
    RunOutput out;
    RunRecord& rec = out.record;
    RunTrace& tr = out.trace;
    rec.seed = cfg.seed;

    validate(cfg);
    const std::size_t dec = decimation(cfg);
    const double mu = cfg.force.earth.mu;

    FormationTrajectory form;
    std::vector<AttitudeState> att;
    try {
        const InertialState p0 = elements_to_state(cfg.primary, mu);
        const InertialState s0 = elements_to_state(apply_offsets(cfg.primary, cfg.secondary), mu);
        const Eigen::Quaterniond q0(rsw_frame(p0).dcm);
        form = propagate_formation(p0, s0, cfg.force, cfg.grid);
        att = propagate_attitude({q0, cfg.omega0}, cfg.inertia, cfg.grid);
    } catch (const SimulationError& e) {
        rec.valid = false;
        rec.error = e.what();
        return out;
    } catch (const DegenerateOrbitError& e) {
        rec.valid = false;
        rec.error = e.what();
        return out;
    }

    // measurement samples
    const std::size_t n_int = form.primary.size();
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n_int; k += dec) idx.push_back(k);
    const std::size_t n = idx.size();

    GyroSensor gyro({cfg.gyro.sigma_g, derive_seed(cfg.seed, 1)}, cfg.fault);
    RangeSensor range({cfg.ranging.sigma_axis, derive_seed(cfg.seed, 2)});

    std::vector<double> times(n);
    std::vector<Vec3> r_meas(n), w_meas(n), w_true(n);
    std::vector<Mat3> dcm(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = idx[j];
        times[j] = cfg.grid.time(k);
        dcm[j] = att[k].eci_to_body();
        w_true[j] = att[k].omega;
        w_meas[j] = gyro.measure(att[k].omega, times[j]);
        r_meas[j] = range.measure(dcm[j] * form.relative[k].r);
    }

    const std::size_t st = cfg.fd_stride;
    const double h = cfg.dt_meas * static_cast<double>(st);
    const bool exact = cfg.derivatives == DerivativeMode::Exact;
    const std::size_t lo = exact ? 0 : 2 * st;
    const std::size_t hi = exact ? n : (n > 2 * st ? n - 2 * st : 0);

    std::vector<ResidualSample> res;
    res.reserve(hi > lo ? hi - lo : 0);
    for (std::size_t j = lo; j < hi; ++j) {
        const std::size_t k = idx[j];
        const Mat3& c = dcm[j];
        const Vec3 w = w_true[j];
        Vec3 r, v, a;
        if (exact) {
            const InertialState ps = form.primary[k];
            const InertialState ss = form.secondary(k);
            const Vec3 da = total_accel(ss, cfg.force, cfg.force.drag_secondary) -
                            total_accel(ps, cfg.force, cfg.force.drag_primary);
            const Vec3 wd = torque_free_rate(w, cfg.inertia);
            r = c * form.relative[k].r;
            v = c * form.relative[k].v - w.cross(r);
            a = c * da - 2.0 * w.cross(v) - wd.cross(r) - w.cross(w.cross(r));
        } else {
            const std::array<Vec3, 5> win = centred_window(r_meas, j, st);
            r = r_meas[j];
            v = fd4_first_derivative(win, h);
            a = fd4_second_derivative(win, h);
        }
        PerturbationFn pert;
        if (cfg.model_j2) {
            const Vec3 rp_eci = form.primary[k].r;
            const EarthConstants earth = cfg.force.earth;
            pert = [c, rp_eci, earth](const Vec3&, const Vec3& r_sp) -> Vec3 {
                const Vec3 rs_eci = rp_eci + c.transpose() * r_sp;
                return -(c * (j2_accel(rs_eci, earth) - j2_accel(rp_eci, earth)));
            };
        }
        const Vec3 f = compute_f(r, a, c * form.primary[k].r, mu, pert);
        ResidualSample s;
        s.t = times[j];
        s.coeffs = psi_coefficients(r, v, f);
        s.psi = psi(s.coeffs, w_meas[j]);
        res.push_back(s);

        tr.t.push_back(s.t);
        tr.psi.push_back(s.psi);
        tr.coeffs.push_back(s.coeffs);
        tr.omega_meas.push_back(w_meas[j]);
        tr.omega_true.push_back(w);
        tr.r_sp_meas.push_back(r_meas[j]);
        tr.r_sp_true.push_back(c * form.relative[k].r);
        tr.attitude.push_back(att[k].q);
        rec.max_abs_psi = std::max(rec.max_abs_psi, std::abs(s.psi));
    }

    tr.detection = detect(res, cfg.threshold, cfg.persistence);
    rec.detected = tr.detection.detected;
    rec.t_fd = tr.detection.t_fd;
    if (rec.detected && cfg.fault) rec.latency = rec.t_fd - cfg.fault->t_activate;

    std::optional<std::size_t> start;
    if (cfg.window_start == WindowStart::Detection) {
        if (rec.detected) start = tr.detection.index;
    } else if (cfg.fault) {
        const std::size_t i = first_index_at(tr.t, cfg.fault->t_activate);
        if (i < tr.t.size()) start = i;
    }
    if (start) {
        IsolationReport iso = recover_and_decide(tr.omega_meas, tr.coeffs, *start, cfg.threshold, cfg.isolation);
        rec.isolated = true;
        rec.winner = iso.winner;
        rec.point_estimate = iso.point_estimate;
        rec.ambiguous = iso.ambiguous;
        for (int i = 0; i < 6; ++i) rec.scores[i] = iso.hypotheses[i].score;
        if (cfg.fault) {
            const auto& he = iso.of(hypothesis_of(cfg.fault->kind, cfg.fault->axis));
            rec.true_estimate = he.median_estimate;
            rec.true_refined = he.refined_estimate;
        }
        const auto& win = iso.of(iso.winner);
        for (std::size_t i = 0; i < win.omega_hat.size(); ++i) {
            const double e = (win.omega_hat[i] - tr.omega_true[iso.first + i]).cwiseAbs().maxCoeff();
            rec.max_recovery_error = std::max(rec.max_recovery_error, e);
        }
        tr.isolation = std::move(iso);
    }
    return out;
}

}  // namespace gyrofdi
