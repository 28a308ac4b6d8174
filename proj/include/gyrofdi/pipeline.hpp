#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gyrofdi/astro.hpp"
#include "gyrofdi/dynamics.hpp"
#include "gyrofdi/fdi.hpp"
#include "gyrofdi/sensors.hpp"

namespace gyrofdi {

enum class DerivativeMode { Fd4, Exact };
enum class WindowStart { Detection, Activation };

std::string to_string(DerivativeMode m);
std::string to_string(WindowStart w);

/// Secondary orbit given as element offsets from the primary.
struct ElementOffsets {
    double da = 1000.0;  // [m]
    double de = 0.0;
    double di = 0.0;  // [rad]
    double dargp = 0.0;
    double draan = 0.0;
    double dta = 0.0;
};

OrbitalElements apply_offsets(const OrbitalElements& primary, const ElementOffsets& off);

/// Everything needed for one end-to-end run. Initial attitude is the
/// primary's RSW frame at t0.
struct ScenarioConfig {
    std::string name = "custom";
    OrbitalElements primary{6783.34174e3, 0.0014021, 51.27632 * kDeg, 90.69731 * kDeg, 275.17058 * kDeg,
                            309.67626 * kDeg};
    ElementOffsets secondary;
    InertiaTensor inertia{2.29e-2, 2.42e-2, 2.14e-2};
    Vec3 omega0 = Vec3(3.0, 2.5, 5.0) * kDeg;
    std::optional<FaultSpec> fault;
    GyroNoiseSpec gyro;
    RangingNoiseSpec ranging;
    SimulationGrid grid;        // integration grid
    double dt_meas = 0.1;       // [s]
    std::size_t fd_stride = 3;  // stencil spacing in measurement samples
    DerivativeMode derivatives = DerivativeMode::Fd4;
    ForceModel force;
    bool model_j2 = false;  // include J2 in f(t)
    double threshold = 137.0;  // [m^2/s^2]
    std::size_t persistence = 3;
    WindowStart window_start = WindowStart::Detection;
    IsolationOptions isolation;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ScenarioConfig& cfg);

/// Decimation factor dt_meas / dt (throws unless integral).
std::size_t decimation(const ScenarioConfig& cfg);

/// Per-run summary used by campaigns.
struct RunRecord {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool valid = true;
    std::string error;
    bool detected = false;
    double t_fd = 0.0;
    double latency = 0.0;  // t_fd - t_activate
    bool isolated = false;
    Hypothesis winner = Hypothesis::Sx;
    double point_estimate = 0.0;
    bool ambiguous = false;
    std::array<double, 6> scores{};
    // estimate of the injected fault's own hypothesis
    double true_estimate = 0.0;
    double true_refined = 0.0;
    double max_abs_psi = 0.0;
    double max_recovery_error = 0.0;  // winner's |omega_hat - omega| on its axis [rad/s]
};

/// Full sample-level output of one run.
struct RunTrace {
    std::vector<double> t;
    std::vector<double> psi;
    std::vector<PsiCoefficients> coeffs;
    std::vector<Vec3> omega_meas;
    std::vector<Vec3> omega_true;
    std::vector<Vec3> r_sp_meas;
    std::vector<Vec3> r_sp_true;  // body frame
    std::vector<Eigen::Quaterniond> attitude;  // ECI to body
    DetectionReport detection;
    std::optional<IsolationReport> isolation;
};

struct RunOutput {
    RunRecord record;
    RunTrace trace;
};

/// propagate -> sense -> differentiate -> psi -> detect -> isolate. Deterministic
/// in cfg.seed. Propagation failures come back as an invalid record.
RunOutput run_once(const ScenarioConfig& cfg);

/// Index of the first residual sample at or after time t (size() if none).
std::size_t first_index_at(const std::vector<double>& t, double time);

}  // namespace gyrofdi
