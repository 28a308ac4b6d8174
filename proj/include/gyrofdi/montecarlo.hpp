#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gyrofdi/pipeline.hpp"

namespace gyrofdi {

/// One-sigma initial-condition uncertainty (SI / rad).
struct UncertaintySpec {
    double sigma_a = 0.0;
    double sigma_e = 0.0;
    double sigma_i = 0.0;
    double sigma_argp = 0.0;
    double sigma_raan = 0.0;
    double sigma_ta = 0.0;
    Vec3 sigma_omega0 = Vec3::Zero();

    /// Reference table with sigma_a read as 15 km.
    static UncertaintySpec reference();
    /// Same table with sigma_a read as 15 m.
    static UncertaintySpec reference_metre();
    static UncertaintySpec none() { return {}; }
};

void validate(const UncertaintySpec& u);

/// Perturbs the primary elements and omega0; the secondary keeps its offsets
/// relative to the perturbed primary.
ScenarioConfig sample_initial(const ScenarioConfig& cfg, const UncertaintySpec& unc, std::uint64_t seed);

struct Stats {
    std::size_t n = 0;
    double mean = 0.0, std = 0.0, median = 0.0, q01 = 0.0, q99 = 0.0;
};

/// Sample statistics (std with n-1); quantiles by linear interpolation.
Stats summarize(std::vector<double> values);

struct EnvelopeRow {
    double t = 0.0;
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;
};

struct CampaignOptions {
    std::size_t runs = 100;
    std::uint64_t base_seed = 1;
    std::size_t workers = 1;
    bool keep_psi = false;  // retain every residual sample (for calibration)
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct CampaignResult {
    std::vector<RunRecord> runs;
    std::size_t n_valid = 0;
    std::size_t n_detected = 0;
    double detection_rate = 0.0;  // over valid runs
    Stats t_fd, latency, point_estimate, true_estimate, max_abs_psi;
    std::map<std::string, std::size_t> winners;
    std::vector<EnvelopeRow> envelope;
    std::vector<double> all_psi;  // run-major, filled when keep_psi
};

/// Seed of run i; the campaign result does not depend on the worker count.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

CampaignResult run_campaign(const ScenarioConfig& cfg, const UncertaintySpec& unc, const CampaignOptions& opt);

struct Calibration {
    double quantile = 0.0;
    double threshold = 0.0;  // quantile of |psi| over every faultless sample
    double max_abs_psi = 0.0;
    std::size_t runs = 0;
    std::size_t samples = 0;
};

/// Faultless campaign (any configured fault is dropped) and the |psi| quantile.
Calibration calibrate(const ScenarioConfig& cfg, const UncertaintySpec& unc, CampaignOptions opt, double quantile);

enum class SweepParam { DeltaA, Scale, Bias };
std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& s);

struct SweepRecord {
    double value = 0.0;  // SI: m, dimensionless, rad/s
    bool valid = true;
    double t_probe = 0.0;
    double psi_probe = 0.0;       // residual at the probe sample
    double mean_post_psi = 0.0;   // mean over samples after activation
    double max_abs_post_psi = 0.0;
    double coeff_probe = 0.0;     // A, B or C on the faulty axis at the probe
    double omega_probe = 0.0;     // true rate on the faulty axis at the probe
};

/// One run per value with the config's seed. s / b sweeps use the config's
/// fault axis and activation time (x at 23 s when the config has none).
/// The probe sample is the first one at or after `t_probe` (default: 5 s
/// after activation).
std::vector<SweepRecord> sweep(const ScenarioConfig& cfg, SweepParam param, const std::vector<double>& values,
                               double t_probe = -1.0);

struct ParabolaFit {
    double a = 0, b = 0, c = 0;  // y = a x^2 + b x + c
    double r2 = 0;
    double vertex() const { return -b / (2.0 * a); }
};

/// Least-squares quadratic; throws with fewer than three points.
ParabolaFit fit_parabola(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gyrofdi
