#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gyrofdi/astro.hpp"
#include "gyrofdi/sensors.hpp"

namespace gyrofdi {

/// Quadratic-form coefficients of the residual. Units: A..F [m^2],
/// G, H, J [m^2/s], K [m^2/s^2].
struct PsiCoefficients {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
    double G = 0, H = 0, J = 0, K = 0;

    Mat3 gmat() const;
    Vec3 beta() const { return {G, H, J}; }
    /// [[G, beta], [beta^T, K]]
    Eigen::Matrix4d block() const;
    double diag(Axis a) const;
    /// |r_SP|^2 recovered from the trace.
    double range_squared() const { return -0.5 * (A + B + C); }
};

/// Conservative perturbation term f_p(r_PO, r_SP), body frame.
using PerturbationFn = std::function<Vec3(const Vec3& r_po, const Vec3& r_sp)>;

Vec3 compute_f(const Vec3& r_sp, const Vec3& a_sp, const Vec3& r_po, double mu,
               const PerturbationFn& pert = {});

PsiCoefficients psi_coefficients(const Vec3& r_sp, const Vec3& v_sp, const Vec3& f);

double psi(const PsiCoefficients& c, const Vec3& omega);
double psi_matrix_form(const PsiCoefficients& c, const Vec3& omega);

/// Full gradient dPsi/domega = 2 (G omega + beta).
Vec3 psi_gradient(const PsiCoefficients& c, const Vec3& omega);

double expected_psi(double r_sp_norm, double sigma_g);

struct PsiVarianceTerms {
    double quadratic = 0.0;  // 2 tr(M S M S), scales with sigma^4
    double linear = 0.0;     // 4 W^T M S M W, scales with sigma^2
    double total() const { return quadratic + linear; }
};

PsiVarianceTerms psi_variance_terms(const PsiCoefficients& c, const Vec3& omega_true, double sigma_g);
double psi_variance(const PsiCoefficients& c, const Vec3& omega_true, double sigma_g);

struct ResidualSample {
    double t = 0.0;
    double psi = 0.0;
    PsiCoefficients coeffs;
};

struct DetectionReport {
    bool detected = false;
    double t_fd = 0.0;
    std::size_t index = 0;  // sample index of t_fd
    double threshold = 0.0;
};

DetectionReport detect(std::span<const ResidualSample> residuals, double threshold, std::size_t persistence = 3);

/// Empirical |psi| quantile with linear interpolation between order statistics.
double calibrate_threshold(std::span<const double> samples, double quantile = 0.9999);

struct FdiGuards {
    double eps_a_rel = 1e-3;  // |coeff| < eps_a_rel * |r_SP|^2 masks a sample
    double eps_omega = 1e-3;  // [rad/s]
};

/// Both branches of a two-root estimate; an invalid branch is masked, not thrown.
struct RootPair {
    double plus = 0.0;
    double minus = 0.0;
    bool plus_valid = false;
    bool minus_valid = false;
};

/// Scale factor s = 1 / (1 +- sqrt(psi / (coeff * w^2))). A branch is masked
/// when the rate it implies, |w| +- sqrt(psi/coeff), is below eps_omega.
RootPair estimate_scale(double psi_val, double coeff, double omega_meas_axis, double range_sq,
                        const FdiGuards& guards = {});

/// Bias b = +- sqrt(psi / coeff) [rad/s].
RootPair estimate_bias(double psi_val, double coeff, double range_sq, const FdiGuards& guards = {});

enum class Hypothesis { Sx = 0, Sy, Sz, Bx, By, Bz };
constexpr std::array<Hypothesis, 6> kAllHypotheses{Hypothesis::Sx, Hypothesis::Sy, Hypothesis::Sz,
                                                   Hypothesis::Bx, Hypothesis::By, Hypothesis::Bz};

std::string to_string(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& s);
Axis hypothesis_axis(Hypothesis h);
FaultKind hypothesis_kind(Hypothesis h);
Hypothesis hypothesis_of(FaultKind kind, Axis axis);

/// Rate corrected under a constant fault value (s or b) on one axis.
Vec3 correct_rate(const Vec3& omega_meas, Hypothesis h, double value);

struct HypothesisEstimate {
    Hypothesis hypothesis = Hypothesis::Sx;
    // per-sample series over the decision window
    std::vector<double> est_plus, est_minus;
    std::vector<char> valid_plus, valid_minus;
    std::vector<char> scored;  // coefficient guard passed
    int branch = 0;            // +1 / -1 chosen root branch, 0 if none valid
    double median_estimate = 0.0;
    double refined_estimate = 0.0;
    std::vector<Vec3> omega_hat;
    std::vector<double> psi_hat;
    double score = 0.0;
    double rms = 0.0;
    std::size_t n_valid = 0;
};

struct IsolationOptions {
    std::size_t window = 0;  // 0: through the end of the series
    FdiGuards guards;
    double ambiguity_margin = 0.05;
    bool refine = true;  // least-squares polish of the constant fault value
};

struct IsolationReport {
    bool ambiguous = false;
    Hypothesis winner = Hypothesis::Sx;
    double point_estimate = 0.0;
    std::size_t first = 0;  // index of the first decision sample
    std::size_t count = 0;
    std::array<HypothesisEstimate, 6> hypotheses;

    const HypothesisEstimate& of(Hypothesis h) const { return hypotheses[static_cast<int>(h)]; }
};

/// Evaluates the six hypotheses on samples [start, start + window) and picks
/// the one whose recovered residual stays within the threshold most often.
/// Throws std::invalid_argument when `start` is past the series or the series
/// lengths disagree.
IsolationReport recover_and_decide(std::span<const Vec3> omega_meas, std::span<const PsiCoefficients> coeffs,
                                   std::size_t start, double threshold, const IsolationOptions& opt = {});

/// Same, starting at the detection sample. Throws std::invalid_argument when
/// nothing was detected.
IsolationReport recover_and_decide(std::span<const Vec3> omega_meas, std::span<const PsiCoefficients> coeffs,
                                   const DetectionReport& detection, double threshold,
                                   const IsolationOptions& opt = {});

}  // namespace gyrofdi
