#include "gyrofdi/fdi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gyrofdi {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

// Psi along one axis as a quadratic a p^2 + b p + c in the fault parameter:
// p = 1/s (recovered rate u*w) for scale factors, p = b for biases.
struct Quadratic {
    double a = 0, b = 0, c = 0;
    double at(double p) const { return (a * p + b) * p + c; }
    double slope(double p) const { return 2.0 * a * p + b; }
};

Quadratic axis_quadratic(const PsiCoefficients& co, const Vec3& w, int k, FaultKind kind) {
    const Mat3 g = co.gmat();
    const Vec3 beta = co.beta();
    double cross = beta[k];
    for (int j = 0; j < 3; ++j) {
        if (j != k) cross += g(k, j) * w[j];
    }
    Vec3 w0 = w;
    w0[k] = 0.0;
    const double rest = psi(co, w0);
    const double akk = g(k, k);
    const double wk = w[k];
    if (kind == FaultKind::ScaleFactor) return {akk * wk * wk, 2.0 * cross * wk, rest};
    // x = wk - b
    return {akk, -2.0 * (akk * wk + cross), akk * wk * wk + 2.0 * cross * wk + rest};
}

double sum_sq(std::span<const Quadratic> qs, double p) {
    double s = 0.0;
    for (const auto& q : qs) {
        const double r = q.at(p);
        s += r * r;
    }
    return s;
}

// Damped Newton on sum_i q_i(p)^2 from p0; never returns a worse point.
double refine_parameter(std::span<const Quadratic> qs, double p0) {
    double p = p0;
    double cost = sum_sq(qs, p);
    for (int it = 0; it < 60 && cost > 0.0; ++it) {
        double g = 0.0, h = 0.0;
        for (const auto& q : qs) {
            const double r = q.at(p);
            const double d = q.slope(p);
            g += 2.0 * r * d;
            h += 2.0 * (d * d + 2.0 * q.a * r);
        }
        if (g == 0.0) break;
        double step = h > 0.0 ? -g / h : -g * 1e-3 / std::max(1.0, std::abs(g));
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double trial = p + step;
            const double tc = sum_sq(qs, trial);
            if (tc < cost) {
                const double rel = std::abs(trial - p) / std::max(1.0, std::abs(p));
                p = trial;
                cost = tc;
                improved = true;
                if (rel < 1e-15) return p;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return p;
}

}  // namespace

Mat3 PsiCoefficients::gmat() const {
    Mat3 m;
    m << A, D, F, D, B, E, F, E, C;
    return m;
}

Eigen::Matrix4d PsiCoefficients::block() const {
    Eigen::Matrix4d m;
    m.topLeftCorner<3, 3>() = gmat();
    m.topRightCorner<3, 1>() = beta();
    m.bottomLeftCorner<1, 3>() = beta().transpose();
    m(3, 3) = K;
    return m;
}

double PsiCoefficients::diag(Axis a) const {
    switch (a) {
        case Axis::X: return A;
        case Axis::Y: return B;
        case Axis::Z: return C;
    }
    return 0.0;
}

Vec3 compute_f(const Vec3& r_sp, const Vec3& a_sp, const Vec3& r_po, double mu, const PerturbationFn& pert) {
    const double rpo = r_po.norm();
    if (!(rpo > 0.0)) throw std::invalid_argument("primary position must be non-zero");
    const Vec3 r_so = r_sp + r_po;
    const double rso = r_so.norm();
    Vec3 f = a_sp + mu / (rso * rso * rso) * r_so - mu / (rpo * rpo * rpo) * r_po;
    if (pert) f += pert(r_po, r_sp);
    return f;
}

PsiCoefficients psi_coefficients(const Vec3& r, const Vec3& v, const Vec3& f) {
    const double r2 = r.squaredNorm();
    PsiCoefficients c;
    c.A = r.x() * r.x() - r2;
    c.B = r.y() * r.y() - r2;
    c.C = r.z() * r.z() - r2;
    c.D = r.x() * r.y();
    c.E = r.y() * r.z();
    c.F = r.z() * r.x();
    c.G = r.z() * v.y() - r.y() * v.z();
    c.H = r.x() * v.z() - r.z() * v.x();
    c.J = r.y() * v.x() - r.x() * v.y();
    c.K = r.dot(f);
    return c;
}

double psi(const PsiCoefficients& c, const Vec3& w) {
    const double x = w.x(), y = w.y(), z = w.z();
    return c.A * x * x + c.B * y * y + c.C * z * z + 2.0 * c.D * x * y + 2.0 * c.E * y * z + 2.0 * c.F * z * x +
           2.0 * c.G * x + 2.0 * c.H * y + 2.0 * c.J * z + c.K;
}

double psi_matrix_form(const PsiCoefficients& c, const Vec3& w) {
    Eigen::Vector4d wb;
    wb << w, 1.0;
    return wb.dot(c.block() * wb);
}

Vec3 psi_gradient(const PsiCoefficients& c, const Vec3& w) { return 2.0 * (c.gmat() * w + c.beta()); }

double expected_psi(double r_sp_norm, double sigma_g) { return -2.0 * r_sp_norm * r_sp_norm * sigma_g * sigma_g; }

PsiVarianceTerms psi_variance_terms(const PsiCoefficients& c, const Vec3& w, double sigma_g) {
    const Eigen::Matrix4d m = c.block();
    const Eigen::Vector4d sig(sigma_g * sigma_g, sigma_g * sigma_g, sigma_g * sigma_g, 0.0);
    const Eigen::Matrix4d ms = m * sig.asDiagonal();
    Eigen::Vector4d wb;
    wb << w, 1.0;
    PsiVarianceTerms t;
    t.quadratic = 2.0 * (ms * ms).trace();
    t.linear = 4.0 * wb.dot(ms * m * wb);
    return t;
}

double psi_variance(const PsiCoefficients& c, const Vec3& w, double sigma_g) {
    return psi_variance_terms(c, w, sigma_g).total();
}

DetectionReport detect(std::span<const ResidualSample> res, double threshold, std::size_t persistence) {
    if (!(threshold > 0.0)) throw std::invalid_argument("detection threshold must be positive");
    if (persistence == 0) throw std::invalid_argument("persistence must be at least one sample");
    DetectionReport rep;
    rep.threshold = threshold;
    std::size_t run = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        run = std::abs(res[i].psi) > threshold ? run + 1 : 0;
        if (run == persistence) {
            rep.detected = true;
            rep.index = i + 1 - persistence;
            rep.t_fd = res[rep.index].t;
            return rep;
        }
    }
    return rep;
}

double calibrate_threshold(std::span<const double> samples, double quantile) {
    if (samples.empty()) throw std::invalid_argument("threshold calibration needs at least one sample");
    if (!(quantile > 0.5 && quantile < 1.0)) throw std::invalid_argument("quantile must lie in (0.5, 1)");
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::abs(x); });
    std::sort(a.begin(), a.end());
    const double pos = quantile * static_cast<double>(a.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, a.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return a[lo] + frac * (a[hi] - a[lo]);
}

RootPair estimate_scale(double psi_val, double coeff, double w, double range_sq, const FdiGuards& guards) {
    RootPair r;
    if (std::abs(coeff) < guards.eps_a_rel * range_sq || coeff == 0.0) return r;
    const double ratio = psi_val / coeff;
    if (ratio < 0.0) return r;
    const double d = std::sqrt(ratio);
    const double aw = std::abs(w);
    // 1/(1 + d/|w|) and 1/(1 - d/|w|) written to stay finite at w = 0
    if (aw + d >= guards.eps_omega) {
        r.plus = aw / (aw + d);
        r.plus_valid = true;
    }
    if (std::abs(aw - d) >= guards.eps_omega) {
        r.minus = aw / (aw - d);
        r.minus_valid = true;
    }
    return r;
}

RootPair estimate_bias(double psi_val, double coeff, double range_sq, const FdiGuards& guards) {
    RootPair r;
    if (std::abs(coeff) < guards.eps_a_rel * range_sq || coeff == 0.0) return r;
    const double ratio = psi_val / coeff;
    if (ratio < 0.0) return r;
    const double d = std::sqrt(ratio);
    r.plus = d;
    r.minus = -d;
    r.plus_valid = r.minus_valid = true;
    return r;
}

std::string to_string(Hypothesis h) {
    static const char* names[] = {"Sx", "Sy", "Sz", "Bx", "By", "Bz"};
    return names[static_cast<int>(h)];
}

Hypothesis parse_hypothesis(const std::string& s) {
    for (auto h : kAllHypotheses) {
        if (to_string(h) == s) return h;
    }
    throw std::invalid_argument("unknown hypothesis '" + s + "'");
}

Axis hypothesis_axis(Hypothesis h) { return static_cast<Axis>(static_cast<int>(h) % 3); }

FaultKind hypothesis_kind(Hypothesis h) {
    return static_cast<int>(h) < 3 ? FaultKind::ScaleFactor : FaultKind::Bias;
}

Hypothesis hypothesis_of(FaultKind kind, Axis axis) {
    return static_cast<Hypothesis>((kind == FaultKind::Bias ? 3 : 0) + static_cast<int>(axis));
}

Vec3 correct_rate(const Vec3& w, Hypothesis h, double value) {
    Vec3 out = w;
    const int k = static_cast<int>(hypothesis_axis(h));
    if (hypothesis_kind(h) == FaultKind::ScaleFactor) {
        out[k] = w[k] / value;
    } else {
        out[k] = w[k] - value;
    }
    return out;
}

IsolationReport recover_and_decide(std::span<const Vec3> omega, std::span<const PsiCoefficients> coeffs,
                                   std::size_t start, double threshold, const IsolationOptions& opt) {
    if (omega.size() != coeffs.size()) throw std::invalid_argument("rate and coefficient series differ in length");
    if (start >= omega.size()) throw std::invalid_argument("decision window starts past the end of the series");
    if (!(threshold > 0.0)) throw std::invalid_argument("isolation threshold must be positive");

    const std::size_t n = opt.window == 0 ? omega.size() - start : std::min(opt.window, omega.size() - start);
    IsolationReport rep;
    rep.first = start;
    rep.count = n;

    for (auto h : kAllHypotheses) {
        HypothesisEstimate& he = rep.hypotheses[static_cast<int>(h)];
        he.hypothesis = h;
        const int k = static_cast<int>(hypothesis_axis(h));
        const FaultKind kind = hypothesis_kind(h);
        he.est_plus.assign(n, 0.0);
        he.est_minus.assign(n, 0.0);
        he.valid_plus.assign(n, 0);
        he.valid_minus.assign(n, 0);
        he.scored.assign(n, 0);

        std::vector<Quadratic> quads;
        quads.reserve(n);
        std::vector<double> plus_vals, minus_vals;
        for (std::size_t i = 0; i < n; ++i) {
            const PsiCoefficients& co = coeffs[start + i];
            const Vec3& w = omega[start + i];
            const double coeff = co.diag(static_cast<Axis>(k));
            const double rsq = co.range_squared();
            const double pv = psi(co, w);
            he.scored[i] = std::abs(coeff) >= opt.guards.eps_a_rel * rsq && coeff != 0.0;
            if (he.scored[i]) quads.push_back(axis_quadratic(co, w, k, kind));
            const RootPair rp = kind == FaultKind::ScaleFactor ? estimate_scale(pv, coeff, w[k], rsq, opt.guards)
                                                               : estimate_bias(pv, coeff, rsq, opt.guards);
            he.est_plus[i] = rp.plus;
            he.est_minus[i] = rp.minus;
            he.valid_plus[i] = rp.plus_valid;
            he.valid_minus[i] = rp.minus_valid;
            if (rp.plus_valid) plus_vals.push_back(rp.plus);
            if (rp.minus_valid) minus_vals.push_back(rp.minus);
        }

        struct Candidate {
            int branch;
            double median, refined, score, rms;
        };
        std::optional<Candidate> best;
        std::vector<Candidate> cands;
        for (int branch : {+1, -1}) {
            const auto& vals = branch > 0 ? plus_vals : minus_vals;
            if (vals.empty()) continue;
            Candidate c{branch, median_of(vals), 0.0, 0.0, 0.0};
            c.refined = c.median;
            if (opt.refine && !quads.empty()) {
                if (kind == FaultKind::Bias) {
                    c.refined = refine_parameter(quads, c.median);
                } else if (std::abs(c.median) > 1e-6) {
                    const double u = refine_parameter(quads, 1.0 / c.median);
                    if (u != 0.0 && std::isfinite(u)) c.refined = 1.0 / u;
                }
            }
            std::size_t inside = 0, count = 0;
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!he.scored[i]) continue;
                const double ph = psi(coeffs[start + i], correct_rate(omega[start + i], h, c.refined));
                ++count;
                ss += ph * ph;
                if (std::abs(ph) <= threshold) ++inside;
            }
            if (count == 0) continue;
            c.score = static_cast<double>(inside) / static_cast<double>(count);
            c.rms = std::sqrt(ss / static_cast<double>(count));
            if (!std::isfinite(c.rms)) c.rms = std::numeric_limits<double>::infinity();
            cands.push_back(c);
            if (!best || c.score > best->score || (c.score == best->score && c.rms < best->rms)) best = c;
        }
        // both branches often polish to the same value; report the median of
        // the branch lying closest to the polished one
        if (best) {
            for (const auto& c : cands) {
                if (std::abs(c.median - best->refined) < std::abs(best->median - best->refined)) {
                    best->branch = c.branch;
                    best->median = c.median;
                }
            }
        }

        he.n_valid = std::count(he.scored.begin(), he.scored.end(), 1);
        if (!best) {
            he.branch = 0;
            he.score = 0.0;
            he.rms = std::numeric_limits<double>::infinity();
            he.median_estimate = he.refined_estimate = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        he.branch = best->branch;
        he.score = best->score;
        he.rms = best->rms;
        he.median_estimate = best->median;
        he.refined_estimate = best->refined;
        he.omega_hat.resize(n);
        he.psi_hat.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            he.omega_hat[i] = correct_rate(omega[start + i], h, he.refined_estimate);
            he.psi_hat[i] = psi(coeffs[start + i], he.omega_hat[i]);
        }
    }

    std::array<int, 6> order{0, 1, 2, 3, 4, 5};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ha = rep.hypotheses[a];
        const auto& hb = rep.hypotheses[b];
        if (ha.score != hb.score) return ha.score > hb.score;
        return ha.rms < hb.rms;
    });
    const auto& top = rep.hypotheses[order[0]];
    rep.winner = top.hypothesis;
    rep.point_estimate = top.median_estimate;
    rep.ambiguous = top.score - rep.hypotheses[order[1]].score < opt.ambiguity_margin;
    return rep;
}

IsolationReport recover_and_decide(std::span<const Vec3> omega, std::span<const PsiCoefficients> coeffs,
                                   const DetectionReport& detection, double threshold, const IsolationOptions& opt) {
    if (!detection.detected) throw std::invalid_argument("isolation requires a detected fault");
    return recover_and_decide(omega, coeffs, detection.index, threshold, opt);
}

}  // namespace gyrofdi
