#include "gyrofdi/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "gyrofdi/seeds.hpp"

namespace gyrofdi {

UncertaintySpec UncertaintySpec::reference() {
    UncertaintySpec u;
    u.sigma_a = 15.0 * kKm;
    u.sigma_e = 1e-5;
    u.sigma_i = u.sigma_argp = u.sigma_raan = u.sigma_ta = 1e-3 * kDeg;
    u.sigma_omega0 = Vec3::Constant(360.0 * kDegPerHour);
    return u;
}

UncertaintySpec UncertaintySpec::reference_metre() {
    UncertaintySpec u = reference();
    u.sigma_a = 15.0;
    return u;
}

void validate(const UncertaintySpec& u) {
    const bool ok = u.sigma_a >= 0 && u.sigma_e >= 0 && u.sigma_i >= 0 && u.sigma_argp >= 0 &&
                    u.sigma_raan >= 0 && u.sigma_ta >= 0 && (u.sigma_omega0.array() >= 0).all();
    if (!ok) throw std::invalid_argument("uncertainty sigmas must be non-negative");
}

ScenarioConfig sample_initial(const ScenarioConfig& cfg, const UncertaintySpec& u, std::uint64_t seed) {
    validate(u);
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    // fixed draw order keeps streams comparable when a sigma is zero
    auto draw = [&](double sigma) { return sigma * n01(eng); };
    ScenarioConfig out = cfg;
    out.primary.a += draw(u.sigma_a);
    out.primary.e = std::clamp(out.primary.e + draw(u.sigma_e), 0.0, 1.0 - 1e-9);
    out.primary.i = std::clamp(out.primary.i + draw(u.sigma_i), 0.0, kPi);
    out.primary.argp += draw(u.sigma_argp);
    out.primary.raan += draw(u.sigma_raan);
    out.primary.ta += draw(u.sigma_ta);
    for (int k = 0; k < 3; ++k) out.omega0[k] += draw(u.sigma_omega0[k]);
    return out;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

Stats summarize(std::vector<double> v) {
    Stats s;
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
    s.n = v.size();
    if (v.empty()) {
        s.mean = s.std = s.median = s.q01 = s.q99 = std::nan("");
        return s;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    std::sort(v.begin(), v.end());
    s.median = quantile_sorted(v, 0.5);
    s.q01 = quantile_sorted(v, 0.01);
    s.q99 = quantile_sorted(v, 0.99);
    return s;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return derive_seed(base_seed, run); }

CampaignResult run_campaign(const ScenarioConfig& cfg, const UncertaintySpec& unc, const CampaignOptions& opt) {
    if (opt.runs == 0) throw std::invalid_argument("campaign needs at least one run");
    validate(cfg);
    validate(unc);

    const std::size_t n = opt.runs;
    std::vector<RunRecord> records(n);
    std::vector<std::vector<double>> psi_t(n), psi_v(n);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mu;
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                const std::uint64_t seed = run_seed(opt.base_seed, i);
                ScenarioConfig c = sample_initial(cfg, unc, derive_seed(seed, 3));
                c.seed = seed;
                RunOutput ro = run_once(c);
                ro.record.run = i;
                records[i] = std::move(ro.record);
                psi_t[i] = std::move(ro.trace.t);
                psi_v[i] = std::move(ro.trace.psi);
            } catch (...) {
                std::lock_guard<std::mutex> lk(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (opt.progress) {
                std::lock_guard<std::mutex> lk(progress_mu);
                opt.progress(d, n);
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(opt.workers, n));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // ordered reduction
    CampaignResult res;
    std::vector<double> tfd, lat, est, test, mx;
    for (std::size_t i = 0; i < n; ++i) {
        const RunRecord& r = records[i];
        if (!r.valid) continue;
        ++res.n_valid;
        mx.push_back(r.max_abs_psi);
        if (r.detected) {
            ++res.n_detected;
            tfd.push_back(r.t_fd);
            lat.push_back(r.latency);
        }
        if (r.isolated) {
            ++res.winners[to_string(r.winner)];
            est.push_back(r.point_estimate);
            test.push_back(r.true_estimate);
        }
    }
    res.detection_rate = res.n_valid ? static_cast<double>(res.n_detected) / static_cast<double>(res.n_valid) : 0.0;
    res.t_fd = summarize(tfd);
    res.latency = summarize(lat);
    res.point_estimate = summarize(est);
    res.true_estimate = summarize(test);
    res.max_abs_psi = summarize(mx);

    // envelope per sample index over valid runs with the full series
    std::size_t len = 0;
    for (std::size_t i = 0; i < n; ++i) len = std::max(len, psi_v[i].size());
    res.envelope.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        double mean = 0.0, m2 = 0.0;
        std::size_t c = 0;
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (k >= psi_v[i].size()) continue;
            const double x = psi_v[i][k];
            ++c;
            const double d = x - mean;
            mean += d / static_cast<double>(c);
            m2 += d * (x - mean);
            t = psi_t[i][k];
        }
        res.envelope[k] = {t, c, mean, c > 1 ? std::sqrt(m2 / static_cast<double>(c - 1)) : 0.0};
    }
    if (opt.keep_psi) {
        for (std::size_t i = 0; i < n; ++i) res.all_psi.insert(res.all_psi.end(), psi_v[i].begin(), psi_v[i].end());
    }
    res.runs = std::move(records);
    return res;
}

Calibration calibrate(const ScenarioConfig& cfg, const UncertaintySpec& unc, CampaignOptions opt, double quantile) {
    ScenarioConfig c = cfg;
    c.fault.reset();
    opt.keep_psi = true;
    const CampaignResult res = run_campaign(c, unc, opt);
    if (res.all_psi.empty()) throw SimulationError("calibration campaign produced no residual samples");
    Calibration cal;
    cal.quantile = quantile;
    cal.threshold = calibrate_threshold(res.all_psi, quantile);
    cal.runs = res.n_valid;
    cal.samples = res.all_psi.size();
    for (double x : res.all_psi) cal.max_abs_psi = std::max(cal.max_abs_psi, std::abs(x));
    return cal;
}

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::DeltaA: return "delta_a";
        case SweepParam::Scale: return "s";
        case SweepParam::Bias: return "b";
    }
    return "?";
}

SweepParam parse_sweep_param(const std::string& s) {
    if (s == "delta_a") return SweepParam::DeltaA;
    if (s == "s") return SweepParam::Scale;
    if (s == "b") return SweepParam::Bias;
    throw std::invalid_argument("sweep parameter must be delta_a, s or b, got '" + s + "'");
}

std::vector<SweepRecord> sweep(const ScenarioConfig& cfg, SweepParam param, const std::vector<double>& values,
                               double t_probe) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    FaultSpec base;
    if (cfg.fault) {
        base = *cfg.fault;
        base.profile = nullptr;
    } else {
        base.axis = Axis::X;
        base.t_activate = 23.0;
    }
    const double probe = t_probe >= 0.0 ? t_probe : base.t_activate + 5.0;
    const int ax = static_cast<int>(base.axis);

    std::vector<SweepRecord> out;
    out.reserve(values.size());
    for (double v : values) {
        ScenarioConfig c = cfg;
        switch (param) {
            case SweepParam::DeltaA:
                c.secondary.da = v;
                break;
            case SweepParam::Scale:
                c.fault = base;
                c.fault->kind = FaultKind::ScaleFactor;
                c.fault->value = v;
                break;
            case SweepParam::Bias:
                c.fault = base;
                c.fault->kind = FaultKind::Bias;
                c.fault->value = v;
                break;
        }
        SweepRecord rec;
        rec.value = v;
        const RunOutput ro = run_once(c);
        if (!ro.record.valid) {
            rec.valid = false;
            out.push_back(rec);
            continue;
        }
        const auto& tr = ro.trace;
        const std::size_t ip = first_index_at(tr.t, probe);
        if (ip < tr.t.size()) {
            rec.t_probe = tr.t[ip];
            rec.psi_probe = tr.psi[ip];
            rec.coeff_probe = tr.coeffs[ip].diag(base.axis);
            rec.omega_probe = tr.omega_true[ip][ax];
        }
        const std::size_t ia = first_index_at(tr.t, c.fault ? c.fault->t_activate : base.t_activate);
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = ia; i < tr.t.size(); ++i) {
            sum += tr.psi[i];
            ++cnt;
            rec.max_abs_post_psi = std::max(rec.max_abs_post_psi, std::abs(tr.psi[i]));
        }
        rec.mean_post_psi = cnt ? sum / static_cast<double>(cnt) : 0.0;
        out.push_back(rec);
    }
    return out;
}

ParabolaFit fit_parabola(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("parabola fit needs three or more points");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd m(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        m(i, 0) = xi * xi;
        m(i, 1) = xi;
        m(i, 2) = 1.0;
        rhs(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d p = m.colPivHouseholderQr().solve(rhs);
    ParabolaFit f{p(0), p(1), p(2), 0.0};
    const double mean = rhs.mean();
    const double ss_tot = (rhs.array() - mean).square().sum();
    const double ss_res = (m * p - rhs).squaredNorm();
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace gyrofdi
