#include "gyrofdi/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gyrofdi {

namespace {

CsvTable make(const std::string& schema, std::vector<std::string> cols, std::vector<std::string> units) {
    CsvTable t;
    t.schema = schema;
    t.columns = std::move(cols);
    t.units = std::move(units);
    return t;
}

void push3(std::vector<std::string>& row, const Vec3& v) {
    for (int k = 0; k < 3; ++k) row.push_back(fmt(v[k]));
}

const char* kHyp[] = {"sx", "sy", "sz", "bx", "by", "bz"};

// scale faults are dimensionless, bias faults in rad/s
const char* value_unit(Hypothesis h) { return hypothesis_kind(h) == FaultKind::Bias ? "rad/s" : "1"; }

}  // namespace

CsvTable trajectory_table(const RunTrace& tr) {
    CsvTable t = make("trajectory",
                      {"t", "qw", "qx", "qy", "qz", "wx", "wy", "wz", "rx", "ry", "rz"},
                      {"s", "1", "1", "1", "1", "rad/s", "rad/s", "rad/s", "m", "m", "m"});
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        std::vector<std::string> row{fmt(tr.t[i])};
        const auto& q = tr.attitude[i];
        for (double c : {q.w(), q.x(), q.y(), q.z()}) row.push_back(fmt(c));
        push3(row, tr.omega_true[i]);
        push3(row, tr.r_sp_true[i]);
        t.add_row(std::move(row));
    }
    return t;
}

CsvTable measurements_table(const RunTrace& tr) {
    CsvTable t = make("measurements", {"t", "wx", "wy", "wz", "rx", "ry", "rz"},
                      {"s", "rad/s", "rad/s", "rad/s", "m", "m", "m"});
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        std::vector<std::string> row{fmt(tr.t[i])};
        push3(row, tr.omega_meas[i]);
        push3(row, tr.r_sp_meas[i]);
        t.add_row(std::move(row));
    }
    return t;
}

CsvTable residuals_table(const RunTrace& tr, double threshold) {
    CsvTable t = make("residuals",
                      {"t", "psi", "exceeds", "A", "B", "C", "D", "E", "F", "G", "H", "J", "K"},
                      {"s", "m^2/s^2", "bool", "m^2", "m^2", "m^2", "m^2", "m^2", "m^2", "m^2/s", "m^2/s",
                       "m^2/s", "m^2/s^2"});
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const PsiCoefficients& c = tr.coeffs[i];
        t.add_row({fmt(tr.t[i]), fmt(tr.psi[i]), fmt(std::abs(tr.psi[i]) > threshold), fmt(c.A), fmt(c.B),
                   fmt(c.C), fmt(c.D), fmt(c.E), fmt(c.F), fmt(c.G), fmt(c.H), fmt(c.J), fmt(c.K)});
    }
    return t;
}

CsvTable hypotheses_table(const RunTrace& tr) {
    CsvTable t = make("hypotheses",
                      {"hypothesis", "winner", "branch", "median_estimate", "refined_estimate", "unit", "score",
                       "rms_psi", "n_valid"},
                      {"-", "bool", "1", "mixed", "mixed", "-", "1", "m^2/s^2", "1"});
    if (!tr.isolation) return t;
    const IsolationReport& iso = *tr.isolation;
    for (Hypothesis h : kAllHypotheses) {
        const HypothesisEstimate& e = iso.of(h);
        t.add_row({kHyp[static_cast<int>(h)], fmt(h == iso.winner), std::to_string(e.branch),
                   fmt(e.median_estimate), fmt(e.refined_estimate), value_unit(h), fmt(e.score), fmt(e.rms),
                   fmt(e.n_valid)});
    }
    return t;
}

CsvTable hypothesis_series_table(const RunTrace& tr) {
    CsvTable t = make("hypothesis_series",
                      {"t", "hypothesis", "est_plus", "est_minus", "valid_plus", "valid_minus", "wx_hat", "wy_hat",
                       "wz_hat", "psi_hat"},
                      {"s", "-", "mixed", "mixed", "bool", "bool", "rad/s", "rad/s", "rad/s", "m^2/s^2"});
    if (!tr.isolation) return t;
    const IsolationReport& iso = *tr.isolation;
    for (std::size_t i = 0; i < iso.count; ++i) {
        for (Hypothesis h : kAllHypotheses) {
            const HypothesisEstimate& e = iso.of(h);
            std::vector<std::string> row{fmt(tr.t[iso.first + i]), kHyp[static_cast<int>(h)], fmt(e.est_plus[i]),
                                         fmt(e.est_minus[i]), fmt(e.valid_plus[i] != 0),
                                         fmt(e.valid_minus[i] != 0)};
            push3(row, e.omega_hat[i]);
            row.push_back(fmt(e.psi_hat[i]));
            t.add_row(std::move(row));
        }
    }
    return t;
}

CsvTable detection_table(const RunRecord& rec) {
    CsvTable t = make("detection", {"t_fd", "latency", "winner", "point_estimate", "ambiguous"},
                      {"s", "s", "-", "mixed", "bool"});
    if (rec.detected) {
        t.add_row({fmt(rec.t_fd), fmt(rec.latency), rec.isolated ? kHyp[static_cast<int>(rec.winner)] : "none",
                   fmt(rec.point_estimate), fmt(rec.ambiguous)});
    }
    return t;
}

CsvTable campaign_table(const CampaignResult& res) {
    std::vector<std::string> cols{"run", "seed", "valid", "detected", "t_fd", "latency", "isolated", "winner",
                                  "point_estimate", "ambiguous", "true_estimate", "true_refined", "max_abs_psi",
                                  "max_recovery_error"};
    std::vector<std::string> units{"1", "-", "bool", "bool", "s", "s", "bool", "-", "mixed", "bool", "mixed",
                                   "mixed", "m^2/s^2", "rad/s"};
    for (const char* h : kHyp) {
        cols.push_back(std::string("score_") + h);
        units.emplace_back("1");
    }
    CsvTable t = make("campaign", cols, units);
    for (const RunRecord& r : res.runs) {
        std::vector<std::string> row{fmt(r.run), std::to_string(r.seed), fmt(r.valid), fmt(r.detected),
                                     fmt(r.t_fd), fmt(r.latency), fmt(r.isolated),
                                     r.isolated ? kHyp[static_cast<int>(r.winner)] : "none",
                                     fmt(r.point_estimate), fmt(r.ambiguous), fmt(r.true_estimate),
                                     fmt(r.true_refined), fmt(r.max_abs_psi), fmt(r.max_recovery_error)};
        for (double s : r.scores) row.push_back(fmt(s));
        t.add_row(std::move(row));
    }
    return t;
}

CsvTable campaign_summary_table(const CampaignResult& res) {
    CsvTable t = make("campaign_summary", {"quantity", "n", "mean", "std", "median", "q01", "q99"},
                      {"-", "1", "mixed", "mixed", "mixed", "mixed", "mixed"});
    auto stat = [&](const char* name, const Stats& s) {
        t.add_row({name, fmt(s.n), fmt(s.mean), fmt(s.std), fmt(s.median), fmt(s.q01), fmt(s.q99)});
    };
    const double nan = std::nan("");
    t.add_row({"detection_rate", fmt(res.n_valid), fmt(res.detection_rate), fmt(nan), fmt(nan), fmt(nan), fmt(nan)});
    stat("t_fd", res.t_fd);
    stat("latency", res.latency);
    stat("point_estimate", res.point_estimate);
    stat("true_estimate", res.true_estimate);
    stat("max_abs_psi", res.max_abs_psi);
    std::size_t isolated = 0;
    for (const auto& [name, n] : res.winners) isolated += n;
    for (Hypothesis h : kAllHypotheses) {
        const auto it = res.winners.find(to_string(h));
        const std::size_t n = it == res.winners.end() ? 0 : it->second;
        const double frac = isolated ? static_cast<double>(n) / static_cast<double>(isolated) : 0.0;
        t.add_row({std::string("winner_") + kHyp[static_cast<int>(h)], fmt(n), fmt(frac), fmt(nan), fmt(nan), fmt(nan), fmt(nan)});
    }
    return t;
}

CsvTable envelope_table(const CampaignResult& res) {
    CsvTable t = make("envelope", {"t", "n", "mean", "std"}, {"s", "1", "m^2/s^2", "m^2/s^2"});
    for (const EnvelopeRow& e : res.envelope) t.add_row({fmt(e.t), fmt(e.n), fmt(e.mean), fmt(e.std)});
    return t;
}

CsvTable sweep_table(const std::vector<SweepRecord>& recs, SweepParam param) {
    const std::string u = param == SweepParam::DeltaA ? "m" : param == SweepParam::Bias ? "rad/s" : "1";
    CsvTable t = make("sweep",
                      {to_string(param), "valid", "t_probe", "psi_probe", "mean_post_psi", "max_abs_post_psi",
                       "coeff_probe", "omega_probe"},
                      {u, "bool", "s", "m^2/s^2", "m^2/s^2", "m^2/s^2", "m^2", "rad/s"});
    for (const SweepRecord& r : recs) {
        t.add_row({fmt(r.value), fmt(r.valid), fmt(r.t_probe), fmt(r.psi_probe), fmt(r.mean_post_psi),
                   fmt(r.max_abs_post_psi), fmt(r.coeff_probe), fmt(r.omega_probe)});
    }
    return t;
}

CsvTable bounds_s_table(const BoundsSettings& b) {
    CsvTable t = make("bounds_s", {"alpha", "s_plus", "empty"}, {"1", "1", "bool"});
    for (double a : b.alphas) {
        const AdmissibleSets s = admissible_sets(a, 1.0, b.inputs);
        t.add_row({fmt(a), fmt(s.s_plus), fmt(s.s_empty)});
    }
    return t;
}

CsvTable bounds_b_table(const BoundsSettings& b) {
    CsvTable t = make("bounds_b", {"beta", "b_plus"}, {"1", "rad/s"});
    for (double x : b.betas) t.add_row({fmt(x), fmt(admissible_sets(1.0, x, b.inputs).b_plus)});
    return t;
}

CsvTable bounds_constants_table(const BoundsSettings& b) {
    CsvTable t = make("bounds_constants", {"quantity", "value", "unit"}, {"-", "mixed", "-"});
    const BoundInputs& in = b.inputs;
    const DragBounds d = drag_bounds(in);
    auto add = [&](const char* q, double v, const char* u) { t.add_row({q, fmt(v), u}); };
    add("j2_scale", j2_scale(in.r_p, in.earth), "m/s^2");
    add("max_combined_j2", max_combined_j2(in.r_p, in.r_sp, in.earth), "m/s^2");
    add("s_plus_coefficient", s_plus_coefficient(in), "1");
    add("b_plus_coefficient", b_plus_coefficient(in), "(rad/s)^2");
    add("max_delta_s_j2", in.s > 0.0 && in.s < 1.0 ? max_delta_s_j2(in) : std::nan(""), "1");
    add("max_delta_b_j2", in.b != 0.0 ? max_delta_b_j2(in) : std::nan(""), "rad/s");
    add("drag_delta_accel", d.delta_accel, "m/s^2");
    add("drag_ratio_s", d.ratio_s, "1");
    add("drag_ratio_b", d.ratio_b, "(rad/s)^2");
    add("drag_max_delta_s", d.max_ds, "1");
    add("drag_max_delta_b", d.max_db, "rad/s");
    return t;
}

CsvTable calibration_table(const Calibration& c) {
    CsvTable t = make("calibration", {"quantile", "threshold", "max_abs_psi", "runs", "samples"},
                      {"1", "m^2/s^2", "m^2/s^2", "1", "1"});
    t.add_row({fmt(c.quantile), fmt(c.threshold), fmt(c.max_abs_psi), fmt(c.runs), fmt(c.samples)});
    return t;
}

std::string library_version() { return GYROFDI_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_digest"] = m.config_digest;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream os(path);
    if (!os) throw CsvError("cannot write " + path);
    os << manifest_json(m);
}

}  // namespace gyrofdi
