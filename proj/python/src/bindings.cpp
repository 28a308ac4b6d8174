// Python bindings: configs, single runs, campaigns, sweeps, bounds and CSV tables.

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gyrofdi/bounds.hpp"
#include "gyrofdi/config.hpp"
#include "gyrofdi/csv.hpp"
#include "gyrofdi/fdi.hpp"
#include "gyrofdi/montecarlo.hpp"
#include "gyrofdi/pipeline.hpp"
#include "gyrofdi/report.hpp"

namespace py = pybind11;
using namespace gyrofdi;

namespace {

class PySimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> to_array(const std::vector<Vec3>& v) {
    py::array_t<double> out({v.size(), std::size_t{3}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (py::ssize_t k = 0; k < 3; ++k) m(i, k) = v[i][k];
    }
    return out;
}

// lower-case labels, as in the CSV tables
std::string hyp_name(Hypothesis h) {
    std::string s = to_string(h);
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

py::dict record_dict(const RunRecord& r) {
    py::dict d;
    d["run"] = r.run;
    d["seed"] = r.seed;
    d["valid"] = r.valid;
    d["error"] = r.error;
    d["detected"] = r.detected;
    d["t_fd"] = r.t_fd;
    d["latency"] = r.latency;
    d["isolated"] = r.isolated;
    d["winner"] = r.isolated ? py::object(py::str(hyp_name(r.winner))) : py::object(py::none());
    d["point_estimate"] = r.point_estimate;
    d["ambiguous"] = r.ambiguous;
    py::dict scores;
    for (Hypothesis h : kAllHypotheses) scores[py::str(hyp_name(h))] = r.scores[static_cast<int>(h)];
    d["scores"] = scores;
    d["true_estimate"] = r.true_estimate;
    d["true_refined"] = r.true_refined;
    d["max_abs_psi"] = r.max_abs_psi;
    d["max_recovery_error"] = r.max_recovery_error;
    return d;
}

py::dict stats_dict(const Stats& s) {
    py::dict d;
    d["n"] = s.n;
    d["mean"] = s.mean;
    d["std"] = s.std;
    d["median"] = s.median;
    d["q01"] = s.q01;
    d["q99"] = s.q99;
    return d;
}

UncertaintySpec uncertainty_by_name(const std::optional<std::string>& name, const FullConfig& cfg) {
    if (!name) return cfg.campaign.spec;
    if (*name == "reference") return UncertaintySpec::reference();
    if (*name == "reference_metre") return UncertaintySpec::reference_metre();
    if (*name == "none") return UncertaintySpec::none();
    throw std::invalid_argument("uncertainty: expected reference, reference_metre or none");
}

CampaignOptions campaign_options(const FullConfig& cfg, std::optional<std::size_t> runs,
                                 std::optional<std::uint64_t> seed, std::optional<std::size_t> workers) {
    CampaignOptions o;
    o.runs = runs.value_or(cfg.campaign.runs);
    o.base_seed = seed.value_or(cfg.campaign.seed);
    o.workers = workers.value_or(cfg.campaign.workers);
    if (o.runs == 0) throw std::invalid_argument("runs must be positive");
    if (o.workers == 0) throw std::invalid_argument("workers must be positive");
    return o;
}

struct SimulationResult {
    RunOutput out;
    double threshold = 0.0;
};

std::string csv_text(const CsvTable& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gyroscope fault detection and isolation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
    py::register_exception<PySimulationError>(m, "SimulationError", PyExc_RuntimeError);

    m.attr("__version__") = library_version();

    py::class_<CsvTable>(m, "CsvTable")
        .def(py::init<>())
        .def_readwrite("schema", &CsvTable::schema)
        .def_readwrite("version", &CsvTable::version)
        .def_readwrite("columns", &CsvTable::columns)
        .def_readwrite("units", &CsvTable::units)
        .def_readwrite("rows", &CsvTable::rows)
        .def("numeric", [](const CsvTable& t, const std::string& c) { return to_array(t.numeric(c)); })
        .def("text", &CsvTable::text)
        .def("add_row", &CsvTable::add_row)
        .def("to_csv", &csv_text)
        .def("__len__", [](const CsvTable& t) { return t.rows.size(); })
        .def("__repr__", [](const CsvTable& t) {
            return "<CsvTable " + t.schema + "/" + std::to_string(t.version) + " rows=" +
                   std::to_string(t.rows.size()) + ">";
        });
    m.def("read_csv", &read_csv_file, py::arg("path"));
    m.def("write_csv", &write_csv_file, py::arg("path"), py::arg("table"));
    m.def(
        "parse_csv",
        [](const std::string& text) {
            std::istringstream is(text);
            return read_csv(is);
        },
        py::arg("text"));

    py::class_<PsiCoefficients>(m, "PsiCoefficients")
        .def(py::init<>())
        .def_readwrite("A", &PsiCoefficients::A)
        .def_readwrite("B", &PsiCoefficients::B)
        .def_readwrite("C", &PsiCoefficients::C)
        .def_readwrite("D", &PsiCoefficients::D)
        .def_readwrite("E", &PsiCoefficients::E)
        .def_readwrite("F", &PsiCoefficients::F)
        .def_readwrite("G", &PsiCoefficients::G)
        .def_readwrite("H", &PsiCoefficients::H)
        .def_readwrite("J", &PsiCoefficients::J)
        .def_readwrite("K", &PsiCoefficients::K)
        .def("gmat", &PsiCoefficients::gmat)
        .def("beta", &PsiCoefficients::beta)
        .def("block", &PsiCoefficients::block)
        .def("range_squared", &PsiCoefficients::range_squared);
    m.def("psi_coefficients", &psi_coefficients, py::arg("r_sp"), py::arg("v_sp"), py::arg("f"));
    m.def("psi", &psi, py::arg("coeffs"), py::arg("omega"));
    m.def("psi_gradient", &psi_gradient, py::arg("coeffs"), py::arg("omega"));
    m.def("expected_psi", &expected_psi, py::arg("r_sp_norm"), py::arg("sigma_g"));
    m.def("psi_variance", &psi_variance, py::arg("coeffs"), py::arg("omega_true"), py::arg("sigma_g"));

    py::class_<FullConfig>(m, "Config")
        .def_static("load", &load_config, py::arg("name_or_path"))
        .def_static("from_text", &parse_config_text, py::arg("text"), py::arg("origin") = "<text>")
        .def_static("preset", &preset, py::arg("name"))
        .def("copy", [](const FullConfig& c) { return FullConfig(c); })
        .def("digest", &config_digest)
        .def("canonical_text", &canonical_text)
        .def_property(
            "name", [](const FullConfig& c) { return c.scenario.name; },
            [](FullConfig& c, const std::string& v) { c.scenario.name = v; })
        .def_property(
            "threshold", [](const FullConfig& c) { return c.scenario.threshold; },
            [](FullConfig& c, double v) { c.scenario.threshold = v; })
        .def_property(
            "seed", [](const FullConfig& c) { return c.scenario.seed; },
            [](FullConfig& c, std::uint64_t v) { c.scenario.seed = v; })
        .def_property(
            "fd_stride", [](const FullConfig& c) { return c.scenario.fd_stride; },
            [](FullConfig& c, std::size_t v) { c.scenario.fd_stride = v; })
        .def_property(
            "gyro_sigma", [](const FullConfig& c) { return c.scenario.gyro.sigma_g; },
            [](FullConfig& c, double v) { c.scenario.gyro.sigma_g = v; })
        .def_property(
            "range_sigma", [](const FullConfig& c) { return c.scenario.ranging.sigma_axis; },
            [](FullConfig& c, double v) { c.scenario.ranging.sigma_axis = v; })
        .def_property(
            "fault",
            [](const FullConfig& c) -> std::optional<std::string> {
                if (!c.scenario.fault) return std::nullopt;
                return describe(*c.scenario.fault);
            },
            [](FullConfig& c, const std::optional<std::string>& v) {
                if (v) c.scenario.fault = parse_fault(*v);
                else c.scenario.fault.reset();
            })
        .def_property(
            "derivatives", [](const FullConfig& c) { return to_string(c.scenario.derivatives); },
            [](FullConfig& c, const std::string& v) {
                if (v == "fd4") c.scenario.derivatives = DerivativeMode::Fd4;
                else if (v == "exact") c.scenario.derivatives = DerivativeMode::Exact;
                else throw std::invalid_argument("derivatives: expected fd4 or exact");
            })
        .def_property(
            "window_start", [](const FullConfig& c) { return to_string(c.scenario.window_start); },
            [](FullConfig& c, const std::string& v) {
                if (v == "detection") c.scenario.window_start = WindowStart::Detection;
                else if (v == "activation") c.scenario.window_start = WindowStart::Activation;
                else throw std::invalid_argument("window_start: expected detection or activation");
            })
        .def_property(
            "j2", [](const FullConfig& c) { return c.scenario.force.j2; },
            [](FullConfig& c, bool v) { c.scenario.force.j2 = v; })
        .def_property(
            "drag", [](const FullConfig& c) { return c.scenario.force.drag; },
            [](FullConfig& c, bool v) { c.scenario.force.drag = v; })
        .def_property(
            "model_j2", [](const FullConfig& c) { return c.scenario.model_j2; },
            [](FullConfig& c, bool v) { c.scenario.model_j2 = v; })
        .def_property(
            "campaign_runs", [](const FullConfig& c) { return c.campaign.runs; },
            [](FullConfig& c, std::size_t v) { c.campaign.runs = v; })
        .def_property(
            "campaign_seed", [](const FullConfig& c) { return c.campaign.seed; },
            [](FullConfig& c, std::uint64_t v) { c.campaign.seed = v; })
        .def_property(
            "workers", [](const FullConfig& c) { return c.campaign.workers; },
            [](FullConfig& c, std::size_t v) { c.campaign.workers = v; })
        .def("__repr__", [](const FullConfig& c) { return "<Config " + c.scenario.name + " " + config_digest(c) + ">"; });
    m.def("preset_names", &preset_names);

    py::class_<SimulationResult>(m, "Simulation")
        .def_property_readonly("record", [](const SimulationResult& s) { return record_dict(s.out.record); })
        .def_property_readonly("t", [](const SimulationResult& s) { return to_array(s.out.trace.t); })
        .def_property_readonly("psi", [](const SimulationResult& s) { return to_array(s.out.trace.psi); })
        .def_property_readonly("omega_true", [](const SimulationResult& s) { return to_array(s.out.trace.omega_true); })
        .def_property_readonly("omega_meas", [](const SimulationResult& s) { return to_array(s.out.trace.omega_meas); })
        .def_property_readonly("r_sp_true", [](const SimulationResult& s) { return to_array(s.out.trace.r_sp_true); })
        .def_property_readonly("r_sp_meas", [](const SimulationResult& s) { return to_array(s.out.trace.r_sp_meas); })
        .def_property_readonly("coefficients", [](const SimulationResult& s) { return s.out.trace.coeffs; })
        .def("residuals", [](const SimulationResult& s) { return residuals_table(s.out.trace, s.threshold); })
        .def("detection", [](const SimulationResult& s) { return detection_table(s.out.record); })
        .def("hypotheses", [](const SimulationResult& s) { return hypotheses_table(s.out.trace); })
        .def("hypothesis_series", [](const SimulationResult& s) { return hypothesis_series_table(s.out.trace); })
        .def("trajectory", [](const SimulationResult& s) { return trajectory_table(s.out.trace); })
        .def("measurements", [](const SimulationResult& s) { return measurements_table(s.out.trace); });

    m.def(
        "simulate",
        [](const FullConfig& cfg, std::optional<std::uint64_t> seed) {
            ScenarioConfig sc = cfg.scenario;
            if (seed) sc.seed = *seed;
            validate(sc);
            SimulationResult res;
            {
                py::gil_scoped_release release;
                res.out = run_once(sc);
            }
            if (!res.out.record.valid) throw PySimulationError(res.out.record.error);
            res.threshold = sc.threshold;
            return res;
        },
        py::arg("config"), py::arg("seed") = py::none());

    py::class_<CampaignResult>(m, "Campaign")
        .def_readonly("n_valid", &CampaignResult::n_valid)
        .def_readonly("n_detected", &CampaignResult::n_detected)
        .def_readonly("detection_rate", &CampaignResult::detection_rate)
        .def_readonly("winners", &CampaignResult::winners)
        .def_property_readonly("t_fd", [](const CampaignResult& r) { return stats_dict(r.t_fd); })
        .def_property_readonly("latency", [](const CampaignResult& r) { return stats_dict(r.latency); })
        .def_property_readonly("point_estimate", [](const CampaignResult& r) { return stats_dict(r.point_estimate); })
        .def_property_readonly("records", [](const CampaignResult& r) {
            py::list out;
            for (const RunRecord& rec : r.runs) out.append(record_dict(rec));
            return out;
        })
        .def("table", &campaign_table)
        .def("summary", &campaign_summary_table)
        .def("envelope", &envelope_table);

    m.def(
        "campaign",
        [](const FullConfig& cfg, std::optional<std::size_t> runs, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> workers, std::optional<std::string> uncertainty) {
            const CampaignOptions o = campaign_options(cfg, runs, seed, workers);
            const UncertaintySpec unc = uncertainty_by_name(uncertainty, cfg);
            py::gil_scoped_release release;
            return run_campaign(cfg.scenario, unc, o);
        },
        py::arg("config"), py::arg("runs") = py::none(), py::arg("seed") = py::none(),
        py::arg("workers") = py::none(), py::arg("uncertainty") = py::none());

    m.def(
        "calibrate",
        [](const FullConfig& cfg, std::optional<std::size_t> runs, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> workers, std::optional<double> quantile, std::optional<std::string> uncertainty) {
            const CampaignOptions o = campaign_options(cfg, runs, seed, workers);
            const UncertaintySpec unc = uncertainty_by_name(uncertainty, cfg);
            const double q = quantile.value_or(cfg.campaign.quantile);
            if (!(q > 0.5 && q < 1.0)) throw std::invalid_argument("quantile must lie in (0.5, 1)");
            Calibration c;
            {
                py::gil_scoped_release release;
                c = calibrate(cfg.scenario, unc, o, q);
            }
            return calibration_table(c);
        },
        py::arg("config"), py::arg("runs") = py::none(), py::arg("seed") = py::none(),
        py::arg("workers") = py::none(), py::arg("quantile") = py::none(), py::arg("uncertainty") = py::none());

    m.def(
        "sweep",
        [](const FullConfig& cfg, const std::string& param, const std::vector<double>& values, double t_probe) {
            const SweepParam p = parse_sweep_param(param);
            std::vector<SweepRecord> recs;
            {
                py::gil_scoped_release release;
                recs = sweep(cfg.scenario, p, values, t_probe);
            }
            return sweep_table(recs, p);
        },
        py::arg("config"), py::arg("param"), py::arg("values"), py::arg("t_probe") = -1.0,
        "Values in SI: m for delta_a, dimensionless for s, rad/s for b.");

    m.def(
        "bounds",
        [](const FullConfig& cfg, std::optional<std::vector<double>> alphas, std::optional<std::vector<double>> betas) {
            BoundsSettings b = cfg.bounds;
            if (alphas) b.alphas = *alphas;
            if (betas) b.betas = *betas;
            for (double a : b.alphas) {
                if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("alpha values must lie in (0, 1]");
            }
            for (double x : b.betas) {
                if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("beta values must lie in (0, 1]");
            }
            py::dict d;
            d["s"] = bounds_s_table(b);
            d["b"] = bounds_b_table(b);
            d["constants"] = bounds_constants_table(b);
            return d;
        },
        py::arg("config"), py::arg("alphas") = py::none(), py::arg("betas") = py::none());
    m.def("s_plus_coefficient", [](const FullConfig& c) { return s_plus_coefficient(c.bounds.inputs); });
    m.def("b_plus_coefficient", [](const FullConfig& c) { return b_plus_coefficient(c.bounds.inputs); });
    m.def("drag_bounds", [](const FullConfig& c) {
        const DragBounds d = drag_bounds(c.bounds.inputs);
        py::dict out;
        out["max_ds"] = d.max_ds;
        out["max_db"] = d.max_db;
        out["ratio_s"] = d.ratio_s;
        out["ratio_b"] = d.ratio_b;
        out["delta_accel"] = d.delta_accel;
        return out;
    });
}
