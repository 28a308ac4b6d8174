// gyrofdi command-line driver.
//
// Exit codes: 0 success, 1 usage, 2 config, 3 simulation or output failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gyrofdi/config.hpp"
#include "gyrofdi/csv.hpp"
#include "gyrofdi/report.hpp"

namespace fs = std::filesystem;
using namespace gyrofdi;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kSimulation = 3;

struct ConfigErrorExit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config = "scenario1";
    std::string out;
    bool to_stdout = false;
    bool quiet = false;
};

std::string default_out_dir() {
    const char* env = std::getenv("GYROFDI_OUT_DIR");
    return env && *env ? env : ".";
}

class Outputs {
public:
    Outputs(const Common& c, std::string command) : common_(c) {
        dir_ = c.out.empty() ? default_out_dir() : c.out;
        fs::create_directories(dir_);
        manifest_.command = std::move(command);
        manifest_.version = library_version();
    }

    void write(const std::string& name, const CsvTable& t, bool primary = false) {
        const std::string path = (fs::path(dir_) / name).string();
        write_csv_file(path, t);
        manifest_.outputs.push_back(name);
        if (primary && common_.to_stdout) write_csv(std::cout, t);
    }

    void finish(const FullConfig& cfg, std::uint64_t seed) {
        manifest_.config_digest = config_digest(cfg);
        manifest_.seed = seed;
        manifest_.timestamp = utc_timestamp();
        write_manifest((fs::path(dir_) / "manifest.json").string(), manifest_);
    }

private:
    const Common& common_;
    std::string dir_;
    RunManifest manifest_;
};

FullConfig load(const Common& c) {
    try {
        return load_config(c.config);
    } catch (const ConfigError& e) {
        throw ConfigErrorExit(e.what());
    }
}

void apply_fault(FullConfig& cfg, const std::optional<std::string>& fault) {
    if (!fault) return;
    if (*fault == "none") {
        cfg.scenario.fault.reset();
        return;
    }
    try {
        cfg.scenario.fault = parse_fault(*fault);
    } catch (const std::invalid_argument& e) {
        throw ConfigErrorExit(std::string("--fault: ") + e.what());
    }
}

UncertaintySpec uncertainty_by_name(const std::string& name, const UncertaintySpec& current) {
    if (name.empty()) return current;
    if (name == "reference") return UncertaintySpec::reference();
    if (name == "reference_metre") return UncertaintySpec::reference_metre();
    if (name == "none") return UncertaintySpec::none();
    throw ConfigErrorExit("--uncertainty: expected reference, reference_metre or none");
}

std::function<void(std::size_t, std::size_t)> progress_printer(bool quiet) {
    if (quiet) return {};
    return [](std::size_t done, std::size_t total) {
        const std::size_t step = std::max<std::size_t>(1, total / 10);
        if (done % step == 0 || done == total) std::cerr << "  " << done << "/" << total << " runs\n";
    };
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("config", c.config, "Preset name (scenario1, scenario2) or INI file path");
    sub->add_option("--out", c.out, "Output directory (default: $GYROFDI_OUT_DIR or .)");
    sub->add_flag("--stdout", c.to_stdout, "Also print the main CSV to stdout");
    sub->add_flag("-q,--quiet", c.quiet, "No progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gyroscope fault detection and isolation from relative ranging"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    Common common;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> fault;
    std::optional<double> threshold;
    std::optional<std::string> window_start;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> workers;
    std::string uncertainty;
    std::optional<std::string> param;
    std::optional<std::string> range;
    std::optional<double> t_probe;
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    std::optional<double> quantile;
    bool traces = false;

    auto* sim = app.add_subcommand("simulate", "One end-to-end run: residuals, detection, hypotheses");
    add_common(sim, common);
    sim->add_option("--seed", seed, "Noise seed");
    sim->add_option("--fault", fault, "Fault such as sx=0.5@56 or bz=0.1@56 (deg/s), or none");
    sim->add_option("--threshold", threshold, "Detection threshold [m^2/s^2]")->check(CLI::PositiveNumber);
    sim->add_option("--window-start", window_start, "detection or activation")
        ->check(CLI::IsMember({"detection", "activation"}));
    sim->add_flag("--traces", traces, "Also write trajectory and measurement CSVs");

    auto* camp = app.add_subcommand("campaign", "Monte-Carlo campaign over initial-condition uncertainty");
    add_common(camp, common);
    camp->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
    camp->add_option("--seed", seed, "Base seed");
    camp->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    camp->add_option("--fault", fault, "Fault such as sx=0.5@56, or none");
    camp->add_option("--threshold", threshold, "Detection threshold [m^2/s^2]")->check(CLI::PositiveNumber);
    camp->add_option("--window-start", window_start, "detection or activation")
        ->check(CLI::IsMember({"detection", "activation"}));
    camp->add_option("--uncertainty", uncertainty, "reference, reference_metre or none");

    auto* sw = app.add_subcommand("sweep", "Residual response while one parameter varies");
    add_common(sw, common);
    sw->add_option("--param", param, "delta_a (km), s or b (deg/s)")->check(CLI::IsMember({"delta_a", "s", "b"}));
    sw->add_option("--range", range, "lo:hi:n or a comma list, in the parameter's file units");
    sw->add_option("--seed", seed, "Noise seed");
    sw->add_option("--fault", fault, "Fault giving the axis and activation time");
    sw->add_option("--t-probe", t_probe, "Probe time [s]");

    auto* bnd = app.add_subcommand("bounds", "Perturbation error bounds and admissible sets");
    add_common(bnd, common);
    bnd->add_option("--alpha", alpha, "Alpha grid, lo:hi:n or a comma list");
    bnd->add_option("--beta", beta, "Beta grid, lo:hi:n or a comma list");

    auto* cal = app.add_subcommand("calibrate", "Detection threshold from a faultless campaign");
    add_common(cal, common);
    cal->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
    cal->add_option("--seed", seed, "Base seed");
    cal->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    cal->add_option("--quantile", quantile, "Quantile of |psi| in (0.5, 1)");
    cal->add_option("--uncertainty", uncertainty, "reference, reference_metre or none");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        FullConfig cfg = load(common);
        ScenarioConfig& sc = cfg.scenario;
        apply_fault(cfg, fault);
        if (threshold) sc.threshold = *threshold;
        if (window_start) sc.window_start = *window_start == "activation" ? WindowStart::Activation : WindowStart::Detection;
        try {
            validate(sc);
        } catch (const std::invalid_argument& e) {
            throw ConfigErrorExit(e.what());
        }

        if (sim->parsed()) {
            if (seed) sc.seed = *seed;
            Outputs out(common, "simulate");
            const RunOutput ro = run_once(sc);
            if (!ro.record.valid) {
                std::cerr << "gyrofdi: simulation failed: " << ro.record.error << "\n";
                return kSimulation;
            }
            out.write("residuals.csv", residuals_table(ro.trace, sc.threshold), true);
            out.write("detection.csv", detection_table(ro.record));
            out.write("hypotheses.csv", hypotheses_table(ro.trace));
            out.write("hypothesis_series.csv", hypothesis_series_table(ro.trace));
            if (traces) {
                out.write("trajectory.csv", trajectory_table(ro.trace));
                out.write("measurements.csv", measurements_table(ro.trace));
            }
            out.finish(cfg, sc.seed);
            if (!common.quiet) {
                if (ro.record.detected) {
                    std::cerr << "detected at t = " << ro.record.t_fd << " s";
                    if (ro.record.isolated) {
                        std::cerr << ", winner " << to_string(ro.record.winner) << " estimate "
                                  << ro.record.point_estimate;
                    }
                    std::cerr << "\n";
                } else {
                    std::cerr << "no detection\n";
                }
            }
        } else if (camp->parsed() || cal->parsed()) {
            CampaignOptions opt;
            opt.runs = runs.value_or(cfg.campaign.runs);
            opt.base_seed = seed.value_or(cfg.campaign.seed);
            opt.workers = workers.value_or(cfg.campaign.workers);
            opt.progress = progress_printer(common.quiet);
            if (opt.runs == 0) {
                std::cerr << "gyrofdi: campaign needs at least one run\n";
                return kUsage;
            }
            const UncertaintySpec unc = uncertainty_by_name(uncertainty, cfg.campaign.spec);
            if (camp->parsed()) {
                Outputs out(common, "campaign");
                const CampaignResult res = run_campaign(sc, unc, opt);
                out.write("campaign.csv", campaign_table(res), true);
                out.write("campaign_summary.csv", campaign_summary_table(res));
                out.write("envelope.csv", envelope_table(res));
                out.finish(cfg, opt.base_seed);
                if (res.n_valid == 0) {
                    std::cerr << "gyrofdi: every run failed\n";
                    return kSimulation;
                }
            } else {
                const double q = quantile.value_or(cfg.campaign.quantile);
                if (!(q > 0.5 && q < 1.0)) throw ConfigErrorExit("--quantile must lie in (0.5, 1)");
                Outputs out(common, "calibrate");
                const Calibration c = calibrate(sc, unc, opt, q);
                out.write("calibration.csv", calibration_table(c), true);
                out.finish(cfg, opt.base_seed);
                if (!common.quiet) std::cerr << "threshold = " << c.threshold << " m^2/s^2\n";
            }
        } else if (sw->parsed()) {
            if (seed) sc.seed = *seed;
            SweepSettings s = cfg.sweep;
            try {
                if (param) s.param = parse_sweep_param(*param);
                if (range) {
                    s.values = parse_range(*range);
                    const double scale = s.param == SweepParam::DeltaA ? kKm : s.param == SweepParam::Bias ? kDeg : 1.0;
                    for (double& v : s.values) v *= scale;
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigErrorExit(std::string("sweep: ") + e.what());
            }
            if (t_probe) s.t_probe = *t_probe;
            if (s.values.empty()) {
                std::cerr << "gyrofdi: sweep needs --range or [sweep] values\n";
                return kUsage;
            }
            Outputs out(common, "sweep");
            out.write("sweep.csv", sweep_table(sweep(sc, s.param, s.values, s.t_probe), s.param), true);
            out.finish(cfg, sc.seed);
        } else if (bnd->parsed()) {
            try {
                if (alpha) cfg.bounds.alphas = parse_range(*alpha);
                if (beta) cfg.bounds.betas = parse_range(*beta);
            } catch (const std::invalid_argument& e) {
                throw ConfigErrorExit(std::string("bounds: ") + e.what());
            }
            for (double a : cfg.bounds.alphas) {
                if (!(a > 0.0 && a <= 1.0)) throw ConfigErrorExit("--alpha values must lie in (0, 1]");
            }
            for (double b : cfg.bounds.betas) {
                if (!(b > 0.0 && b <= 1.0)) throw ConfigErrorExit("--beta values must lie in (0, 1]");
            }
            Outputs out(common, "bounds");
            out.write("bounds_s.csv", bounds_s_table(cfg.bounds), true);
            out.write("bounds_b.csv", bounds_b_table(cfg.bounds));
            out.write("bounds_constants.csv", bounds_constants_table(cfg.bounds));
            out.finish(cfg, 0);
        }
    } catch (const ConfigErrorExit& e) {
        std::cerr << "gyrofdi: config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ConfigError& e) {
        std::cerr << "gyrofdi: config error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "gyrofdi: " << e.what() << "\n";
        return kSimulation;
    }
    return kOk;
}
