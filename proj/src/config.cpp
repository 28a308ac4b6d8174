#include "gyrofdi/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace gyrofdi {

namespace pt = boost::property_tree;

namespace {

const char* kScenario1 = R"(# scenario1: fine case
[scenario]
name = scenario1

[orbit]
a_km = 6783.34174
e = 0.0014021
i_deg = 51.27632
argp_deg = 90.69731
raan_deg = 275.17058
ta_deg = 309.67626

[formation]
delta_a_km = 1.0

[attitude]
ixx = 2.29e-2
iyy = 2.42e-2
izz = 2.14e-2
omega0_deg_s = 3, 2.5, 5

[sensors]
gyro_sigma_deg_h = 3.6
range_sigma_m = 0.001

[fault]
spec = none

[simulation]
t_end_s = 120
dt_s = 0.01
dt_meas_s = 0.1
fd_stride = 3
derivatives = fd4
seed = 1

[fdi]
threshold = 137
persistence = 3
window_start = detection

[campaign]
runs = 1000
seed = 2024
workers = 1
uncertainty = reference
)";

const char* kScenario2 = R"(# scenario2: coarse case
[scenario]
name = scenario2

[orbit]
a_km = 6783.34174
e = 0.0014021
i_deg = 51.27632
argp_deg = 90.69731
raan_deg = 275.17058
ta_deg = 309.67626

[formation]
delta_a_km = 1.0

[attitude]
ixx = 2.29e-2
iyy = 2.42e-2
izz = 2.14e-2
omega0_deg_s = 3, -2.5, 15

[sensors]
gyro_sigma_deg_h = 3.6
range_sigma_m = 0.001

[fault]
spec = none

[simulation]
t_end_s = 120
dt_s = 0.01
dt_meas_s = 0.1
fd_stride = 3
derivatives = fd4
seed = 1

[fdi]
threshold = 137
persistence = 3
window_start = detection

[campaign]
runs = 1000
seed = 2024
workers = 1
uncertainty = reference
)";

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"scenario", {"name"}},
        {"orbit", {"a_km", "e", "i_deg", "argp_deg", "raan_deg", "ta_deg"}},
        {"formation", {"delta_a_km", "delta_e", "delta_i_deg", "delta_argp_deg", "delta_raan_deg", "delta_ta_deg"}},
        {"attitude", {"ixx", "iyy", "izz", "omega0_deg_s"}},
        {"sensors", {"gyro_sigma_deg_h", "range_sigma_m"}},
        {"fault", {"spec"}},
        {"simulation", {"t_end_s", "dt_s", "dt_meas_s", "fd_stride", "derivatives", "seed"}},
        {"forces",
         {"j2", "drag", "model_j2", "mu", "re_km", "j2_coeff", "cd", "area_m2", "mass_kg", "rho0", "h0_km",
          "scale_height_km"}},
        {"fdi",
         {"threshold", "persistence", "window", "window_start", "eps_a_rel", "eps_omega", "ambiguity_margin",
          "refine"}},
        {"campaign",
         {"runs", "seed", "workers", "uncertainty", "sigma_a_km", "sigma_e", "sigma_angle_deg", "sigma_omega0_deg_h",
          "quantile"}},
        {"sweep", {"param", "values", "t_probe_s"}},
        {"bounds",
         {"r_sp_km", "r_p_km", "omega_axis_rad_s", "s", "b_deg_s", "alpha", "beta", "cd", "area_m2", "mass_kg",
          "rho0", "h0_km", "scale_height_km"}},
    };
    return k;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
    std::string s = trim(raw);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    throw ConfigError(key + ": expected a boolean, got '" + raw + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    bool has(const std::string& sec, const std::string& key) const {
        const auto s = tree_.get_child_optional(sec);
        return s && s->find(key) != s->not_found();
    }
    std::string raw(const std::string& sec, const std::string& key) const {
        return trim(tree_.get_child(sec).get<std::string>(key));
    }
    std::string path(const std::string& sec, const std::string& key) const { return sec + "." + key; }

    void num(const std::string& sec, const std::string& key, double& out, double scale = 1.0) const {
        if (has(sec, key)) out = to_double(path(sec, key), raw(sec, key)) * scale;
    }
    template <class T>
    void uint(const std::string& sec, const std::string& key, T& out) const {
        if (has(sec, key)) out = static_cast<T>(to_uint(path(sec, key), raw(sec, key)));
    }
    void flag(const std::string& sec, const std::string& key, bool& out) const {
        if (has(sec, key)) out = to_bool(path(sec, key), raw(sec, key));
    }

private:
    const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
    const auto& known = known_keys();
    for (const auto& [sec, body] : tree) {
        const auto it = known.find(sec);
        if (it == known.end()) throw ConfigError(sec + ": unknown section");
        if (body.empty() && !body.data().empty()) throw ConfigError(sec + ": key outside of a section");
        for (const auto& [key, val] : body) {
            if (!it->second.count(key)) throw ConfigError(sec + "." + key + ": unknown key");
        }
    }
}

void range_check(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key + ": " + what);
}

FullConfig build(const pt::ptree& tree) {
    check_keys(tree);
    Reader r(tree);
    FullConfig fc;
    ScenarioConfig& c = fc.scenario;

    if (r.has("scenario", "name")) c.name = r.raw("scenario", "name");

    // every scenario needs its orbit spelled out
    for (const char* k : {"a_km", "e", "i_deg", "argp_deg", "raan_deg", "ta_deg"}) {
        if (!r.has("orbit", k)) throw ConfigError(std::string("orbit.") + k + ": missing required key");
    }
    r.num("orbit", "a_km", c.primary.a, kKm);
    r.num("orbit", "e", c.primary.e);
    r.num("orbit", "i_deg", c.primary.i, kDeg);
    r.num("orbit", "argp_deg", c.primary.argp, kDeg);
    r.num("orbit", "raan_deg", c.primary.raan, kDeg);
    r.num("orbit", "ta_deg", c.primary.ta, kDeg);
    range_check(c.primary.a > 0.0, "orbit.a_km", "must be positive");
    range_check(c.primary.e >= 0.0 && c.primary.e < 1.0, "orbit.e", "must lie in [0, 1)");
    range_check(c.primary.i >= 0.0 && c.primary.i <= kPi, "orbit.i_deg", "must lie in [0, 180]");

    r.num("formation", "delta_a_km", c.secondary.da, kKm);
    r.num("formation", "delta_e", c.secondary.de);
    r.num("formation", "delta_i_deg", c.secondary.di, kDeg);
    r.num("formation", "delta_argp_deg", c.secondary.dargp, kDeg);
    r.num("formation", "delta_raan_deg", c.secondary.draan, kDeg);
    r.num("formation", "delta_ta_deg", c.secondary.dta, kDeg);

    r.num("attitude", "ixx", c.inertia.ixx);
    r.num("attitude", "iyy", c.inertia.iyy);
    r.num("attitude", "izz", c.inertia.izz);
    if (r.has("attitude", "omega0_deg_s")) {
        const auto w = to_list("attitude.omega0_deg_s", r.raw("attitude", "omega0_deg_s"));
        range_check(w.size() == 3, "attitude.omega0_deg_s", "expected three comma-separated values");
        c.omega0 = Vec3(w[0], w[1], w[2]) * kDeg;
    }
    try {
        validate(c.inertia);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("attitude: ") + e.what());
    }

    r.num("sensors", "gyro_sigma_deg_h", c.gyro.sigma_g, kDegPerHour);
    r.num("sensors", "range_sigma_m", c.ranging.sigma_axis);
    range_check(c.gyro.sigma_g >= 0.0, "sensors.gyro_sigma_deg_h", "must be non-negative");
    range_check(c.ranging.sigma_axis >= 0.0, "sensors.range_sigma_m", "must be non-negative");

    if (r.has("fault", "spec")) {
        const std::string s = r.raw("fault", "spec");
        if (s == "none" || s.empty()) {
            c.fault.reset();
        } else {
            try {
                c.fault = parse_fault(s);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("fault.spec: ") + e.what());
            }
        }
    }

    r.num("simulation", "t_end_s", c.grid.t_end);
    r.num("simulation", "dt_s", c.grid.dt);
    r.num("simulation", "dt_meas_s", c.dt_meas);
    r.uint("simulation", "fd_stride", c.fd_stride);
    r.uint("simulation", "seed", c.seed);
    if (r.has("simulation", "derivatives")) {
        const std::string d = r.raw("simulation", "derivatives");
        if (d == "fd4") c.derivatives = DerivativeMode::Fd4;
        else if (d == "exact") c.derivatives = DerivativeMode::Exact;
        else throw ConfigError("simulation.derivatives: expected fd4 or exact, got '" + d + "'");
    }

    ForceModel& f = c.force;
    r.flag("forces", "j2", f.j2);
    r.flag("forces", "drag", f.drag);
    r.flag("forces", "model_j2", c.model_j2);
    r.num("forces", "mu", f.earth.mu);
    r.num("forces", "re_km", f.earth.re, kKm);
    r.num("forces", "j2_coeff", f.earth.j2);
    DragParams d = thermosphere_400km();
    r.num("forces", "cd", d.cd);
    r.num("forces", "area_m2", d.area);
    r.num("forces", "mass_kg", d.mass);
    r.num("forces", "rho0", d.rho0);
    r.num("forces", "h0_km", d.h0, kKm);
    r.num("forces", "scale_height_km", d.scale_height, kKm);
    range_check(f.earth.mu > 0.0, "forces.mu", "must be positive");
    range_check(f.earth.re > 0.0, "forces.re_km", "must be positive");
    range_check(d.cd > 0.0 && d.area > 0.0 && d.mass > 0.0, "forces", "cd, area_m2 and mass_kg must be positive");
    range_check(d.rho0 > 0.0 && d.scale_height > 0.0, "forces", "rho0 and scale_height_km must be positive");
    f.drag_primary = f.drag_secondary = d;

    r.num("fdi", "threshold", c.threshold);
    r.uint("fdi", "persistence", c.persistence);
    r.uint("fdi", "window", c.isolation.window);
    r.num("fdi", "eps_a_rel", c.isolation.guards.eps_a_rel);
    r.num("fdi", "eps_omega", c.isolation.guards.eps_omega);
    r.num("fdi", "ambiguity_margin", c.isolation.ambiguity_margin);
    r.flag("fdi", "refine", c.isolation.refine);
    if (r.has("fdi", "window_start")) {
        const std::string w = r.raw("fdi", "window_start");
        if (w == "detection") c.window_start = WindowStart::Detection;
        else if (w == "activation") c.window_start = WindowStart::Activation;
        else throw ConfigError("fdi.window_start: expected detection or activation, got '" + w + "'");
    }
    range_check(c.threshold > 0.0, "fdi.threshold", "must be positive");
    range_check(c.persistence > 0, "fdi.persistence", "must be positive");

    CampaignSettings& cs = fc.campaign;
    r.uint("campaign", "runs", cs.runs);
    r.uint("campaign", "seed", cs.seed);
    r.uint("campaign", "workers", cs.workers);
    r.num("campaign", "quantile", cs.quantile);
    range_check(cs.quantile > 0.5 && cs.quantile < 1.0, "campaign.quantile", "must lie in (0.5, 1)");
    if (r.has("campaign", "uncertainty")) {
        cs.uncertainty = r.raw("campaign", "uncertainty");
        if (cs.uncertainty == "reference") cs.spec = UncertaintySpec::reference();
        else if (cs.uncertainty == "reference_metre") cs.spec = UncertaintySpec::reference_metre();
        else if (cs.uncertainty == "none") cs.spec = UncertaintySpec::none();
        else throw ConfigError("campaign.uncertainty: expected reference, reference_metre or none");
    }
    bool custom = false;
    for (const char* k : {"sigma_a_km", "sigma_e", "sigma_angle_deg", "sigma_omega0_deg_h"}) {
        custom = custom || r.has("campaign", k);
    }
    r.num("campaign", "sigma_a_km", cs.spec.sigma_a, kKm);
    r.num("campaign", "sigma_e", cs.spec.sigma_e);
    if (r.has("campaign", "sigma_angle_deg")) {
        double a = 0.0;
        r.num("campaign", "sigma_angle_deg", a, kDeg);
        cs.spec.sigma_i = cs.spec.sigma_argp = cs.spec.sigma_raan = cs.spec.sigma_ta = a;
    }
    if (r.has("campaign", "sigma_omega0_deg_h")) {
        double w = 0.0;
        r.num("campaign", "sigma_omega0_deg_h", w, kDegPerHour);
        cs.spec.sigma_omega0 = Vec3::Constant(w);
    }
    if (custom) cs.uncertainty = "custom";
    try {
        validate(cs.spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("campaign: ") + e.what());
    }

    SweepSettings& sw = fc.sweep;
    if (r.has("sweep", "param")) {
        try {
            sw.param = parse_sweep_param(r.raw("sweep", "param"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep.param: ") + e.what());
        }
    }
    if (r.has("sweep", "values")) {
        try {
            sw.values = parse_range(r.raw("sweep", "values"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep.values: ") + e.what());
        }
        const double scale = sw.param == SweepParam::DeltaA ? kKm : sw.param == SweepParam::Bias ? kDeg : 1.0;
        for (double& v : sw.values) v *= scale;
    }
    r.num("sweep", "t_probe_s", sw.t_probe);

    BoundsSettings& bs = fc.bounds;
    bs.inputs.r_p = c.primary.a;
    bs.inputs.earth = f.earth;
    bs.inputs.drag = d;
    r.num("bounds", "r_sp_km", bs.inputs.r_sp, kKm);
    r.num("bounds", "r_p_km", bs.inputs.r_p, kKm);
    r.num("bounds", "omega_axis_rad_s", bs.inputs.omega_axis);
    r.num("bounds", "s", bs.inputs.s);
    r.num("bounds", "b_deg_s", bs.inputs.b, kDeg);
    r.num("bounds", "cd", bs.inputs.drag.cd);
    r.num("bounds", "area_m2", bs.inputs.drag.area);
    r.num("bounds", "mass_kg", bs.inputs.drag.mass);
    r.num("bounds", "rho0", bs.inputs.drag.rho0);
    r.num("bounds", "h0_km", bs.inputs.drag.h0, kKm);
    r.num("bounds", "scale_height_km", bs.inputs.drag.scale_height, kKm);
    if (r.has("bounds", "alpha")) bs.alphas = parse_range(r.raw("bounds", "alpha"));
    if (r.has("bounds", "beta")) bs.betas = parse_range(r.raw("bounds", "beta"));
    for (double a : bs.alphas) range_check(a > 0.0 && a <= 1.0, "bounds.alpha", "values must lie in (0, 1]");
    for (double b : bs.betas) range_check(b > 0.0 && b <= 1.0, "bounds.beta", "values must lie in (0, 1]");
    try {
        validate(bs.inputs);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bounds: ") + e.what());
    }

    try {
        validate(c);
    } catch (const DegenerateOrbitError& e) {
        throw ConfigError(std::string("orbit: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return fc;
}

}  // namespace

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > 0.0) || n < 2) throw std::invalid_argument("logspace needs positive ends and n >= 2");
    std::vector<double> v(n);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.back() = hi;
    return v;
}

std::vector<double> parse_range(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty range");
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(p);
        if (parts.size() != 3) throw std::invalid_argument("range must look like lo:hi:n");
        const double lo = to_double("range", parts[0]);
        const double hi = to_double("range", parts[1]);
        const std::uint64_t n = to_uint("range", parts[2]);
        if (n == 0) throw std::invalid_argument("range needs at least one point");
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        return v;
    }
    try {
        return to_list("range", s);
    } catch (const ConfigError& e) {
        throw std::invalid_argument(e.what());
    }
}

FullConfig parse_config_text(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    FullConfig out = build(tree);
    if (out.bounds.alphas.empty()) out.bounds.alphas = logspace(1e-4, 1.0, 41);
    if (out.bounds.betas.empty()) out.bounds.betas = logspace(1e-4, 1.0, 41);
    return out;
}

FullConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::vector<std::string> preset_names() { return {"scenario1", "scenario2"}; }

FullConfig preset(const std::string& name) {
    if (name == "scenario1") return parse_config_text(kScenario1, "scenario1");
    if (name == "scenario2") return parse_config_text(kScenario2, "scenario2");
    throw ConfigError("unknown preset '" + name + "'");
}

FullConfig load_config(const std::string& name_or_path) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return preset(name_or_path);
    return parse_config(name_or_path);
}

std::string canonical_text(const FullConfig& fc) {
    std::ostringstream os;
    auto put = [&](const std::string& k, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << k << '=' << buf << '\n';
    };
    auto puts = [&](const std::string& k, const std::string& v) { os << k << '=' << v << '\n'; };
    const ScenarioConfig& c = fc.scenario;
    puts("scenario.name", c.name);
    put("orbit.a", c.primary.a);
    put("orbit.e", c.primary.e);
    put("orbit.i", c.primary.i);
    put("orbit.argp", c.primary.argp);
    put("orbit.raan", c.primary.raan);
    put("orbit.ta", c.primary.ta);
    put("formation.da", c.secondary.da);
    put("formation.de", c.secondary.de);
    put("formation.di", c.secondary.di);
    put("formation.dargp", c.secondary.dargp);
    put("formation.draan", c.secondary.draan);
    put("formation.dta", c.secondary.dta);
    put("attitude.ixx", c.inertia.ixx);
    put("attitude.iyy", c.inertia.iyy);
    put("attitude.izz", c.inertia.izz);
    for (int k = 0; k < 3; ++k) put("attitude.omega0." + std::to_string(k), c.omega0[k]);
    put("sensors.gyro_sigma", c.gyro.sigma_g);
    put("sensors.range_sigma", c.ranging.sigma_axis);
    puts("fault.spec", c.fault ? describe(*c.fault) : "none");
    put("simulation.t0", c.grid.t0);
    put("simulation.t_end", c.grid.t_end);
    put("simulation.dt", c.grid.dt);
    put("simulation.dt_meas", c.dt_meas);
    put("simulation.fd_stride", static_cast<double>(c.fd_stride));
    puts("simulation.derivatives", to_string(c.derivatives));
    puts("simulation.seed", std::to_string(c.seed));
    puts("forces.j2", c.force.j2 ? "1" : "0");
    puts("forces.drag", c.force.drag ? "1" : "0");
    puts("forces.model_j2", c.model_j2 ? "1" : "0");
    put("forces.mu", c.force.earth.mu);
    put("forces.re", c.force.earth.re);
    put("forces.j2_coeff", c.force.earth.j2);
    const DragParams& d = c.force.drag_primary;
    put("forces.cd", d.cd);
    put("forces.area", d.area);
    put("forces.mass", d.mass);
    put("forces.rho0", d.rho0);
    put("forces.h0", d.h0);
    put("forces.scale_height", d.scale_height);
    put("fdi.threshold", c.threshold);
    put("fdi.persistence", static_cast<double>(c.persistence));
    put("fdi.window", static_cast<double>(c.isolation.window));
    puts("fdi.window_start", to_string(c.window_start));
    put("fdi.eps_a_rel", c.isolation.guards.eps_a_rel);
    put("fdi.eps_omega", c.isolation.guards.eps_omega);
    put("fdi.ambiguity_margin", c.isolation.ambiguity_margin);
    puts("fdi.refine", c.isolation.refine ? "1" : "0");
    const CampaignSettings& cs = fc.campaign;
    put("campaign.runs", static_cast<double>(cs.runs));
    puts("campaign.seed", std::to_string(cs.seed));
    put("campaign.quantile", cs.quantile);
    put("campaign.sigma_a", cs.spec.sigma_a);
    put("campaign.sigma_e", cs.spec.sigma_e);
    put("campaign.sigma_i", cs.spec.sigma_i);
    put("campaign.sigma_argp", cs.spec.sigma_argp);
    put("campaign.sigma_raan", cs.spec.sigma_raan);
    put("campaign.sigma_ta", cs.spec.sigma_ta);
    for (int k = 0; k < 3; ++k) put("campaign.sigma_omega0." + std::to_string(k), cs.spec.sigma_omega0[k]);
    puts("sweep.param", to_string(fc.sweep.param));
    for (std::size_t i = 0; i < fc.sweep.values.size(); ++i) put("sweep.value." + std::to_string(i), fc.sweep.values[i]);
    put("sweep.t_probe", fc.sweep.t_probe);
    const BoundInputs& b = fc.bounds.inputs;
    put("bounds.r_sp", b.r_sp);
    put("bounds.r_p", b.r_p);
    put("bounds.omega_axis", b.omega_axis);
    put("bounds.s", b.s);
    put("bounds.b", b.b);
    put("bounds.cd", b.drag.cd);
    put("bounds.area", b.drag.area);
    put("bounds.mass", b.drag.mass);
    put("bounds.rho0", b.drag.rho0);
    put("bounds.h0", b.drag.h0);
    put("bounds.scale_height", b.drag.scale_height);
    for (std::size_t i = 0; i < fc.bounds.alphas.size(); ++i) put("bounds.alpha." + std::to_string(i), fc.bounds.alphas[i]);
    for (std::size_t i = 0; i < fc.bounds.betas.size(); ++i) put("bounds.beta." + std::to_string(i), fc.bounds.betas[i]);
    return os.str();
}

std::string config_digest(const FullConfig& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gyrofdi
