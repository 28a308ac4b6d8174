#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gyrofdi/bounds.hpp"
#include "gyrofdi/montecarlo.hpp"
#include "gyrofdi/pipeline.hpp"

namespace gyrofdi {

/// Bad or missing configuration value; the message names the key path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CampaignSettings {
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string uncertainty = "reference";  // reference | reference_metre | none | custom
    UncertaintySpec spec = UncertaintySpec::reference();
    double quantile = 0.9999;  // threshold calibration
};

struct SweepSettings {
    SweepParam param = SweepParam::Scale;
    std::vector<double> values;  // SI
    double t_probe = -1.0;
};

struct BoundsSettings {
    BoundInputs inputs;
    std::vector<double> alphas;
    std::vector<double> betas;
};

struct FullConfig {
    ScenarioConfig scenario;
    CampaignSettings campaign;
    SweepSettings sweep;
    BoundsSettings bounds;
};

/// Parses an INI file. Unknown sections or keys are errors.
FullConfig parse_config(const std::string& path);
FullConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Bundled presets: scenario1, scenario2.
FullConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// `name_or_path` is a preset name or a file path.
FullConfig load_config(const std::string& name_or_path);

/// Canonical SI rendering of every field, one key=value per line.
std::string canonical_text(const FullConfig& cfg);
/// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string config_digest(const FullConfig& cfg);

/// "lo:hi:n" (n points, inclusive) or a comma list, in file units.
std::vector<double> parse_range(const std::string& text);

/// Log-spaced grid from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace gyrofdi
