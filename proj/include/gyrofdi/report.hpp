#pragma once

#include <string>
#include <vector>

#include "gyrofdi/config.hpp"
#include "gyrofdi/csv.hpp"
#include "gyrofdi/montecarlo.hpp"
#include "gyrofdi/pipeline.hpp"

namespace gyrofdi {

// Table builders, one per output kind. Values are SI; units rows say so.

CsvTable trajectory_table(const RunTrace& tr);
CsvTable measurements_table(const RunTrace& tr);
CsvTable residuals_table(const RunTrace& tr, double threshold);
/// One row per hypothesis (empty when nothing was isolated).
CsvTable hypotheses_table(const RunTrace& tr);
/// Per-sample recovered rates and residuals of every hypothesis, long format.
CsvTable hypothesis_series_table(const RunTrace& tr);
/// A row only when a fault was detected.
CsvTable detection_table(const RunRecord& rec);

CsvTable campaign_table(const CampaignResult& res);
CsvTable campaign_summary_table(const CampaignResult& res);
CsvTable envelope_table(const CampaignResult& res);

CsvTable sweep_table(const std::vector<SweepRecord>& recs, SweepParam param);

CsvTable bounds_s_table(const BoundsSettings& b);
CsvTable bounds_b_table(const BoundsSettings& b);
CsvTable bounds_constants_table(const BoundsSettings& b);

CsvTable calibration_table(const Calibration& c);

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::string> outputs;
};

/// Library version string.
std::string library_version();
std::string utc_timestamp();
std::string manifest_json(const RunManifest& m);
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace gyrofdi
