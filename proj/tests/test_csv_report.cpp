#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "gyrofdi/csv.hpp"
#include "gyrofdi/report.hpp"

using namespace gyrofdi;

namespace {

CsvTable roundtrip(const CsvTable& t) {
    std::stringstream ss;
    write_csv(ss, t);
    return read_csv(ss);
}

void expect_well_formed(const CsvTable& t) {
    EXPECT_FALSE(t.schema.empty());
    EXPECT_EQ(t.units.size(), t.columns.size()) << t.schema;
    for (const auto& u : t.units) EXPECT_FALSE(u.empty()) << t.schema;
    const CsvTable back = roundtrip(t);
    EXPECT_EQ(back.schema, t.schema);
    EXPECT_EQ(back.columns, t.columns);
    EXPECT_EQ(back.rows, t.rows);
}

}  // namespace

TEST(Csv, RandomDoublesRoundTripBitExactly) {
    std::mt19937_64 rng(3);
    CsvTable t;
    t.schema = "probe";
    t.columns = {"x"};
    t.units = {"1"};
    std::vector<double> values{0.0, -0.0, 1e-308, 5e-324, std::numeric_limits<double>::max(), 0.1, 1.0 / 3.0};
    for (int i = 0; i < 5000; ++i) {
        double d;
        std::uint64_t bits = rng();
        std::memcpy(&d, &bits, sizeof d);
        if (std::isfinite(d)) values.push_back(d);
    }
    for (double v : values) t.add_row({fmt(v)});
    const auto back = roundtrip(t).numeric("x");
    ASSERT_EQ(back.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        EXPECT_EQ(std::memcmp(&back[i], &values[i], sizeof(double)), 0) << values[i];
    }
}

TEST(Csv, NonFiniteCells) {
    EXPECT_TRUE(std::isnan(parse_cell(fmt(std::nan("")))));
    EXPECT_EQ(parse_cell(fmt(-std::numeric_limits<double>::infinity())), -std::numeric_limits<double>::infinity());
    EXPECT_THROW(parse_cell("1.5x"), CsvError);
    EXPECT_THROW(parse_cell(""), CsvError);
}

TEST(Csv, HeaderLayout) {
    CsvTable t;
    t.schema = "demo";
    t.version = 2;
    t.columns = {"a", "b"};
    t.units = {"s", "m"};
    t.add_row({"1", "2"});
    std::stringstream ss;
    write_csv(ss, t);
    EXPECT_EQ(ss.str(), "# schema=demo/2\na,b\ns,m\n1,2\n");
    EXPECT_THROW(t.add_row({"1"}), CsvError);
    EXPECT_THROW(t.index_of("c"), CsvError);
}

TEST(Csv, ReaderRejectsMalformedInput) {
    std::stringstream a("a,b\ns,m\n");
    EXPECT_THROW(read_csv(a), CsvError);
    std::stringstream b("# schema=x/1\na,b\ns\n");
    EXPECT_THROW(read_csv(b), CsvError);
    std::stringstream c("# schema=x/1\na,b\ns,m\n1,2,3\n");
    EXPECT_THROW(read_csv(c), CsvError);
    EXPECT_THROW(read_csv_file("/nonexistent.csv"), CsvError);
}

TEST(Report, RunTablesAreWellFormed) {
    ScenarioConfig c;
    c.fault = parse_fault("sx=0.5@56");
    const RunOutput ro = run_once(c);
    const CsvTable res = residuals_table(ro.trace, c.threshold);
    expect_well_formed(res);
    EXPECT_EQ(res.rows.size(), ro.trace.t.size());
    EXPECT_EQ(res.numeric("psi"), ro.trace.psi);
    expect_well_formed(trajectory_table(ro.trace));
    expect_well_formed(measurements_table(ro.trace));
    const CsvTable hyp = hypotheses_table(ro.trace);
    expect_well_formed(hyp);
    EXPECT_EQ(hyp.rows.size(), 6u);
    expect_well_formed(hypothesis_series_table(ro.trace));
    const CsvTable det = detection_table(ro.record);
    ASSERT_EQ(det.rows.size(), 1u);
    EXPECT_EQ(det.numeric("t_fd")[0], ro.record.t_fd);
}

TEST(Report, NoDetectionNoRow) {
    const RunOutput ro = run_once(ScenarioConfig{});
    EXPECT_FALSE(ro.record.detected);
    EXPECT_TRUE(detection_table(ro.record).rows.empty());
    EXPECT_TRUE(hypotheses_table(ro.trace).rows.empty());
}

TEST(Report, CampaignSweepBoundsCalibrationTables) {
    ScenarioConfig c;
    c.fault = parse_fault("sx=0.5@56");
    CampaignOptions o;
    o.runs = 4;
    const CampaignResult r = run_campaign(c, UncertaintySpec::reference(), o);
    expect_well_formed(campaign_table(r));
    expect_well_formed(campaign_summary_table(r));
    expect_well_formed(envelope_table(r));
    EXPECT_EQ(campaign_table(r).rows.size(), 4u);
    expect_well_formed(sweep_table(sweep(c, SweepParam::Scale, {0.5, 1.0}), SweepParam::Scale));
    const FullConfig fc = preset("scenario2");
    expect_well_formed(bounds_s_table(fc.bounds));
    expect_well_formed(bounds_b_table(fc.bounds));
    expect_well_formed(bounds_constants_table(fc.bounds));
    EXPECT_EQ(bounds_s_table(fc.bounds).rows.size(), fc.bounds.alphas.size());
    expect_well_formed(calibration_table(Calibration{0.99, 1.0, 2.0, 3, 4}));
}

TEST(Report, Manifest) {
    RunManifest m;
    m.command = "simulate";
    m.config_digest = "0123456789abcdef";
    m.seed = 9;
    m.version = library_version();
    m.timestamp = utc_timestamp();
    m.outputs = {"residuals.csv"};
    const std::string j = manifest_json(m);
    for (const char* key : {"\"config_digest\": \"0123456789abcdef\"", "\"seed\": 9", "\"residuals.csv\""}) {
        EXPECT_NE(j.find(key), std::string::npos) << key;
    }
    EXPECT_EQ(m.timestamp.size(), 20u);
    EXPECT_FALSE(library_version().empty());
}
