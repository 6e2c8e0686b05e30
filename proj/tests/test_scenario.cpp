#include "cdc/scenario.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cdc;

namespace {

Scenario tiny()
{
    Scenario s;
    s.name = "tiny";
    s.dc_kind = DcKind::RackScale;
    s.fabrics = {FabricKind::Electrical, FabricKind::Optical};
    s.counts = {3};
    s.seeds = {1, 2};
    s.layout = {1, 2, 1};
    s.budget.max_seconds = 30;
    return s;
}

} // namespace

TEST(Scenario, JsonRoundTrip)
{
    auto s = tiny();
    s.setup = Setup::RsMicro;
    s.dc_kind = DcKind::LogicalRackScale;
    s.overrides.cpu_shares = {0.25, 0.75};
    s.overrides.pattern = ShufflePattern::OneToMany;
    EXPECT_EQ(scenario_from_json(to_json(s)), s);
}

TEST(Scenario, DefaultsAndValidation)
{
    const auto s = scenario_from_json(nlohmann::json{{"schema_version", 1}, {"fabric", "hybrid"}});
    EXPECT_EQ(s.fabrics, std::vector<FabricKind>{FabricKind::Hybrid});
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"schema_version", 2}}), config_error);
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"schema_version", 1}, {"colour", "red"}}), config_error);
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"schema_version", 1}, {"counts", "many"}}), config_error);
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"schema_version", 1}, {"setup", "TS-Mono"}, {"dc_kind", "pod-scale"}}),
                 config_error);
    EXPECT_THROW(scenario_from_json(nlohmann::json{{"schema_version", 1}, {"methods", {"guess"}}}), config_error);
    EXPECT_THROW(setup_from_string("XS-Mono"), config_error);
}

TEST(Scenario, SetupDecidesKindAndSplit)
{
    auto s = tiny();
    s.setup = Setup::RsMicro;
    EXPECT_EQ(s.effective_kind(), DcKind::LogicalRackScale);
    s.dc_kind = DcKind::Traditional;
    const auto pb = build_problem(s, {FabricKind::Optical, 4, 1});
    EXPECT_EQ(pb.dc_kind, DcKind::LogicalRackScale);
    EXPECT_EQ(pb.wl().size(), 8u);
    EXPECT_EQ(pb.workloads.integrated.size(), 4u);
    EXPECT_TRUE(pb.shuffle().empty());
    s.setup = Setup::TsMono;
    EXPECT_EQ(build_problem(s, {FabricKind::Optical, 4, 1}).dc_kind, DcKind::Traditional);
}

TEST(Run, ExactRowMatchesObjective)
{
    auto s = tiny();
    s.fabrics = {FabricKind::Optical};
    s.seeds = {1};
    s.dc_kind = DcKind::Traditional;
    s.methods = {Method::Exact};
    const auto rows = run(s);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].status, "ok");
    EXPECT_DOUBLE_EQ(rows[0].report.tdpc, rows[0].objective - s.overrides.alpha * rows[0].report.blocked);
}

TEST(Run, RowsCanonicalOrderAndGap)
{
    auto s = tiny();
    s.methods = {Method::Heep, Method::Exact, Method::LpExport};
    RunOptions o;
    o.lp_dir = std::filesystem::temp_directory_path() / "cdc_scenario_test";
    const auto rows = run(s, o);
    ASSERT_EQ(rows.size(), 2u * 1 * 2 * 3);
    EXPECT_EQ(rows[0].fabric, "electrical");
    EXPECT_EQ(rows[0].seed, 1u);
    EXPECT_EQ(rows[0].method, "heep");
    EXPECT_EQ(rows[2].status, "exported");
    EXPECT_TRUE(std::filesystem::exists(rows[2].detail));
    ASSERT_TRUE(rows[0].gap_pct);
    EXPECT_NEAR(*rows[0].gap_pct, 100.0 * (rows[0].objective / rows[1].objective - 1.0), 1e-12);
    EXPECT_GE(*rows[0].gap_pct, -1e-9);
    EXPECT_FALSE(any_error(rows));
    std::filesystem::remove_all(o.lp_dir);
}

TEST(Run, RowConfigReproducesRow)
{
    auto s = tiny();
    s.methods = {Method::Heep};
    const auto rows = run(s);
    for (const auto& r : rows) {
        const auto again = run(scenario_from_json(nlohmann::json::parse(r.config)));
        ASSERT_EQ(again.size(), 1u);
        EXPECT_EQ(again[0].objective, r.objective);
        EXPECT_EQ(again[0].config, r.config);
    }
}

TEST(Run, ErrorRowsAreFlagged)
{
    auto s = tiny();
    s.layout = {1, 3, 1};
    s.dc_kind = DcKind::PodScale;
    const auto rows = run(s);
    EXPECT_TRUE(any_error(rows));
    EXPECT_EQ(rows[0].status, "error");
}

TEST(Rows, CsvRoundTripAndGoldenHeader)
{
    EXPECT_STREQ(row_csv_header,
                 "schema_version,scenario,setup,dc_kind,fabric,class,count,seed,method,status,objective,"
                 "tcpc,tmpc,tnpc,tdpc,blocked,active_cpu,active_mem,nar,nap,avg_cpu_util,avg_mem_util,"
                 "gap_pct,nodes,wall_time,detail,config");
    auto s = tiny();
    s.methods = {Method::Heep, Method::Exact};
    const auto rows = run(s);
    std::stringstream ss;
    write_rows_csv(ss, rows);
    const auto back = read_rows_csv(ss);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].objective, rows[i].objective);
        EXPECT_EQ(back[i].report.tnpc, rows[i].report.tnpc);
        EXPECT_EQ(back[i].config, rows[i].config);
        EXPECT_EQ(back[i].gap_pct, rows[i].gap_pct);
        EXPECT_EQ(back[i].status, rows[i].status);
    }
}

TEST(Rows, GoldenRow)
{
    ResultRow r;
    r.scenario = "g";
    r.dc_kind = "traditional";
    r.fabric = "optical";
    r.cls = "cpu-intensive";
    r.count = 1;
    r.seed = 3;
    r.method = "exact";
    r.status = "ok";
    r.objective = 1.5;
    r.report.tdpc = 1.5;
    r.config = "{\"a\":1}";
    std::stringstream ss;
    write_row_csv(ss, r);
    EXPECT_EQ(ss.str(), "1,g,,traditional,optical,cpu-intensive,1,3,exact,ok,1.5,0,0,0,1.5,0,0,0,0,0,0,0,,0,0,,"
                        "\"{\"\"a\"\":1}\"\n");
}

TEST(Compare, IdenticalRowsGiveZero)
{
    auto s = tiny();
    s.methods = {Method::Heep};
    auto rows = run(s);
    auto copy = rows;
    for (auto& r : copy) r.scenario = "twin";
    rows.insert(rows.end(), copy.begin(), copy.end());
    const auto c = compare(rows, parse_selector("scenario=tiny"), parse_selector("scenario=twin"));
    EXPECT_EQ(c.pairs, 4u);
    EXPECT_DOUBLE_EQ(c.mean_reduction_pct, 0.0);
}

TEST(Compare, FabricReduction)
{
    auto s = tiny();
    s.methods = {Method::Exact};
    const auto rows = run(s);
    const auto c = compare(rows, parse_selector("fabric=electrical"), parse_selector("fabric=optical"));
    EXPECT_EQ(c.pairs, 2u);
    double sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        sum += 100.0 * (rows[i].report.tdpc - rows[i + 2].report.tdpc) / rows[i].report.tdpc;
    EXPECT_NEAR(c.mean_reduction_pct, sum / 2, 1e-9);
    EXPECT_GT(c.mean_reduction_pct, 0.0);
}

TEST(Compare, PairingErrors)
{
    auto s = tiny();
    s.methods = {Method::Heep};
    auto rows = run(s);
    EXPECT_THROW(compare(rows, parse_selector("fabric=electrical"), parse_selector("fabric=hybrid")), pairing_error);
    rows.pop_back();
    EXPECT_THROW(compare(rows, parse_selector("fabric=electrical"), parse_selector("fabric=optical")), pairing_error);
    EXPECT_THROW(parse_selector("fabric"), config_error);
    EXPECT_THROW(parse_selector("count=3"), config_error);
}

TEST(Scenario, ShippedFilesLoad)
{
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(CDC_SOURCE_DIR) / "scenarios"))
        EXPECT_NO_THROW(load_scenario(e.path())) << e.path();
}
