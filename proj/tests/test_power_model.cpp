#include "cdc/objective.hpp"

#include <gtest/gtest.h>

using namespace cdc;

namespace {

Workload make_workload(int id, double wc, double wm, double tcm_up = 0.0, double tcm_down = 0.0)
{
    Workload w;
    w.id = id;
    w.wc = wc;
    w.wm = wm;
    w.tcm_up = tcm_up;
    w.tcm_down = tcm_down;
    return w;
}

Placement place(const DcLayout& lay, const std::vector<Workload>& ws, std::vector<std::optional<int>> c,
                std::vector<std::optional<int>> m)
{
    return Placement::derive(lay, std::move(c), std::move(m), nullptr, &ws);
}

} // namespace

TEST(PathEnergy, HandSummedTiers)
{
    const auto opt = FabricParams::defaults(FabricKind::Optical);
    const auto ele = FabricParams::defaults(FabricKind::Electrical);
    const auto hyb = FabricParams::defaults(FabricKind::Hybrid);
    const double es = 181.0 / 6.4;

    EXPECT_DOUBLE_EQ(path_energy(opt, LatencyClass::SameNode), 0.5);
    EXPECT_DOUBLE_EQ(path_energy(opt, LatencyClass::SameRack), 2.0);
    EXPECT_DOUBLE_EQ(path_energy(opt, LatencyClass::SamePod), 0.5 + 1.0 + 1.0 + 1.0 + 0.5);
    EXPECT_DOUBLE_EQ(path_energy(ele, LatencyClass::SameNode), 0.5);
    EXPECT_DOUBLE_EQ(path_energy(ele, LatencyClass::SameRack), 2.0 + es);
    EXPECT_DOUBLE_EQ(path_energy(ele, LatencyClass::SamePod), 4.0 + 3 * es);
    EXPECT_DOUBLE_EQ(path_energy(hyb, LatencyClass::SameRack), 2.0 + es);
    EXPECT_DOUBLE_EQ(path_energy(hyb, LatencyClass::SameDc), 5.0 + 2 * es);
    EXPECT_DOUBLE_EQ(north_south_energy(opt), 0.5 + 1.0 + 1.0 + 10.0);
    EXPECT_DOUBLE_EQ(north_south_energy(ele), 12.5 + 2 * es);
}

TEST(PairTable, SameNodeUsesOnBoardOnly)
{
    const auto lay = paper_layout(DcKind::Traditional);
    for (auto k : {FabricKind::Electrical, FabricKind::Hybrid, FabricKind::Optical}) {
        const auto t = compute_pair_energy_table(lay, FabricParams::defaults(k));
        for (int c = 0; c < lay.num_cpus(); ++c)
            for (int m = 0; m < lay.num_mems(); ++m) {
                if (latency_class(lay, c, m) == LatencyClass::SameNode) {
                    EXPECT_DOUBLE_EQ(t.uplink(c, m), 0.5);
                    EXPECT_DOUBLE_EQ(t.downlink(m, c), 0.5);
                }
                EXPECT_GE(t.uplink(c, m), 0.0);
            }
    }
}

TEST(Tcpc, HandEvaluated)
{
    const auto lay = paper_layout(DcKind::Traditional);
    const std::vector<Workload> one{make_workload(0, 2.0, 1.0)};
    EXPECT_NEAR(tcpc(lay, place(lay, one, {0}, {0}), one), 0.7 * 130 + (39.0 / 3.6) * 2, 1e-9);
    EXPECT_NEAR(tcpc(lay, place(lay, one, {0}, {0}), one), 112.6666666667, 1e-9);

    const std::vector<Workload> two{make_workload(0, 1.0, 1.0), make_workload(1, 2.0, 1.0)};
    EXPECT_NEAR(tcpc(lay, place(lay, two, {0, 0}, {0, 0}), two), 123.5, 1e-9);
    EXPECT_DOUBLE_EQ(tcpc(lay, Placement::empty(lay, 2), two), 0.0);
}

TEST(Tmpc, HandEvaluated)
{
    const auto lay = paper_layout(DcKind::Traditional);
    const std::vector<Workload> one{make_workload(0, 1.0, 8.0)};
    EXPECT_NEAR(tmpc(lay, place(lay, one, {0}, {0}), one), 31.0, 1e-9);
    // node 4 of rack 0 is the first 8 GB server
    ASSERT_EQ(lay.mem_class(4).capacity, 8.0);
    EXPECT_NEAR(tmpc(lay, place(lay, one, {4}, {4}), one), 10.24, 1e-9);
    EXPECT_DOUBLE_EQ(tmpc(lay, Placement::empty(lay, 1), one), 0.0);
}

TEST(StaticNetwork, TableValues)
{
    const auto opt = FabricParams::defaults(FabricKind::Optical);
    const auto ele = FabricParams::defaults(FabricKind::Electrical);
    const auto hyb = FabricParams::defaults(FabricKind::Hybrid);
    EXPECT_DOUBLE_EQ(static_network_power(opt, 2, 1), 250.0);
    EXPECT_DOUBLE_EQ(static_network_power(opt, 2, 2), 325.0);
    EXPECT_DOUBLE_EQ(static_network_power(ele, 1, 1), 624.0);
    EXPECT_DOUBLE_EQ(static_network_power(ele, 2, 1), 936.0);
    EXPECT_DOUBLE_EQ(static_network_power(hyb, 2, 1), 2 * 312.0 + 2 * 75.0);
    for (const auto& f : {opt, ele, hyb}) EXPECT_DOUBLE_EQ(static_network_power(f, 0, 0), 0.0);
    EXPECT_THROW(static_network_power(opt, -1, 0), contract_error);
}

TEST(Tnpc, EmptyAndSingle)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto f = FabricParams::defaults(FabricKind::Optical);
    const std::vector<Workload> one{make_workload(0, 1.0, 1.0, 120.0, 100.0)};
    EXPECT_DOUBLE_EQ(tnpc(lay, f, Placement::empty(lay, 1), one, {}), 0.0);
    const auto p = place(lay, one, {0}, {0});
    // same rack: 2.0 pJ/b both ways; no north-south traffic
    EXPECT_NEAR(tnpc(lay, f, p, one, {}), 50.0 + 75.0 * 2 + 2.0 * 220.0 * 1e-3, 1e-12);
}

TEST(Tnpc, ShuffleBetweenDistinctMemories)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto f = FabricParams::defaults(FabricKind::Optical);
    const std::vector<Workload> ws{make_workload(0, 1.0, 1.0), make_workload(1, 1.0, 1.0)};
    ShuffleMatrix sh;
    sh.set(0, 1, 10.0);
    const auto same = place(lay, ws, {0, 0}, {0, 0});
    const auto rack = place(lay, ws, {0, 0}, {0, 2});
    EXPECT_DOUBLE_EQ(tnpc_dynamic(compute_pair_energy_table(lay, f), same, ws, sh), 0.0);
    EXPECT_NEAR(tnpc_dynamic(compute_pair_energy_table(lay, f), rack, ws, sh), 10.0 * 2.0 * 1e-3, 1e-15);
}

TEST(Report, EmptyAndFullMemory)
{
    const auto lay = paper_layout(DcKind::Traditional);
    const auto f = FabricParams::defaults(FabricKind::Optical);
    const std::vector<Workload> ws{make_workload(0, 1.0, 8.0), make_workload(1, 1.0, 2.0)};
    const auto e = report(lay, f, Placement::empty(lay, 2), ws, {});
    EXPECT_EQ(e.blocked, 2);
    EXPECT_EQ(e.tdpc, 0.0);
    EXPECT_EQ(e.active_cpu, 0);

    const auto r = report(lay, f, place(lay, ws, {4, std::nullopt}, {4, std::nullopt}), ws, {});
    EXPECT_EQ(r.blocked, 1);
    EXPECT_DOUBLE_EQ(r.avg_mem_util, 1.0);
    EXPECT_EQ(r.nar, 1);
    EXPECT_EQ(r.nap, 1);
    EXPECT_NEAR(r.tdpc, r.tcpc + r.tmpc + r.tnpc, 1e-12);
}

TEST(Objective, BlockingPenaltyAndDecomposition)
{
    Problem pb;
    pb.layout = paper_layout(DcKind::Traditional);
    pb.fabric = FabricParams::defaults(FabricKind::Optical);
    pb.dc_kind = DcKind::Traditional;
    for (int i = 0; i < 5; ++i) pb.workloads.workloads.push_back(make_workload(i, 1.0, 4.0));
    EXPECT_DOUBLE_EQ(objective(pb, Placement::empty(pb.layout, 5)), 10000.0);

    auto p = derive(pb, {0, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                    {0, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
    const double expected = (91.0 + 39.0 / 3.6) + (28.0 + 12.0 / 32 * 4) + (50.0 + 75.0 * 2) + 4 * 2000.0;
    EXPECT_NEAR(objective(pb, p), expected, 1e-9);

    // an extra active rack with no new workload costs the rack's switch power
    auto q = derive(pb, {0, 6, std::nullopt, std::nullopt, std::nullopt}, {0, 6, std::nullopt, std::nullopt, std::nullopt});
    auto q1 = derive(pb, {0, 1, std::nullopt, std::nullopt, std::nullopt}, {0, 1, std::nullopt, std::nullopt, std::nullopt});
    EXPECT_GT(objective(pb, q), objective(pb, q1));

    auto bad = derive(pb, {0, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
                      {1, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
    EXPECT_THROW(objective(pb, bad), contract_error);
}

TEST(Fabric, Validation)
{
    auto f = FabricParams::defaults(FabricKind::Optical);
    f.aggregation_switches = 0;
    EXPECT_THROW(f.validate(), config_error);
    f = FabricParams::defaults(FabricKind::Optical);
    f.on_board = -1;
    EXPECT_THROW(f.validate(), config_error);
    EXPECT_DOUBLE_EQ(FabricParams{}.es_energy_per_bit, 28.28125);
}
