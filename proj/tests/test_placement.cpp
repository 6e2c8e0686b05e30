#include "cdc/objective.hpp"

#include <gtest/gtest.h>

using namespace cdc;

namespace {

WorkloadSet workloads(std::initializer_list<std::pair<double, double>> demands)
{
    WorkloadSet s;
    for (auto [c, m] : demands) {
        Workload w;
        w.id = static_cast<int>(s.workloads.size());
        w.wc = c;
        w.wm = m;
        s.workloads.push_back(w);
    }
    return s;
}

bool has(const std::vector<Violation>& v, int id)
{
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.constraint == id; });
}

} // namespace

TEST(Derive, EmptyMaps)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto p = Placement::empty(lay, 3);
    EXPECT_EQ(p.nar, 0);
    EXPECT_EQ(p.nap, 0);
    EXPECT_EQ(p.num_blocked(), 3);
    EXPECT_TRUE(p.pairs.empty());
}

TEST(Derive, SingleWorkloadInRackZero)
{
    const auto lay = paper_layout(DcKind::Traditional);
    const auto p = Placement::derive(lay, {0}, {0});
    EXPECT_EQ(p.nar, 1);
    EXPECT_TRUE(p.rack_active[0]);
    EXPECT_EQ(p.cpu_rack[0], std::optional<int>(0));
    EXPECT_EQ(p.mem_rack[0], std::optional<int>(0));
    EXPECT_TRUE(p.is_served(0));
    ASSERT_EQ(p.pairs.size(), 1u);
}

TEST(Derive, TwoPods)
{
    const auto lay = paper_layout(DcKind::Traditional);
    // node 12 is the first node of pod 1
    const auto p = Placement::derive(lay, {0, 12}, {0, 12});
    EXPECT_EQ(p.nap, 2);
    EXPECT_EQ(p.nar, 2);
}

TEST(Derive, RejectsUnknownIds)
{
    const auto lay = paper_layout(DcKind::Traditional);
    EXPECT_THROW(Placement::derive(lay, {99}, {0}), integrity_error);
    EXPECT_THROW(Placement::derive(lay, {0, 1}, {0}), integrity_error);
}

TEST(Derive, ShufflePairsOnlyForHostedMemories)
{
    const auto lay = paper_layout(DcKind::RackScale);
    ShuffleMatrix sh;
    sh.set(0, 1, 5.0);
    sh.set(1, 2, 5.0);
    const auto p = Placement::derive(lay, {0, 0, std::nullopt}, {0, 3, std::nullopt}, &sh);
    ASSERT_EQ(p.shuffle_pairs.size(), 1u);
    EXPECT_EQ(p.shuffle_pairs[0].x, 0);
    EXPECT_EQ(p.shuffle_pairs[0].y, 3);
}

TEST(Check, CapacityViolation)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto ws = workloads({{2.0, 1.0}, {1.7, 1.0}});
    const auto p = Placement::derive(lay, {0, 0}, {0, 0});
    const auto v = check(p, lay, ws, DcKind::RackScale);
    ASSERT_TRUE(has(v, 14));
    EXPECT_NEAR(v.front().lhs, 3.7, 1e-12);
    EXPECT_DOUBLE_EQ(v.front().rhs, 3.6);
}

TEST(Check, CapacityEqualityAllowed)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto ws = workloads({{1.6, 16.0}, {2.0, 16.0}});
    EXPECT_TRUE(check(Placement::derive(lay, {0, 0}, {0, 0}), lay, ws, DcKind::RackScale).empty());
}

TEST(Check, MemoryCapacity)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto ws = workloads({{1.0, 20.0}, {1.0, 20.0}});
    EXPECT_TRUE(has(check(Placement::derive(lay, {0, 1}, {0, 0}), lay, ws, DcKind::RackScale), 15));
}

TEST(Check, HalfServedWorkload)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto ws = workloads({{1.0, 1.0}});
    EXPECT_TRUE(has(check(Placement::derive(lay, {0}, {std::nullopt}), lay, ws, DcKind::RackScale), 18));
}

TEST(Check, LatencyBoundPerKind)
{
    const auto lay = paper_layout(DcKind::PodScale);
    const auto ws = workloads({{1.0, 1.0}});
    // cpu 0 is in pod 0; memory 23 in pod 1
    const auto v = check(Placement::derive(lay, {0}, {23}), lay, ws, DcKind::PodScale);
    ASSERT_TRUE(has(v, 31));
    EXPECT_DOUBLE_EQ(v.front().lhs, 4.0);
    EXPECT_DOUBLE_EQ(v.front().rhs, 3.0);

    const auto ts = paper_layout(DcKind::Traditional);
    EXPECT_TRUE(has(check(Placement::derive(ts, {0}, {1}), ts, ws, DcKind::Traditional), 31));
    EXPECT_TRUE(check(Placement::derive(ts, {0}, {1}), ts, ws, DcKind::LogicalRackScale).empty());

    auto tight = ws;
    tight.workloads[0].max_lat = LatencyClass::SameNode;
    EXPECT_TRUE(has(check(Placement::derive(ts, {0}, {1}), ts, tight, DcKind::LogicalRackScale), 31));
}

TEST(Check, IntegratedAllOrNothing)
{
    const auto lay = paper_layout(DcKind::RackScale);
    Workload p;
    p.wc = 2.0;
    p.wm = 4.0;
    const auto ws = split_to_microservices({p}, 2, {0.5, 0.5}, {0.5, 0.5});
    const auto partial = check(Placement::derive(lay, {0, std::nullopt}, {0, std::nullopt}), lay, ws, DcKind::RackScale);
    EXPECT_TRUE(has(partial, 36));
    EXPECT_TRUE(has(partial, 37));
    EXPECT_TRUE(check(Placement::derive(lay, {0, 1}, {0, 1}), lay, ws, DcKind::RackScale).empty());
    EXPECT_TRUE(check(Placement::empty(lay, 2), lay, ws, DcKind::RackScale).empty());
}

TEST(Check, SizeMismatch)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto ws = workloads({{1.0, 1.0}});
    EXPECT_TRUE(has(check(Placement::empty(lay, 2), lay, ws, DcKind::RackScale), 0));
}

TEST(PlacementCsv, RoundTrip)
{
    const auto lay = paper_layout(DcKind::RackScale);
    const auto p = Placement::derive(lay, {0, std::nullopt, 5}, {3, std::nullopt, 2});
    std::stringstream ss;
    write_placement_csv(ss, p);
    const auto [c, m] = read_placement_csv(ss);
    EXPECT_EQ(c, p.wcl);
    EXPECT_EQ(m, p.wml);

    std::stringstream bad("workload,cpu,mem\n1,0,0\n");
    EXPECT_THROW(read_placement_csv(bad), config_error);
}
