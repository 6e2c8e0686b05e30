#include "cdc/heep.hpp"

#include <gtest/gtest.h>

using namespace cdc;

namespace {

Problem problem(DcKind kind, int n, WorkloadClass cls, std::uint64_t seed)
{
    GenerateOptions g;
    g.count = n;
    g.cls = cls;
    g.seed = seed;
    return {paper_layout(kind), FabricParams::defaults(FabricKind::Optical), generate(g), kind, {}};
}

} // namespace

TEST(Thresholds, ReferenceClasses)
{
    const auto t = thresholds(paper_layout(DcKind::RackScale));
    ASSERT_EQ(t.cpu.size(), 3u);
    EXPECT_NEAR(t.cpu[0].upper, 2.66 / 3.6, 1e-12);
    EXPECT_NEAR(t.cpu[1].upper, 2.4 / 2.66, 1e-12);
    EXPECT_NEAR(t.cpu[0].upper, 0.73889, 1e-5);
    EXPECT_NEAR(t.cpu[1].upper, 0.90226, 1e-5);
    EXPECT_NEAR(t.mem[0].upper, 0.75, 1e-12);
    EXPECT_NEAR(t.mem[1].upper, 1.0 / 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(t.cpu[0].lower, 0.5);
    EXPECT_TRUE(t.cpu[2].last);
    EXPECT_TRUE(t.mem[2].last);
}

TEST(Thresholds, EqualCapacities)
{
    std::vector<ComponentClass> cls{{ResourceKind::Cpu, "a", 2.0, 50.0, 0.7}, {ResourceKind::Cpu, "b", 2.0, 60.0, 0.7}};
    const auto t = thresholds(cls);
    EXPECT_DOUBLE_EQ(t[0].upper, 1.0);
}

TEST(Select, SingleCandidate)
{
    const auto t = thresholds(paper_layout(DcKind::RackScale)).cpu;
    for (double u : {0.1, 0.6, 0.95}) EXPECT_EQ(select_best_component({{7, 0, u}}, t).chosen.component, 7);
}

TEST(Select, DecisionTable)
{
    const auto t = thresholds(paper_layout(DcKind::RackScale)).cpu;
    struct Cell
    {
        double head_util;
        int expected;
    };
    // head in class 0, alternative in class 1
    for (auto [u, want] : {Cell{0.4, 0}, Cell{0.5, 0}, Cell{0.6, 1}, Cell{0.73, 1}, Cell{0.74, 0}, Cell{1.0, 0}}) {
        const auto s = select_best_component({{0, 0, u}, {1, 1, 0.6}}, t);
        EXPECT_EQ(s.chosen.component, want) << "U=" << u;
        EXPECT_EQ(s.rejected.size(), want == 1 ? 1u : 0u);
    }
    EXPECT_THROW(select_best_component({}, t), contract_error);
}

TEST(Select, BestPerClassIsHighestUtilization)
{
    const auto t = thresholds(paper_layout(DcKind::RackScale)).cpu;
    const auto s = select_best_component({{0, 0, 0.3}, {1, 0, 0.45}, {2, 1, 0.9}}, t);
    EXPECT_EQ(s.chosen.component, 1);
}

TEST(Heep, EmptyWorkloadSet)
{
    const auto r = heep_place(problem(DcKind::RackScale, 0, WorkloadClass::CpuIntensive, 1));
    EXPECT_EQ(r.objective, 0.0);
    EXPECT_EQ(r.report.tdpc, 0.0);
    EXPECT_TRUE(r.log.empty());
}

TEST(Heep, BlocksOversizedWorkload)
{
    auto pb = problem(DcKind::RackScale, 1, WorkloadClass::CpuIntensive, 1);
    pb.workloads.workloads[0].wm = 1000.0;
    const auto r = heep_place(pb);
    EXPECT_EQ(r.report.blocked, 1);
    EXPECT_DOUBLE_EQ(r.objective, pb.params.alpha);
    ASSERT_EQ(r.log.size(), 1u);
    EXPECT_TRUE(r.log[0].blocked);
}

TEST(Heep, FeasibleAndDeterministic)
{
    for (auto kind : {DcKind::Traditional, DcKind::RackScale, DcKind::PodScale, DcKind::LogicalRackScale})
        for (auto cls : {WorkloadClass::CpuIntensive, WorkloadClass::MemIntensive}) {
            const auto pb = problem(kind, 20, cls, 3);
            const auto a = heep_place(pb);
            const auto b = heep_place(pb);
            EXPECT_TRUE(check(a.placement, pb).empty()) << to_string(kind);
            EXPECT_EQ(a.placement.wcl, b.placement.wcl);
            EXPECT_EQ(a.placement.wml, b.placement.wml);
            EXPECT_NEAR(a.objective, objective(pb, a.placement), 1e-9);
            EXPECT_EQ(a.log.size(), 20u);
        }
}

TEST(Heep, FirstQueryHasLargestRelevantDemand)
{
    for (auto cls : {WorkloadClass::CpuIntensive, WorkloadClass::MemIntensive}) {
        const auto pb = problem(DcKind::RackScale, 15, cls, 9);
        const auto r = heep_place(pb);
        const bool cpu = cls == WorkloadClass::CpuIntensive;
        auto demand = [&](const Workload& w) { return cpu ? w.wc : w.wm; };
        double best = 0.0;
        for (const auto& w : pb.wl()) best = std::max(best, demand(w));
        ASSERT_FALSE(r.log.empty());
        EXPECT_EQ(demand(pb.wl()[static_cast<std::size_t>(r.log[0].workload)]), best);
    }
}

TEST(Heep, LogCsv)
{
    const auto r = heep_place(problem(DcKind::RackScale, 3, WorkloadClass::CpuIntensive, 1));
    std::stringstream ss;
    write_heep_log_csv(ss, r.log);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, heep_log_csv_header);
    int lines = 0;
    for (std::string l; std::getline(ss, l);) ++lines;
    EXPECT_EQ(lines, 3);
}
