#include "cdc/workload.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace cdc;

namespace {

GenerateOptions opts(int n, WorkloadClass c, ShufflePattern p = ShufflePattern::ManyToMany, std::uint64_t seed = 7)
{
    GenerateOptions g;
    g.count = n;
    g.cls = c;
    g.pattern = p;
    g.seed = seed;
    return g;
}

} // namespace

TEST(Generate, Empty)
{
    const auto s = generate(opts(0, WorkloadClass::CpuIntensive));
    EXPECT_TRUE(s.workloads.empty());
    EXPECT_TRUE(s.shuffle.empty());
}

TEST(Generate, CpuIntensiveRanges)
{
    const auto s = generate(opts(20, WorkloadClass::CpuIntensive));
    ASSERT_EQ(s.size(), 20u);
    std::set<int> groups;
    for (const auto& w : s.workloads) {
        EXPECT_GE(w.wc, 1.0);
        EXPECT_LE(w.wc, 3.0);
        EXPECT_GE(w.wm, 4.0);
        EXPECT_LE(w.wm, 8.0);
        EXPECT_EQ(w.tcm_up, 120.0);
        EXPECT_EQ(w.tcm_down, 100.0);
        groups.insert(w.group_id);
    }
    EXPECT_EQ(groups.size(), 4u);
    EXPECT_EQ(s.shuffle.size(), 4u * 5 * 4);
    for (const auto& [k, v] : s.shuffle.entries()) {
        EXPECT_EQ(k.first / 5, k.second / 5);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 10.0);
    }
}

TEST(Generate, MemIntensiveRanges)
{
    const auto s = generate(opts(50, WorkloadClass::MemIntensive));
    for (const auto& w : s.workloads) {
        EXPECT_GE(w.wc, 0.5);
        EXPECT_LE(w.wc, 2.0);
        EXPECT_GE(w.wm, 6.0);
        EXPECT_LE(w.wm, 24.0);
    }
}

TEST(Generate, Deterministic)
{
    const auto a = generate(opts(20, WorkloadClass::CpuIntensive, ShufflePattern::Mixed, 11));
    const auto b = generate(opts(20, WorkloadClass::CpuIntensive, ShufflePattern::Mixed, 11));
    EXPECT_EQ(a.workloads, b.workloads);
    EXPECT_EQ(a.shuffle, b.shuffle);
    const auto c = generate(opts(20, WorkloadClass::CpuIntensive, ShufflePattern::Mixed, 12));
    EXPECT_NE(a.workloads, c.workloads);
}

TEST(Generate, RejectsBadOptions)
{
    auto g = opts(-1, WorkloadClass::CpuIntensive);
    EXPECT_THROW(generate(g), config_error);
    g = opts(5, WorkloadClass::CpuIntensive);
    g.group_size = 0;
    EXPECT_THROW(generate(g), config_error);
}

TEST(Split, IdentityWithOnePart)
{
    const auto s = generate(opts(6, WorkloadClass::CpuIntensive));
    const auto m = split_to_microservices(s.workloads, 1, {1.0}, {1.0});
    ASSERT_EQ(m.workloads.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        auto w = m.workloads[i];
        EXPECT_EQ(w.parent_integrated, std::optional<int>(static_cast<int>(i)));
        w.parent_integrated.reset();
        EXPECT_EQ(w, s.workloads[i]);
    }
}

TEST(Split, HalvesDemandAndTraffic)
{
    Workload p;
    p.wc = 3.0;
    p.wm = 8.0;
    p.tcm_up = 120.0;
    const auto m = split_to_microservices({p}, 2, {0.5, 0.5}, {0.5, 0.5});
    ASSERT_EQ(m.workloads.size(), 2u);
    ASSERT_EQ(m.integrated.size(), 1u);
    EXPECT_EQ(m.integrated[0].members, (std::vector<int>{0, 1}));
    for (const auto& w : m.workloads) {
        EXPECT_DOUBLE_EQ(w.wc, 1.5);
        EXPECT_DOUBLE_EQ(w.tcm_up, 60.0);
        EXPECT_DOUBLE_EQ(w.wm, 4.0);
    }
    EXPECT_TRUE(m.shuffle.empty());
}

TEST(Split, RejectsBadShares)
{
    Workload p;
    p.wc = 1;
    p.wm = 1;
    EXPECT_THROW(split_to_microservices({p}, 2, {0.5, 0.6}, {0.5, 0.5}), config_error);
    EXPECT_THROW(split_to_microservices({p}, 2, {1.0}, {0.5, 0.5}), config_error);
    EXPECT_THROW(split_to_microservices({p}, 0, {}, {}), config_error);
}

TEST(Serialization, WorkloadTableRoundTrip)
{
    const auto s = generate(opts(12, WorkloadClass::MemIntensive));
    auto m = split_to_microservices(s.workloads, 2, {0.3, 0.7}, {0.6, 0.4});
    m.workloads[3].max_lat = LatencyClass::SameRack;
    std::stringstream ss;
    write_workloads_csv(ss, m.workloads);
    const auto back = read_workloads_csv(ss);
    EXPECT_EQ(back, m.workloads);
    EXPECT_EQ(integrated_from_members(back), m.integrated);

    std::stringstream sh;
    write_shuffle_csv(sh, s.shuffle);
    EXPECT_EQ(read_shuffle_csv(sh), s.shuffle);
}

TEST(Serialization, RejectsMalformedTables)
{
    std::stringstream bad("id,wc\n");
    EXPECT_THROW(read_workloads_csv(bad), config_error);
    std::stringstream cols(std::string(workload_csv_header) + "\n0,cpu-intensive,1\n");
    EXPECT_THROW(read_workloads_csv(cols), config_error);
    std::stringstream neg(std::string(workload_csv_header) + "\n0,cpu-intensive,-1,2,0,0,0,0,0,0,0,,4\n");
    EXPECT_THROW(read_workloads_csv(neg), config_error);
}

TEST(Shuffle, RejectsSelfTraffic)
{
    ShuffleMatrix m;
    EXPECT_THROW(m.set(1, 1, 2.0), config_error);
    EXPECT_THROW(m.set(0, 1, -2.0), config_error);
}
