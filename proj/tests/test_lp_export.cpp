#include "cdc/heep.hpp"
#include "cdc/lp_export.hpp"
#include "cdc/solvers.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cdc;

namespace {

Problem problem(DcKind kind, int n, std::uint64_t seed, FabricKind fabric = FabricKind::Optical, int micro = 0)
{
    GenerateOptions g;
    g.count = n;
    g.seed = seed;
    g.group_size = 3;
    Problem pb{build_reference_layout(kind, 1, 2, 1, reference_classes()), FabricParams::defaults(fabric), generate(g),
               kind, {}};
    if (micro > 0) pb.workloads = split_to_microservices(pb.wl(), micro, {0.5, 0.5}, {0.5, 0.5});
    return pb;
}

/// Variable values implied by a placement.
std::map<std::string, double> lp_values(const Problem& pb, const Placement& p)
{
    std::map<std::string, double> v;
    for (std::size_t w = 0; w < p.num_workloads(); ++w) {
        const int iw = static_cast<int>(w);
        if (p.wcl[w]) v[lpvar::wcl(iw, *p.wcl[w])] = 1;
        if (p.wml[w]) v[lpvar::wml(iw, *p.wml[w])] = 1;
        if (p.wcl[w] && p.wml[w]) v[lpvar::y(iw, *p.wcl[w], *p.wml[w])] = 1;
        else v[lpvar::beta(iw)] = 1;
    }
    for (int c = 0; c < pb.layout.num_cpus(); ++c) if (p.cpu_active(c)) v[lpvar::ca(c)] = 1;
    for (int m = 0; m < pb.layout.num_mems(); ++m) if (p.mem_active(m)) v[lpvar::ma(m)] = 1;
    for (int r = 0; r < pb.layout.num_racks(); ++r) if (p.rack_active[static_cast<std::size_t>(r)]) v[lpvar::rs(r)] = 1;
    for (int q = 0; q < pb.layout.num_pods(); ++q) if (p.pod_active[static_cast<std::size_t>(q)]) v[lpvar::ps(q)] = 1;
    v[lpvar::nar] = p.nar;
    v[lpvar::nap] = p.nap;
    v[lpvar::da] = p.nar > 0 ? 1 : 0;
    for (const auto& s : p.shuffle_pairs) v[lpvar::gamma(s.src, s.dst, s.x, s.y)] = 1;
    for (const auto& iw : pb.workloads.integrated) {
        bool all = true;
        for (int m : iw.members) all = all && p.is_served(m);
        if (all) v[lpvar::is(iw.id)] = 1;
    }
    return v;
}

double row_value(const LpRow& row, const std::map<std::string, double>& v)
{
    double s = 0.0;
    for (const auto& [name, c] : row.terms)
        if (auto it = v.find(name); it != v.end()) s += c * it->second;
    return s;
}

bool satisfied(const LpRow& row, double lhs)
{
    const double tol = 1e-7 * std::max(1.0, std::abs(row.rhs));
    if (row.sense == '<') return lhs <= row.rhs + tol;
    if (row.sense == '>') return lhs >= row.rhs - tol;
    return std::abs(lhs - row.rhs) <= tol;
}

LpModel strip_zeros(LpModel m)
{
    auto strip = [](LpTerms& t) { std::erase_if(t, [](const auto& e) { return e.second == 0.0; }); };
    strip(m.objective);
    for (auto& r : m.rows) strip(r.terms);
    return m;
}

} // namespace

TEST(LpExport, RoundTripIsExact)
{
    for (auto kind : {DcKind::Traditional, DcKind::RackScale, DcKind::PodScale}) {
        const auto pb = problem(kind, 4, 3, FabricKind::Hybrid);
        const auto model = build_lp_model(pb);
        std::stringstream ss(export_lp(pb));
        EXPECT_EQ(read_lp(ss), strip_zeros(model)) << to_string(kind);
    }
    const auto micro = problem(DcKind::LogicalRackScale, 2, 1, FabricKind::Optical, 2);
    std::stringstream ss(export_lp(micro));
    EXPECT_EQ(read_lp(ss), strip_zeros(build_lp_model(micro)));
}

TEST(LpExport, HeaderDocumentsNaming)
{
    const auto text = export_lp(problem(DcKind::RackScale, 1, 1));
    EXPECT_NE(text.find("WCL_w{w}_c{j}"), std::string::npos);
    EXPECT_NE(text.find("Minimize"), std::string::npos);
    EXPECT_NE(text.find("Binaries"), std::string::npos);
    EXPECT_NE(text.find("Generals"), std::string::npos);
    EXPECT_NE(text.find("End"), std::string::npos);
}

TEST(LpExport, EmptyWorkloadSet)
{
    const auto pb = problem(DcKind::RackScale, 0, 1);
    const auto m = build_lp_model(pb);
    for (const auto& [name, c] : m.objective) EXPECT_TRUE(name.rfind("WCL", 0) != 0 && name.rfind("Y_", 0) != 0);
    const auto v = lp_values(pb, Placement::empty(pb.layout, 0));
    EXPECT_DOUBLE_EQ(evaluate_lp_objective(m, v), 0.0);
    for (const auto& row : m.rows) EXPECT_TRUE(satisfied(row, row_value(row, v))) << row.name;
}

TEST(LpExport, PlacementsSatisfyEveryRowAndPriceEqually)
{
    for (auto kind : {DcKind::Traditional, DcKind::RackScale, DcKind::PodScale, DcKind::LogicalRackScale})
        for (auto fabric : {FabricKind::Electrical, FabricKind::Hybrid, FabricKind::Optical}) {
            const auto pb = problem(kind, 5, 2, fabric);
            const auto model = build_lp_model(pb);
            for (const auto& p : {heep_place(pb).placement, solve_exact(pb).placement}) {
                const auto v = lp_values(pb, p);
                for (const auto& row : model.rows)
                    EXPECT_TRUE(satisfied(row, row_value(row, v))) << row.name << " " << to_string(kind);
                EXPECT_NEAR(evaluate_lp_objective(model, v), objective(pb, p), 1e-7);
            }
        }
}

TEST(LpExport, MicroServiceRows)
{
    const auto pb = problem(DcKind::RackScale, 2, 4, FabricKind::Optical, 2);
    const auto model = build_lp_model(pb);
    bool c36 = false, c37 = false;
    for (const auto& r : model.rows) {
        c36 = c36 || r.name.rfind("c36_", 0) == 0;
        c37 = c37 || r.name.rfind("c37_", 0) == 0;
    }
    EXPECT_TRUE(c36);
    EXPECT_TRUE(c37);
    // a half-served integrated workload must break some row
    const auto bad = derive(pb, {0, std::nullopt, std::nullopt, std::nullopt}, {0, std::nullopt, std::nullopt, std::nullopt});
    const auto v = lp_values(pb, bad);
    bool broken = false;
    for (const auto& row : model.rows) broken = broken || !satisfied(row, row_value(row, v));
    EXPECT_TRUE(broken);
}

TEST(LpExport, SolutionReader)
{
    const auto pb = problem(DcKind::RackScale, 3, 5);
    const auto p = solve_exact(pb).placement;
    std::stringstream ss;
    ss << "# status Optimal\n";
    for (const auto& [k, val] : lp_values(pb, p)) ss << k << ' ' << val << '\n';
    ss << "WCL_w0_c9 0\n";
    const auto sol = read_lp_solution(ss);
    const auto back = placement_from_solution(pb, sol);
    EXPECT_EQ(back.wcl, p.wcl);
    EXPECT_EQ(back.wml, p.wml);
}

TEST(LpExport, ReaderRejectsGarbage)
{
    std::stringstream ss("Minimize\n obj: 3 x +\nSubject To\n");
    EXPECT_ANY_THROW(read_lp(ss));
}
