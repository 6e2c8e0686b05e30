// Acceptance run: one PASS/FAIL line per criterion.
//
//   cdc_acceptance [criterion...]
//
// Solver budgets (seconds per exact solve) come from the environment:
// CDC_ACC_GAP_SECONDS (default 60), CDC_ACC_FABRIC_SECONDS (20), CDC_ACC_SETUP_SECONDS (10).
#include "cdc/heep.hpp"
#include "cdc/lp_export.hpp"
#include "cdc/scenario.hpp"
#include "cdc/solvers.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <iostream>
#include <sstream>

using namespace cdc;

namespace {

// pinned tolerances
constexpr double threshold_tol = 1e-3;
constexpr double lp_rel_tol = 1e-4;
constexpr double equal_tol = 1e-6;
constexpr double max_mean_gap_pct = 20.0;
constexpr int min_proven_of_10 = 8;
constexpr double ele_hyb_lo = 5.0, ele_hyb_hi = 15.0;
constexpr double hyb_opt_lo = 20.0, hyb_opt_hi = 35.0;
constexpr double min_mem_drop_pct = 50.0;
constexpr double micro_cpu_lo = 10.0, micro_cpu_hi = 20.0;
constexpr double micro_mem_lo = 17.0, micro_mem_hi = 28.0;

double env_seconds(const char* name, double fallback)
{
    const char* v = std::getenv(name);
    return v ? std::stod(v) : fallback;
}

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

std::string fmt(double v, int prec = 2)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

double reduction(double base, double cand) { return 100.0 * (base - cand) / base; }

Problem paper_problem(DcKind kind, FabricKind fabric, WorkloadClass cls, int count, std::uint64_t seed)
{
    GenerateOptions g;
    g.count = count;
    g.cls = cls;
    g.seed = seed;
    g.intensity = ShuffleIntensity::None;
    Problem pb;
    pb.dc_kind = kind;
    pb.layout = build_reference_layout(kind, 2, 2, 2, reference_classes());
    pb.fabric = FabricParams::defaults(fabric);
    pb.workloads = generate(g);
    return pb;
}

SolveResult exact(const Problem& pb, double seconds, std::optional<Placement> warm = std::nullopt)
{
    SolveOptions o;
    o.budget.max_seconds = seconds;
    o.warm_start = std::move(warm);
    return solve_exact(pb, o);
}

/// Mono placement lifted onto the members of a split set (member j of parent i is 2i + j).
Placement lift(const Problem& micro, const Placement& mono, int parts = 2)
{
    std::vector<std::optional<int>> c, m;
    for (std::size_t i = 0; i < mono.wcl.size(); ++i)
        for (int j = 0; j < parts; ++j) c.push_back(mono.wcl[i]), m.push_back(mono.wml[i]);
    return derive(micro, c, m);
}

Problem as_micro(Problem pb)
{
    pb.workloads = split_to_microservices(pb.workloads.workloads, 2, {0.5, 0.5}, {0.5, 0.5});
    return pb;
}

// --------------------------------------------------------------------------

Outcome criterion1()
{
    Outcome o;
    const auto lay = build_reference_layout(DcKind::Traditional, 2, 2, 2, reference_classes());
    const auto t = thresholds(lay);
    const double cpu[] = {0.73889, 0.90226}, mem[] = {0.75, 0.333};
    for (int i = 0; i < 2; ++i) {
        o.require(std::abs(t.cpu[static_cast<std::size_t>(i)].upper - cpu[i]) <= threshold_tol, "cpu class " + std::to_string(i));
        o.require(std::abs(t.mem[static_cast<std::size_t>(i)].upper - mem[i]) <= threshold_tol, "mem class " + std::to_string(i));
    }
    o.detail << " cpu " << fmt(t.cpu[0].upper, 5) << ' ' << fmt(t.cpu[1].upper, 5) << ", mem " << fmt(t.mem[0].upper, 5)
             << ' ' << fmt(t.mem[1].upper, 5);
    return o;
}

Outcome criterion2()
{
    Outcome o;
    const double opt = static_network_power(FabricParams::defaults(FabricKind::Optical), 2, 2);
    const double ele = static_network_power(FabricParams::defaults(FabricKind::Electrical), 2, 1);
    o.require(opt == 325.0, "optical == 325");
    o.require(ele == 936.0, "electrical == 936");
    o.detail << " optical " << opt << " W, electrical " << ele << " W";
    return o;
}

Outcome criterion3()
{
    Outcome o;
    const DcKind kinds[] = {DcKind::Traditional, DcKind::RackScale, DcKind::PodScale, DcKind::LogicalRackScale};
    const FabricKind fabrics[] = {FabricKind::Electrical, FabricKind::Hybrid, FabricKind::Optical};
    const auto dir = std::filesystem::temp_directory_path() / "cdc_acceptance_lp";
    std::filesystem::create_directories(dir);
    const std::string python = CDC_PYTHON;
    const auto script = std::filesystem::path(CDC_SOURCE_DIR) / "tools" / "solve_lp.py";
    int bb_equal = 0, lp_match = 0, lp_run = 0;
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
        const auto kind = kinds[i % 4];
        GenerateOptions g;
        g.count = 1 + i % 5;
        g.cls = i % 2 ? WorkloadClass::MemIntensive : WorkloadClass::CpuIntensive;
        g.seed = 100 + static_cast<std::uint64_t>(i);
        g.group_size = 3;
        g.intensity = i % 3 ? ShuffleIntensity::NonIntensive : ShuffleIntensity::Intensive;
        Problem pb{build_reference_layout(kind, 1, 2, 1, reference_classes()), FabricParams::defaults(fabrics[i % 3]),
                   generate(g), kind, {}};
        const auto bb = solve_exact(pb);
        const auto ex = solve_exhaustive(pb);
        if (bb.proven_optimal && bb.objective == ex.objective) ++bb_equal;
        else o.detail << " [instance " << i << ": b&b " << bb.objective << " vs enumeration " << ex.objective << "]";

        if (python.empty()) continue;
        const auto lp = dir / ("i" + std::to_string(i) + ".lp");
        const auto sol = dir / ("i" + std::to_string(i) + ".sol");
        std::ofstream(lp) << export_lp(pb);
        const std::string cmd = "\"" + python + "\" \"" + script.string() + "\" \"" + lp.string() + "\" -o \"" +
                                sol.string() + "\" --time-limit 60";
        ++lp_run;
        if (std::system(cmd.c_str()) != 0) {
            o.detail << " [instance " << i << ": external solver did not reach optimality]";
            continue;
        }
        std::ifstream in(sol);
        const auto values = read_lp_solution(in);
        const double ext = evaluate_lp_objective(build_lp_model(pb), values);
        const double rel = std::abs(ext - ex.objective) / std::max(1.0, std::abs(ex.objective));
        worst = std::max(worst, rel);
        if (rel <= lp_rel_tol) ++lp_match;
        else o.detail << " [instance " << i << ": external " << ext << " vs " << ex.objective << "]";
    }
    std::filesystem::remove_all(dir);
    o.require(bb_equal == 30, "b&b == enumeration on 30/30");
    o.require(lp_run == 30 && lp_match == 30, "external MILP within 1e-4 on 30/30");
    o.detail << " b&b==enumeration " << bb_equal << "/30, HiGHS match " << lp_match << "/" << lp_run
             << ", worst rel diff " << worst;
    return o;
}

Outcome criterion4()
{
    Outcome o;
    const double secs = env_seconds("CDC_ACC_GAP_SECONDS", 60.0);
    for (auto cls : {WorkloadClass::CpuIntensive, WorkloadClass::MemIntensive}) {
        double sum = 0.0, worst = 0.0;
        int proven = 0;
        bool dominated = true;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto pb = paper_problem(DcKind::RackScale, FabricKind::Optical, cls, 20, seed);
            const auto h = heep_place(pb);
            const auto x = exact(pb, secs);
            dominated = dominated && h.objective >= x.objective;
            const double gap = 100.0 * (h.objective / x.objective - 1.0);
            sum += gap;
            worst = std::max(worst, gap);
            proven += x.proven_optimal ? 1 : 0;
        }
        const auto name = std::string(to_string(cls));
        o.require(dominated, name + " heep >= exact");
        o.require(sum / 10 <= max_mean_gap_pct, name + " mean gap <= 20%");
        o.require(proven >= min_proven_of_10, name + " proven on >= 8/10");
        o.detail << ' ' << name << ": mean gap " << fmt(sum / 10) << "%, max " << fmt(worst) << "%, proven " << proven
                 << "/10;";
    }
    o.detail << " budget " << secs << " s per solve";
    return o;
}

struct FabricRuns
{
    std::vector<SolveResult> by_fabric[3]; ///< electrical, hybrid, optical; one entry per seed
};

const FabricRuns& traditional_fabric_runs()
{
    static const FabricRuns runs = [] {
        FabricRuns r;
        const double secs = env_seconds("CDC_ACC_FABRIC_SECONDS", 20.0);
        for (int f = 0; f < 3; ++f)
            for (std::uint64_t seed = 1; seed <= 5; ++seed)
                r.by_fabric[f].push_back(exact(paper_problem(DcKind::Traditional, static_cast<FabricKind>(f),
                                                             WorkloadClass::CpuIntensive, 20, seed),
                                               secs));
        return r;
    }();
    return runs;
}

Outcome criterion5()
{
    Outcome o;
    const auto& r = traditional_fabric_runs();
    double eh = 0.0, ho = 0.0;
    int proven = 0;
    for (std::size_t s = 0; s < 5; ++s) {
        const double e = r.by_fabric[0][s].report.tdpc, h = r.by_fabric[1][s].report.tdpc, p = r.by_fabric[2][s].report.tdpc;
        o.require(e > h && h > p, "ordering on seed " + std::to_string(s + 1));
        eh += reduction(e, h) / 5;
        ho += reduction(h, p) / 5;
        for (const auto& f : r.by_fabric) proven += f[s].proven_optimal ? 1 : 0;
    }
    o.require(eh >= ele_hyb_lo && eh <= ele_hyb_hi, "electrical->hybrid in [5, 15]%");
    o.require(ho >= hyb_opt_lo && ho <= hyb_opt_hi, "hybrid->optical in [20, 35]%");
    o.detail << " electrical->hybrid " << fmt(eh) << "%, hybrid->optical " << fmt(ho) << "% over 5 seeds, proven "
             << proven << "/15";
    return o;
}

Outcome criterion6()
{
    Outcome o;
    const auto& trad = traditional_fabric_runs().by_fabric[2];
    const double secs = env_seconds("CDC_ACC_FABRIC_SECONDS", 20.0);
    double min_count = 100.0, min_tmpc = 100.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rs = exact(paper_problem(DcKind::RackScale, FabricKind::Optical, WorkloadClass::CpuIntensive, 20, seed), secs);
        const auto& ts = trad[seed - 1];
        const double dc = reduction(ts.report.active_mem, rs.report.active_mem);
        const double dm = reduction(ts.report.tmpc, rs.report.tmpc);
        min_count = std::min(min_count, dc);
        min_tmpc = std::min(min_tmpc, dm);
        o.require(dc >= min_mem_drop_pct && dm >= min_mem_drop_pct, "drop >= 50% on seed " + std::to_string(seed));
    }
    o.detail << " optical, 5 seeds: min active-memory drop " << fmt(min_count) << "%, min TMPC drop " << fmt(min_tmpc) << "%";
    return o;
}

Outcome criterion7()
{
    Outcome o;
    const double secs = env_seconds("CDC_ACC_SETUP_SECONDS", 10.0);
    for (auto cls : {WorkloadClass::CpuIntensive, WorkloadClass::MemIntensive}) {
        double sum = 0.0;
        int ordered = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto ts = paper_problem(DcKind::Traditional, FabricKind::Optical, cls, 20, seed);
            auto rs = ts;
            rs.dc_kind = DcKind::LogicalRackScale;
            const auto ts_micro = as_micro(ts), rs_micro = as_micro(rs);

            // every placement of a more restricted setup is a placement of the looser one
            const auto a = exact(ts, secs);
            const auto b = exact(rs, secs, a.placement);
            const auto c = exact(ts_micro, secs, lift(ts_micro, a.placement));
            auto best = lift(rs_micro, b.placement);
            const auto c_on_rs = derive(rs_micro, c.placement.wcl, c.placement.wml);
            if (objective(rs_micro, c_on_rs) < objective(rs_micro, best)) best = c_on_rs;
            const auto d = exact(rs_micro, secs, best);

            const double tm = a.report.tdpc, rm = b.report.tdpc, tu = c.report.tdpc, ru = d.report.tdpc;
            const bool ok = tm > tu && tm > rm && tu > ru && rm > ru;
            ordered += ok ? 1 : 0;
            if (!ok)
                o.detail << " [" << to_string(cls) << " seed " << seed << ": TS-Mono " << fmt(tm) << ", TS-Micro "
                         << fmt(tu) << ", RS-Mono " << fmt(rm) << ", RS-Micro " << fmt(ru) << "]";
            sum += reduction(tm, ru);
        }
        const double mean = sum / 10;
        const bool cpu = cls == WorkloadClass::CpuIntensive;
        const double lo = cpu ? micro_cpu_lo : micro_mem_lo, hi = cpu ? micro_cpu_hi : micro_mem_hi;
        const auto name = std::string(to_string(cls));
        o.require(mean >= lo && mean <= hi, name + " reduction in [" + fmt(lo, 0) + ", " + fmt(hi, 0) + "]%");
        o.require(ordered == 10, name + " ordering on every seed");
        o.detail << ' ' << name << ": TS-Mono->RS-Micro " << fmt(mean) << "%, ordering holds on " << ordered << "/10;";
    }
    o.detail << " budget " << secs << " s per solve";
    return o;
}

Outcome criterion8()
{
    Outcome o;
    const std::string cmd = std::string("\"") + CDC_TESTS_BIN + "\" --gtest_brief=1 > \"" +
                            (std::filesystem::temp_directory_path() / "cdc_acceptance_props.txt").string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "unit and property suite passes");
    o.detail << " unit and property suite exit status " << rc;
    return o;
}

/// Whether a pod-scale placement can be rebuilt inside the racks of `racks` on components of the
/// same classes and loads, keeping every served workload's CPU and memory in one rack.
bool replicable_in_racks(const Problem& pod, const Placement& p, const DcLayout& racks)
{
    // groups of components linked through served workloads must land in one rack together
    const int nc = pod.layout.num_cpus();
    std::vector<int> parent(static_cast<std::size_t>(nc + pod.layout.num_mems()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& u : p.pairs) parent[static_cast<std::size_t>(find(u.cpu))] = find(nc + u.mem);

    // per group: how many components of each (kind, class) it needs
    const auto ncls = pod.layout.cpu_classes().size() + pod.layout.mem_classes().size();
    std::map<int, std::vector<int>> need;
    auto add = [&](int node, std::size_t slot) {
        auto& v = need[find(node)];
        v.resize(ncls);
        ++v[slot];
    };
    for (int c = 0; c < nc; ++c)
        if (p.cpu_hosted[static_cast<std::size_t>(c)]) add(c, static_cast<std::size_t>(pod.layout.cpu(c).class_index));
    for (int m = 0; m < pod.layout.num_mems(); ++m)
        if (p.mem_hosted[static_cast<std::size_t>(m)])
            add(nc + m, pod.layout.cpu_classes().size() + static_cast<std::size_t>(pod.layout.mem(m).class_index));

    std::vector<std::vector<int>> free(static_cast<std::size_t>(racks.num_racks()), std::vector<int>(ncls, 0));
    for (int c = 0; c < racks.num_cpus(); ++c)
        ++free[static_cast<std::size_t>(racks.rack_of(ResourceKind::Cpu, c))][static_cast<std::size_t>(racks.cpu(c).class_index)];
    for (int m = 0; m < racks.num_mems(); ++m)
        ++free[static_cast<std::size_t>(racks.rack_of(ResourceKind::Memory, m))]
              [racks.cpu_classes().size() + static_cast<std::size_t>(racks.mem(m).class_index)];

    std::vector<std::vector<int>> groups;
    for (auto& [k, v] : need) groups.push_back(v);
    std::function<bool(std::size_t)> place = [&](std::size_t g) {
        if (g == groups.size()) return true;
        for (auto& rack : free) {
            bool fits = true;
            for (std::size_t i = 0; i < ncls; ++i) fits = fits && rack[i] >= groups[g][i];
            if (!fits) continue;
            for (std::size_t i = 0; i < ncls; ++i) rack[i] -= groups[g][i];
            if (place(g + 1)) return true;
            for (std::size_t i = 0; i < ncls; ++i) rack[i] += groups[g][i];
        }
        return false;
    };
    return place(0);
}

Outcome criterion9()
{
    Outcome o;
    // first seed whose pod-scale optimum fits rack-locally with equal active racks
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto rack = paper_problem(DcKind::RackScale, FabricKind::Optical, WorkloadClass::CpuIntensive, 10, seed);
        const auto pod = paper_problem(DcKind::PodScale, FabricKind::Optical, WorkloadClass::CpuIntensive, 10, seed);
        const auto p = exact(pod, 600.0);
        if (!p.proven_optimal || !replicable_in_racks(pod, p.placement, rack.layout)) continue;
        const auto r = exact(rack, 600.0);
        if (r.report.nar != p.report.nar) continue;
        o.require(r.proven_optimal, "rack-scale optimum proven");
        o.require(std::abs(r.report.tcpc - p.report.tcpc) <= equal_tol, "TCPC equal");
        o.require(std::abs(r.report.tmpc - p.report.tmpc) <= equal_tol, "TMPC equal");
        o.require(std::abs(r.report.tnpc - p.report.tnpc) <= equal_tol, "TNPC equal within 1e-6");
        o.detail << " seed " << seed << ", 10 cpu-intensive, optical, NAR " << r.report.nar << ": rack-scale TCPC "
                 << fmt(r.report.tcpc, 6) << " TMPC " << fmt(r.report.tmpc, 6) << " TNPC " << fmt(r.report.tnpc, 6)
                 << "; pod-scale TCPC " << fmt(p.report.tcpc, 6) << " TMPC " << fmt(p.report.tmpc, 6) << " TNPC "
                 << fmt(p.report.tnpc, 6);
        return o;
    }
    o.require(false, "a seed in 1..20 meeting the rack diversity condition");
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    using Fn = Outcome (*)();
    const Fn all[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                      criterion6, criterion7, criterion8, criterion9};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 9; ++i) which.push_back(i);

    int failed = 0;
    for (int id : which) {
        if (id < 1 || id > 9) {
            std::cerr << "unknown criterion " << id << '\n';
            return 2;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[id - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " error: " << e.what();
        }
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt(detail::seconds_since(t0), 1)
                  << " s)" << o.detail.str() << std::endl;
    }
    std::cout << (which.size() - static_cast<std::size_t>(failed)) << "/" << which.size() << " criteria passed"
              << std::endl;
    return 0;
}
