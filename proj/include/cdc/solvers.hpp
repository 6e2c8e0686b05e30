#pragma once

/**
 * @file solvers.hpp
 * @brief Exact depth-first branch-and-bound and an exhaustive enumeration oracle.
 */

#include "cdc/heep.hpp"
#include "cdc/objective.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <optional>
#include <vector>

namespace cdc {

struct SolveBudget
{
    std::uint64_t max_nodes = 500'000'000;
    double max_seconds = 600.0;

    friend bool operator==(const SolveBudget&, const SolveBudget&) = default;
};

struct SolveOptions
{
    SolveBudget budget;
    bool heep_warm_start = true;
    std::optional<Placement> warm_start; ///< used when feasible and better than the HEEP start
};

struct SolveResult
{
    Placement placement;
    PowerReport report;
    double objective = 0.0;
    bool proven_optimal = false;
    std::uint64_t nodes_explored = 0;
    double wall_time = 0.0; ///< seconds
    double root_bound = 0.0;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Candidate (cpu, mem) pairs satisfying the latency bound of workload w.
inline std::vector<std::pair<int, int>> latency_pairs(const DcLayout& lay, DcKind kind, const Workload& w)
{
    const int bound = std::min(to_int(max_latency_for(kind)), to_int(w.max_lat));
    std::vector<std::pair<int, int>> out;
    for (int c = 0; c < lay.num_cpus(); ++c)
        for (int m = 0; m < lay.num_mems(); ++m)
            if (to_int(latency_class(lay, c, m)) <= bound) out.emplace_back(c, m);
    return out;
}

/// Best subset gains by total size: size ascending, gain strictly increasing, starting at (0, 0).
struct GainFrontier
{
    std::vector<double> size, gain;

    /// Largest gain of a subset that fits in r.
    double at(double r) const
    {
        const auto it = std::upper_bound(size.begin(), size.end(), r + 1e-9);
        return gain[static_cast<std::size_t>(it - size.begin()) - 1];
    }
};

/**
 * Exact 0/1 knapsack frontier over items with the given sizes and gains, capped at `cap`.
 * With `pick`, also returns the items of the best subset within cap.
 */
inline GainFrontier gain_frontier(const std::vector<double>& size, const std::vector<double>& gain, double cap,
                                  std::vector<int>* pick = nullptr)
{
    struct Pt
    {
        double s, g;
        int parent; ///< index in the previous stage
        bool taken;
    };
    std::vector<std::vector<Pt>> stages;
    std::vector<Pt> cur{{0.0, 0.0, -1, false}};
    std::vector<int> item_of_stage;
    std::vector<Pt> next;
    for (std::size_t i = 0; i < size.size(); ++i) {
        if (gain[i] <= 0 || size[i] > cap + 1e-9) continue;
        next.clear();
        std::size_t a = 0, b = 0;
        const double si = size[i], gi = gain[i];
        while (a < cur.size() || b < cur.size()) {
            Pt p;
            const bool take_b = a == cur.size() || (b < cur.size() && cur[b].s + si < cur[a].s);
            if (take_b) {
                p = {cur[b].s + si, cur[b].g + gi, static_cast<int>(b), true};
                ++b;
            } else {
                p = {cur[a].s, cur[a].g, static_cast<int>(a), false};
                ++a;
            }
            if (p.s > cap + 1e-9) {
                if (!take_b) continue;
                b = cur.size();
                continue;
            }
            if (!next.empty() && p.g <= next.back().g) continue;
            if (!next.empty() && p.s <= next.back().s) next.pop_back();
            next.push_back(p);
        }
        if (pick) {
            stages.push_back(cur);
            item_of_stage.push_back(static_cast<int>(i));
        }
        cur.swap(next);
    }
    GainFrontier f;
    for (const auto& p : cur) {
        f.size.push_back(p.s);
        f.gain.push_back(p.g);
    }
    if (pick) {
        pick->clear();
        int idx = static_cast<int>(cur.size()) - 1;
        const std::vector<Pt>* level = &cur;
        for (std::size_t st = stages.size(); st-- > 0;) {
            const Pt& p = (*level)[static_cast<std::size_t>(idx)];
            if (p.taken) pick->push_back(item_of_stage[st]);
            idx = p.parent;
            level = &stages[st];
        }
    }
    return f;
}

/**
 * Prices for the configuration relaxation of one resource kind: every component holds one
 * configuration (a subset of items fitting its capacity) at cost idle + pf * load. Column
 * generation over a small dense revised simplex; only the item prices are kept.
 */
class ConfigPricer
{
public:
    struct Cls
    {
        double cap, idle, pf;
        int count;
    };

    explicit ConfigPricer(std::vector<Cls> classes) : cls_(std::move(classes)) {}

    /// Any returned vector is a valid set of multipliers; past `deadline` pricing stops early
    /// (all zero when no master was solved yet).
    std::vector<double> prices(const std::vector<double>& size, double block_cost,
                               std::chrono::steady_clock::time_point deadline =
                                   std::chrono::steady_clock::time_point::max()) const;

private:
    std::vector<Cls> cls_;
};

inline std::vector<double> ConfigPricer::prices(const std::vector<double>& size, double block_cost,
                                                std::chrono::steady_clock::time_point deadline) const
{
    const int ni = static_cast<int>(size.size());
    const int nt = static_cast<int>(cls_.size());
    const int m = ni + nt;
    if (ni == 0) return {};

    struct Col
    {
        double cost;
        std::vector<int> items;
        int cls; ///< -1 single-item blocking column, -2 class slack
    };
    std::vector<Col> cols;
    for (int i = 0; i < ni; ++i) cols.push_back({block_cost, {i}, -1});
    for (int t = 0; t < nt; ++t) cols.push_back({0.0, {}, -2 - t});
    // seed with singletons priced like the start vector
    for (int t = 0; t < nt; ++t)
        for (int i = 0; i < ni; ++i)
            if (size[static_cast<std::size_t>(i)] <= cls_[static_cast<std::size_t>(t)].cap + 1e-9)
                cols.push_back({cls_[static_cast<std::size_t>(t)].idle + cls_[static_cast<std::size_t>(t)].pf * size[static_cast<std::size_t>(i)], {i}, t});

    auto column = [&](const Col& c) {
        std::vector<double> a(static_cast<std::size_t>(m), 0.0);
        for (int i : c.items) a[static_cast<std::size_t>(i)] = 1.0;
        if (c.cls >= 0) a[static_cast<std::size_t>(ni + c.cls)] = 1.0;
        if (c.cls <= -2) a[static_cast<std::size_t>(ni + (-2 - c.cls))] = 1.0;
        return a;
    };

    std::vector<int> basis(static_cast<std::size_t>(m));
    std::vector<double> xb(static_cast<std::size_t>(m));
    std::vector<double> binv(static_cast<std::size_t>(m * m), 0.0);
    for (int r = 0; r < m; ++r) {
        basis[static_cast<std::size_t>(r)] = r;
        binv[static_cast<std::size_t>(r * m + r)] = 1.0;
        xb[static_cast<std::size_t>(r)] = r < ni ? 1.0 : static_cast<double>(cls_[static_cast<std::size_t>(r - ni)].count);
    }
    std::vector<char> in_basis(cols.size(), 0);
    for (int r = 0; r < m; ++r) in_basis[static_cast<std::size_t>(r)] = 1;

    std::vector<double> y(static_cast<std::size_t>(m));
    auto duals = [&] {
        for (int r = 0; r < m; ++r) {
            double s = 0.0;
            for (int k = 0; k < m; ++k)
                s += cols[static_cast<std::size_t>(basis[static_cast<std::size_t>(k)])].cost * binv[static_cast<std::size_t>(k * m + r)];
            y[static_cast<std::size_t>(r)] = s;
        }
    };
    auto reduced = [&](const Col& c) {
        double rc = c.cost;
        for (int i : c.items) rc -= y[static_cast<std::size_t>(i)];
        if (c.cls >= 0) rc -= y[static_cast<std::size_t>(ni + c.cls)];
        if (c.cls <= -2) rc -= y[static_cast<std::size_t>(ni + (-2 - c.cls))];
        return rc;
    };

    int degenerate = 0;
    for (int outer = 0; outer < 400; ++outer) {
        if (std::chrono::steady_clock::now() > deadline) {
            if (outer == 0) return std::vector<double>(static_cast<std::size_t>(ni), 0.0);
            break;
        }
        // simplex over the current columns
        for (int it = 0; it < 2000; ++it) {
            duals();
            int enter = -1;
            double best = -1e-9;
            const bool bland = degenerate > 50;
            for (std::size_t j = 0; j < cols.size(); ++j) {
                if (in_basis[j]) continue;
                const double rc = reduced(cols[j]);
                if (rc < best) {
                    enter = static_cast<int>(j);
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter < 0) break;
            const auto a = column(cols[static_cast<std::size_t>(enter)]);
            std::vector<double> dir(static_cast<std::size_t>(m), 0.0);
            for (int r = 0; r < m; ++r) {
                double s = 0.0;
                for (int k = 0; k < m; ++k) s += binv[static_cast<std::size_t>(r * m + k)] * a[static_cast<std::size_t>(k)];
                dir[static_cast<std::size_t>(r)] = s;
            }
            int leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r)
                if (dir[static_cast<std::size_t>(r)] > 1e-11) {
                    const double q = xb[static_cast<std::size_t>(r)] / dir[static_cast<std::size_t>(r)];
                    if (q < ratio - 1e-12 ||
                        (q < ratio + 1e-12 && leave >= 0 && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
                        ratio = q;
                        leave = r;
                    }
                }
            if (leave < 0) break; // cannot happen with non-negative costs
            degenerate = ratio < 1e-12 ? degenerate + 1 : 0;
            const double piv = dir[static_cast<std::size_t>(leave)];
            for (int r = 0; r < m; ++r)
                if (r != leave) xb[static_cast<std::size_t>(r)] -= ratio * dir[static_cast<std::size_t>(r)];
            xb[static_cast<std::size_t>(leave)] = ratio;
            for (int k = 0; k < m; ++k) binv[static_cast<std::size_t>(leave * m + k)] /= piv;
            for (int r = 0; r < m; ++r) {
                if (r == leave || dir[static_cast<std::size_t>(r)] == 0.0) continue;
                const double f = dir[static_cast<std::size_t>(r)];
                for (int k = 0; k < m; ++k)
                    binv[static_cast<std::size_t>(r * m + k)] -= f * binv[static_cast<std::size_t>(leave * m + k)];
            }
            in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(leave)])] = 0;
            basis[static_cast<std::size_t>(leave)] = enter;
            in_basis[static_cast<std::size_t>(enter)] = 1;
        }
        duals();

        // pricing: most profitable configuration per class
        bool added = false;
        for (int t = 0; t < nt; ++t) {
            const auto& cl = cls_[static_cast<std::size_t>(t)];
            std::vector<double> val(static_cast<std::size_t>(ni));
            for (int i = 0; i < ni; ++i) val[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - cl.pf * size[static_cast<std::size_t>(i)];
            std::vector<int> pick;
            const auto best = gain_frontier(size, val, cl.cap, &pick);
            const double rc = cl.idle - best.gain.back() - y[static_cast<std::size_t>(ni + t)];
            if (rc > -1e-7 || pick.empty()) continue;
            double load = 0.0;
            for (int i : pick) load += size[static_cast<std::size_t>(i)];
            std::sort(pick.begin(), pick.end());
            cols.push_back({cl.idle + cl.pf * load, pick, t});
            in_basis.push_back(0);
            added = true;
        }
        if (!added) break;
    }
    duals();
    return std::vector<double>(y.begin(), y.begin() + ni);
}

/**
 * Depth-first search in two phases over a fixed workload order: first a CPU (or blocking) for
 * every workload, then a memory for every served one. Partial costs are exact except for the
 * cheapest CPU-memory traffic, which is charged with the CPU and corrected with the memory.
 */
class BranchAndBound
{
public:
    BranchAndBound(const Problem& pb, const SolveOptions& opt)
      : pb_(pb), lay_(pb.layout), opt_(opt), table_(compute_pair_energy_table(pb.layout, pb.fabric)),
        t0_(std::chrono::steady_clock::now())
    {
        prepare();
    }

    SolveResult run();

private:
    struct CpuOpt
    {
        int c;
        double base;   ///< power factor times demand plus the cheapest traffic from this cpu
        double netmin;
    };
    struct MemOpt
    {
        int m;
        double net;
    };
    struct Partner
    {
        int pos;
        double out, in; ///< Gb/s towards / from the earlier workload
    };
    struct Child
    {
        int id; ///< component, or -1 to block
        double inc;
        double lb = 0.0; ///< inc plus the bound below the child
    };
    /// Configuration prices for a set of remaining items, tuned to a number of usable racks.
    struct PriceSet
    {
        std::vector<double> price;      ///< by position; zero for items outside the set
        double price_sum = 0.0;
        std::vector<double> zfresh;     ///< per class: best configuration gain on an empty component
        std::vector<GainFrontier> kres; ///< per class: best gain within a residual
    };
    struct DepthData
    {
        double nnet_sum = 0.0;          ///< traffic floor of every remaining workload
        double demand[2] = {0.0, 0.0};  ///< remaining demand of workloads with candidates
        std::vector<PriceSet> ps[2];    ///< by number of racks holding the kind, minus one
    };
    /// Per node: components a kind can still use if r more racks are switched on.
    struct RackView
    {
        int active_racks = 0;                 ///< active racks holding the kind
        int inactive = 0;
        std::vector<int> empty_active;        ///< per class
        std::vector<std::vector<int>> added;  ///< per class, by r: upper bound on components gained
    };
    struct ClassInfo
    {
        double cap, idle, pf;
    };

    static constexpr double eps = 1e-9;
    static constexpr double inf = std::numeric_limits<double>::infinity();

    void prepare();
    void prepare_symmetry();
    void prepare_bounds();
    double static_power(int nar, int nap) const { return static_network_power(pb_.fabric, nar, nap); }
    void view(int kind, RackView& v) const;
    double config_bound(int kind, const PriceSet& ps, double price_sum, const RackView& v, int r) const;
    int racks_needed(int kind, double demand) const;
    int pods_needed(int new_racks) const;
    double bound_cpu(int d) const;
    double group_bound(std::size_t i) const;
    bool cpu_allowed(int c) const;
    bool mem_allowed(int m) const;
    double static_delta(int rack, int pod) const;
    double shuffle_cost(int k, int m) const;
    void place_cpu(int k, int c);
    void unplace_cpu(int k, int c);
    void place_mem(int k, int m);
    void unplace_mem(int k, int m);
    bool tick();
    void dfs_cpu(int d, double g);
    double domain_bound(int d) const;
    double domain_bound_memo(int d) const;
    struct KeyHash
    {
        std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept
        {
            std::uint64_t h = 0x9e3779b97f4a7c15ull;
            for (auto x : v) h = (h ^ x) * 0x100000001b3ull + (h >> 29);
            return static_cast<std::size_t>(h);
        }
    };
    mutable std::unordered_map<std::vector<std::uint64_t>, double, KeyHash> dom_memo_;
    mutable std::vector<std::uint64_t> dom_key_;
    static constexpr std::size_t dom_memo_limit = 4'000'000;
    double idle_cover(int kind, double deficit, const RackView& v, int r) const;
    void memory_phase(double g);
    bool solve_group(const std::vector<int>& items);
    void dfs_group(std::size_t i, double g);

    const Problem& pb_;
    const DcLayout& lay_;
    SolveOptions opt_;
    PairEnergyTable table_;

    int n_ = 0;
    std::vector<int> order_;
    std::vector<std::vector<CpuOpt>> cpu_opts_;
    std::vector<std::vector<std::vector<MemOpt>>> mem_opts_; ///< position x cpu
    std::vector<double> ns_, nnet_, wc_, wm_;
    std::vector<std::vector<Partner>> partners_;
    std::vector<int> group_;
    int ngroups_ = 0;

    std::vector<double> cidle_, midle_, ccap_, mcap_, cpf_, mpf_;
    std::vector<int> ccls_, mcls_, cnode_, mnode_, crack_, mrack_, cpod_, mpod_;
    std::vector<std::vector<int>> csame_, msame_, node_same_, rack_same_, pod_same_;
    std::vector<ClassInfo> cls_[2];
    std::vector<int> empty_cnt_[2];
    std::vector<int> racks_by_cap_[2];
    std::vector<double> rack_cap_[2];
    std::vector<std::vector<int>> rack_cls_cnt_[2]; ///< rack x class
    std::vector<std::vector<int>> racks_by_cls_[2]; ///< class -> racks by decreasing count
    int kind_racks_[2] = {0, 0};
    bool racks_homogeneous_ = false;
    int max_racks_per_pod_ = 1;
    double total_mem_cap_ = 0.0;

    std::vector<DepthData> depth_;
    std::vector<std::vector<double>> mprice0_suffix_; ///< level x position: full-set memory prices from a position on
    std::vector<double> wm_suffix_;
    mutable RackView rv_[2];
    mutable std::vector<double> dk_[2];

    // search state
    std::vector<double> cres_, mres_;
    std::vector<int> chost_, mhost_, node_cnt_, rack_cnt_, pod_cnt_;
    int nar_ = 0, nap_ = 0;
    std::vector<int> as_c_, as_m_;
    std::vector<int> gstate_;
    std::vector<std::vector<Child>> kids_cpu_, kids_mem_;
    std::vector<double> served_mprice_;   ///< phase one, by level: full-set memory prices of served workloads
    double served_wm_ = 0.0;

    struct MemoEntry
    {
        double cost;
        std::vector<int> mems;
    };
    std::vector<int> mem_equiv_; ///< cpus offering the same memory options with the same traffic costs
    std::map<std::vector<int>, MemoEntry> memo_;
    std::vector<int> dom_of_cpu_;
    std::vector<std::vector<std::pair<double, double>>> dom_cover_; ///< per domain: (capacity, idle) of memory subsets
    std::vector<double> dom_demand_;
    std::vector<std::uint64_t> dom_mask_;        ///< served workloads (by position) whose CPU is in the domain
    std::vector<std::vector<int>> dom_cls_cnt_;  ///< memories per class in the domain
    std::vector<std::unordered_map<std::uint64_t, double>> pack_memo_;
    static constexpr int pack_max_items = 12;
    double domain_packing(std::size_t x) const;
    double mem_pfmin_ = 0.0, cpu_pfmin_ = 0.0;
    mutable std::vector<std::pair<double, double>> dom_f_[4], dom_nx_[4];
    std::vector<double> dom_cpu_free_;
    std::vector<int> big_mem_, big_cpu_; ///< undecided workload with the largest memory / cpu demand
    std::vector<double> wc_min_suffix_;
    std::vector<int> grp_items_, grp_mems_, grp_cur_m_, grp_best_m_;
    std::vector<double> grp_rest_;
    double grp_best_ = 0.0, grp_pfmin_ = 0.0;

    double best_ = std::numeric_limits<double>::infinity();
    std::vector<int> best_c_, best_m_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::chrono::steady_clock::time_point t0_;
};

inline void BranchAndBound::prepare()
{
    pb_.workloads.validate();
    const auto& ws = pb_.wl();
    n_ = static_cast<int>(ws.size());

    double maxc = 0.0, maxm = 0.0;
    for (const auto& c : lay_.cpu_classes()) maxc = std::max(maxc, c.capacity);
    for (const auto& c : lay_.mem_classes()) maxm = std::max(maxm, c.capacity);
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
        const auto& x = ws[static_cast<std::size_t>(a)];
        const auto& y = ws[static_cast<std::size_t>(b)];
        return std::max(x.wc / maxc, x.wm / maxm) > std::max(y.wc / maxc, y.wm / maxm);
    });
    std::vector<int> pos(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) pos[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])] = k;

    const int nc = lay_.num_cpus(), nm = lay_.num_mems();
    for (int c = 0; c < nc; ++c) {
        const auto& cl = lay_.cpu_class(c);
        ccls_.push_back(lay_.cpu(c).class_index);
        cidle_.push_back(cl.idle_power());
        ccap_.push_back(cl.capacity);
        cpf_.push_back(cl.power_factor());
        cnode_.push_back(lay_.node_of(ResourceKind::Cpu, c));
        crack_.push_back(lay_.rack_of(ResourceKind::Cpu, c));
        cpod_.push_back(lay_.pod_of(ResourceKind::Cpu, c));
    }
    for (int m = 0; m < nm; ++m) {
        const auto& cl = lay_.mem_class(m);
        mcls_.push_back(lay_.mem(m).class_index);
        midle_.push_back(cl.idle_power());
        mcap_.push_back(cl.capacity);
        mpf_.push_back(cl.power_factor());
        mnode_.push_back(lay_.node_of(ResourceKind::Memory, m));
        mrack_.push_back(lay_.rack_of(ResourceKind::Memory, m));
        mpod_.push_back(lay_.pod_of(ResourceKind::Memory, m));
        total_mem_cap_ += cl.capacity;
    }

    const auto un = static_cast<std::size_t>(n_);
    cpu_opts_.resize(un);
    mem_opts_.assign(un, std::vector<std::vector<MemOpt>>(static_cast<std::size_t>(nc)));
    ns_.resize(un);
    nnet_.resize(un);
    wc_.resize(un);
    wm_.resize(un);
    partners_.resize(un);
    group_.assign(un, -1);
    for (int k = 0; k < n_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const auto& w = ws[static_cast<std::size_t>(order_[uk])];
        wc_[uk] = w.wc;
        wm_[uk] = w.wm;
        ns_[uk] = table_.north_south() * (w.tci_up + w.tci_down + w.tri_up + w.tri_down) * gbps_pj_to_watt;
        for (auto [c, m] : latency_pairs(lay_, pb_.dc_kind, w)) {
            if (ccap_[static_cast<std::size_t>(c)] + eps < w.wc || mcap_[static_cast<std::size_t>(m)] + eps < w.wm) continue;
            const double net = (table_.uplink(c, m) * w.tcm_up + table_.downlink(m, c) * w.tcm_down) * gbps_pj_to_watt;
            mem_opts_[uk][static_cast<std::size_t>(c)].push_back({m, net});
        }
        double best = inf;
        for (int c = 0; c < nc; ++c) {
            const auto& mo = mem_opts_[uk][static_cast<std::size_t>(c)];
            if (mo.empty()) continue;
            double mn = inf;
            for (const auto& o : mo) mn = std::min(mn, o.net);
            cpu_opts_[uk].push_back({c, cpf_[static_cast<std::size_t>(c)] * w.wc + mn, mn});
            best = std::min(best, mn);
        }
        // a workload without any candidate pair is always blocked
        nnet_[uk] = cpu_opts_[uk].empty() ? pb_.params.alpha : best + ns_[uk];
    }
    {
        std::vector<std::vector<double>> sigs;
        for (int c = 0; c < nc; ++c) {
            std::vector<double> sig;
            for (int k = 0; k < n_; ++k) {
                const auto uk = static_cast<std::size_t>(k);
                double mn = 0.0;
                for (const auto& o : cpu_opts_[uk])
                    if (o.c == c) mn = o.netmin;
                for (const auto& o : mem_opts_[uk][static_cast<std::size_t>(c)]) {
                    sig.push_back(o.m);
                    sig.push_back(o.net - mn);
                }
                sig.push_back(-1.0);
            }
            auto it = std::find(sigs.begin(), sigs.end(), sig);
            mem_equiv_.push_back(static_cast<int>(it - sigs.begin()));
            if (it == sigs.end()) sigs.push_back(std::move(sig));
        }
    }
    // shuffle partners decided earlier in the order
    std::vector<std::vector<std::pair<int, std::pair<double, double>>>> tmp(un);
    for (const auto& [key, g] : pb_.shuffle().entries()) {
        const int ps = pos[static_cast<std::size_t>(key.first)], pd = pos[static_cast<std::size_t>(key.second)];
        if (ps > pd) tmp[static_cast<std::size_t>(ps)].push_back({pd, {g, 0.0}});
        else tmp[static_cast<std::size_t>(pd)].push_back({ps, {0.0, g}});
    }
    for (int k = 0; k < n_; ++k) {
        auto& t = tmp[static_cast<std::size_t>(k)];
        std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [p, io] : t) {
            auto& pv = partners_[static_cast<std::size_t>(k)];
            if (!pv.empty() && pv.back().pos == p) {
                pv.back().out += io.first;
                pv.back().in += io.second;
            } else {
                pv.push_back({p, io.first, io.second});
            }
        }
    }
    for (const auto& iw : pb_.workloads.integrated) {
        for (int m : iw.members) group_[static_cast<std::size_t>(pos[static_cast<std::size_t>(m)])] = ngroups_;
        ++ngroups_;
    }

    prepare_symmetry();
    prepare_bounds();
}

inline void BranchAndBound::prepare_symmetry()
{
    const int nc = lay_.num_cpus(), nm = lay_.num_mems();
    csame_.assign(static_cast<std::size_t>(nc), {});
    msame_.assign(static_cast<std::size_t>(nm), {});
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < a; ++b)
            if (cnode_[static_cast<std::size_t>(a)] == cnode_[static_cast<std::size_t>(b)] &&
                lay_.cpu(a).class_index == lay_.cpu(b).class_index)
                csame_[static_cast<std::size_t>(a)].push_back(b);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < a; ++b)
            if (mnode_[static_cast<std::size_t>(a)] == mnode_[static_cast<std::size_t>(b)] &&
                lay_.mem(a).class_index == lay_.mem(b).class_index)
                msame_[static_cast<std::size_t>(a)].push_back(b);

    // structural signatures: nodes by class multiset, racks by node signatures, pods by rack signatures
    auto intern = [](std::vector<std::vector<int>>& keys, std::vector<int> key) {
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == key) return static_cast<int>(i);
        keys.push_back(std::move(key));
        return static_cast<int>(keys.size()) - 1;
    };
    std::vector<std::vector<int>> nkeys, rkeys, pkeys;
    std::vector<int> nsig, rsig, psig;
    for (const auto& nd : lay_.nodes()) {
        std::vector<int> key;
        for (int c : nd.cpus) key.push_back(lay_.cpu(c).class_index);
        key.push_back(-1);
        for (int m : nd.mems) key.push_back(lay_.mem(m).class_index);
        std::sort(key.begin(), key.begin() + static_cast<long>(nd.cpus.size()));
        std::sort(key.begin() + static_cast<long>(nd.cpus.size()) + 1, key.end());
        nsig.push_back(intern(nkeys, key));
    }
    for (const auto& r : lay_.racks()) {
        std::vector<int> key;
        for (int nd : r.nodes) key.push_back(nsig[static_cast<std::size_t>(nd)]);
        std::sort(key.begin(), key.end());
        rsig.push_back(intern(rkeys, key));
    }
    for (const auto& p : lay_.pods()) {
        std::vector<int> key;
        for (int r : p.racks) key.push_back(rsig[static_cast<std::size_t>(r)]);
        std::sort(key.begin(), key.end());
        psig.push_back(intern(pkeys, key));
    }
    node_same_.assign(nsig.size(), {});
    for (int a = 0; a < lay_.num_nodes(); ++a)
        for (int b = 0; b < a; ++b)
            if (nsig[static_cast<std::size_t>(a)] == nsig[static_cast<std::size_t>(b)] &&
                lay_.rack_of_node(a) == lay_.rack_of_node(b))
                node_same_[static_cast<std::size_t>(a)].push_back(b);
    rack_same_.assign(rsig.size(), {});
    for (int a = 0; a < lay_.num_racks(); ++a)
        for (int b = 0; b < a; ++b)
            if (rsig[static_cast<std::size_t>(a)] == rsig[static_cast<std::size_t>(b)] &&
                lay_.pod_of_rack(a) == lay_.pod_of_rack(b))
                rack_same_[static_cast<std::size_t>(a)].push_back(b);
    pod_same_.assign(psig.size(), {});
    for (int a = 0; a < lay_.num_pods(); ++a)
        for (int b = 0; b < a; ++b)
            if (psig[static_cast<std::size_t>(a)] == psig[static_cast<std::size_t>(b)])
                pod_same_[static_cast<std::size_t>(a)].push_back(b);
}

inline void BranchAndBound::prepare_bounds()
{
    const int nr = lay_.num_racks();
    for (int kind = 0; kind < 2; ++kind) rack_cap_[kind].assign(static_cast<std::size_t>(nr), 0.0);
    for (int c = 0; c < lay_.num_cpus(); ++c)
        rack_cap_[0][static_cast<std::size_t>(crack_[static_cast<std::size_t>(c)])] += ccap_[static_cast<std::size_t>(c)];
    for (int m = 0; m < lay_.num_mems(); ++m)
        rack_cap_[1][static_cast<std::size_t>(mrack_[static_cast<std::size_t>(m)])] += mcap_[static_cast<std::size_t>(m)];
    racks_homogeneous_ = true;
    for (int r = 0; r < nr; ++r)
        if (rack_cap_[0][static_cast<std::size_t>(r)] > 0 && rack_cap_[1][static_cast<std::size_t>(r)] > 0)
            racks_homogeneous_ = false;
    for (int kind = 0; kind < 2; ++kind) {
        auto& o = racks_by_cap_[kind];
        o.resize(static_cast<std::size_t>(nr));
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
            return rack_cap_[kind][static_cast<std::size_t>(a)] > rack_cap_[kind][static_cast<std::size_t>(b)];
        });
    }
    for (const auto& p : lay_.pods()) max_racks_per_pod_ = std::max(max_racks_per_pod_, static_cast<int>(p.racks.size()));

    for (int kind = 0; kind < 2; ++kind) {
        const auto rk = kind == 0 ? ResourceKind::Cpu : ResourceKind::Memory;
        for (const auto& c : lay_.classes(rk)) cls_[kind].push_back({c.capacity, c.idle_power(), c.power_factor()});
        const std::size_t nt = cls_[kind].size();
        empty_cnt_[kind].assign(nt, 0);
        rack_cls_cnt_[kind].assign(static_cast<std::size_t>(nr), std::vector<int>(nt, 0));
        for (int j = 0; j < lay_.num_components(rk); ++j) {
            const auto t = static_cast<std::size_t>(lay_.component(rk, j).class_index);
            ++empty_cnt_[kind][t];
            ++rack_cls_cnt_[kind][static_cast<std::size_t>(lay_.rack_of(rk, j))][t];
        }
        racks_by_cls_[kind].assign(nt, {});
        for (std::size_t t = 0; t < nt; ++t) {
            auto& o = racks_by_cls_[kind][t];
            o.resize(static_cast<std::size_t>(nr));
            std::iota(o.begin(), o.end(), 0);
            std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
                return rack_cls_cnt_[kind][static_cast<std::size_t>(a)][t] > rack_cls_cnt_[kind][static_cast<std::size_t>(b)][t];
            });
        }
        for (int r = 0; r < nr; ++r) kind_racks_[kind] += rack_cap_[kind][static_cast<std::size_t>(r)] > 0;
        rv_[kind].empty_active.assign(nt, 0);
        rv_[kind].added.assign(nt, std::vector<int>(static_cast<std::size_t>(nr) + 1, 0));
        dk_[kind].assign(static_cast<std::size_t>(nr) + 1, 0.0);
    }

    // prices per depth and per number of usable racks, with the counts of the best racks
    const auto pricing_deadline =
        t0_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(0.5 * std::min(opt_.budget.max_seconds, 1e6)));
    const auto un = static_cast<std::size_t>(n_);
    depth_.assign(un + 1, {});
    for (int d = 0; d <= n_; ++d) {
        auto& dd = depth_[static_cast<std::size_t>(d)];
        std::vector<int> items;
        for (int k = d; k < n_; ++k) {
            dd.nnet_sum += nnet_[static_cast<std::size_t>(k)];
            if (!cpu_opts_[static_cast<std::size_t>(k)].empty()) items.push_back(k);
        }
        for (int kind = 0; kind < 2; ++kind) {
            const auto& size = kind == 0 ? wc_ : wm_;
            std::vector<double> s;
            for (int k : items) s.push_back(size[static_cast<std::size_t>(k)]);
            for (double x : s) dd.demand[kind] += x;
            for (int level = 1; level <= std::max(1, kind_racks_[kind]); ++level) {
                std::vector<ConfigPricer::Cls> pcls;
                for (std::size_t t = 0; t < cls_[kind].size(); ++t) {
                    int cnt = 0;
                    for (int i = 0; i < level; ++i)
                        cnt += rack_cls_cnt_[kind][static_cast<std::size_t>(racks_by_cls_[kind][t][static_cast<std::size_t>(i)])][t];
                    pcls.push_back({cls_[kind][t].cap, cls_[kind][t].idle, cls_[kind][t].pf, cnt});
                }
                const auto y = ConfigPricer(pcls).prices(s, pb_.params.alpha, pricing_deadline);
                PriceSet ps;
                ps.price.assign(un, 0.0);
                for (std::size_t i = 0; i < items.size(); ++i) {
                    ps.price[static_cast<std::size_t>(items[i])] = y[i];
                    ps.price_sum += y[i];
                }
                for (const auto& cl : pcls) {
                    std::vector<double> gain(s.size());
                    for (std::size_t i = 0; i < s.size(); ++i) gain[i] = y[i] - cl.pf * s[i];
                    auto f = gain_frontier(s, gain, cl.cap);
                    ps.zfresh.push_back(std::max(0.0, f.gain.back() - cl.idle));
                    ps.kres.push_back(std::move(f));
                }
                dd.ps[kind].push_back(std::move(ps));
            }
        }
    }
    const auto& mps = depth_[0].ps[1];
    mprice0_suffix_.assign(mps.size(), std::vector<double>(un + 1, 0.0));
    served_mprice_.assign(mps.size(), 0.0);
    wm_suffix_.assign(un + 1, 0.0);
    big_mem_.assign(un + 1, -1);
    big_cpu_.assign(un + 1, -1);
    wc_min_suffix_.assign(un + 1, inf);
    for (int k = n_ - 1; k >= 0; --k) {
        const auto uk = static_cast<std::size_t>(k);
        for (std::size_t l = 0; l < mps.size(); ++l) mprice0_suffix_[l][uk] = mprice0_suffix_[l][uk + 1] + mps[l].price[uk];
        wm_suffix_[uk] = wm_suffix_[uk + 1] + (cpu_opts_[uk].empty() ? 0.0 : wm_[uk]);
        big_mem_[uk] = big_mem_[uk + 1];
        big_cpu_[uk] = big_cpu_[uk + 1];
        wc_min_suffix_[uk] = wc_min_suffix_[uk + 1];
        if (cpu_opts_[uk].empty()) continue;
        if (big_mem_[uk] < 0 || wm_[uk] > wm_[static_cast<std::size_t>(big_mem_[uk])]) big_mem_[uk] = k;
        if (big_cpu_[uk] < 0 || wc_[uk] > wc_[static_cast<std::size_t>(big_cpu_[uk])]) big_cpu_[uk] = k;
        wc_min_suffix_[uk] = std::min(wc_min_suffix_[uk], wc_[uk]);
    }

    // locality domains at the widest latency any workload accepts
    int level = to_int(LatencyClass::SameNode);
    for (const auto& w : pb_.wl()) level = std::max(level, std::min(to_int(max_latency_for(pb_.dc_kind)), to_int(w.max_lat)));
    auto domain = [&](int node, int rack, int pod) {
        switch (latency_from_int(level)) {
        case LatencyClass::SameNode: return node;
        case LatencyClass::SameRack: return rack;
        case LatencyClass::SamePod: return pod;
        case LatencyClass::SameDc: return 0;
        }
        return 0;
    };
    const int ndom = level == to_int(LatencyClass::SameNode) ? lay_.num_nodes()
                     : level == to_int(LatencyClass::SameRack) ? lay_.num_racks()
                     : level == to_int(LatencyClass::SamePod) ? lay_.num_pods() : 1;
    for (std::size_t c = 0; c < ccap_.size(); ++c) dom_of_cpu_.push_back(domain(cnode_[c], crack_[c], cpod_[c]));
    std::vector<std::vector<int>> cnt(static_cast<std::size_t>(ndom), std::vector<int>(cls_[1].size(), 0));
    for (std::size_t m = 0; m < mcap_.size(); ++m)
        ++cnt[static_cast<std::size_t>(domain(mnode_[m], mrack_[m], mpod_[m]))][static_cast<std::size_t>(mcls_[m])];
    mem_pfmin_ = inf;
    for (const auto& c : cls_[1]) mem_pfmin_ = std::min(mem_pfmin_, c.pf);
    cpu_pfmin_ = inf;
    for (const auto& c : cls_[0]) cpu_pfmin_ = std::min(cpu_pfmin_, c.pf);
    dom_cover_.assign(static_cast<std::size_t>(ndom), {});
    dom_demand_.assign(static_cast<std::size_t>(ndom), 0.0);
    dom_mask_.assign(static_cast<std::size_t>(ndom), 0);
    dom_cpu_free_.assign(static_cast<std::size_t>(ndom), 0.0);
    for (std::size_t c = 0; c < ccap_.size(); ++c) dom_cpu_free_[static_cast<std::size_t>(dom_of_cpu_[c])] += ccap_[c];
    dom_cls_cnt_ = cnt;
    pack_memo_.assign(static_cast<std::size_t>(ndom), {});
    for (int x = 0; x < ndom; ++x) {
        // every count vector, then the cheapest idle power per capacity
        std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
        for (std::size_t t = 0; t < cls_[1].size(); ++t) {
            std::vector<std::pair<double, double>> nx;
            for (const auto& p : pts)
                for (int k = 0; k <= cnt[static_cast<std::size_t>(x)][t]; ++k)
                    nx.push_back({p.first + k * cls_[1][t].cap, p.second + k * cls_[1][t].idle});
            pts.swap(nx);
        }
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        });
        auto& cover = dom_cover_[static_cast<std::size_t>(x)];
        for (const auto& p : pts)
            if (p.first > 0 && (cover.empty() || p.second < cover.back().second - 1e-12)) cover.push_back(p);
    }
}

inline void BranchAndBound::view(int kind, RackView& v) const
{
    const auto& host = kind == 0 ? chost_ : mhost_;
    const auto& cls = kind == 0 ? ccls_ : mcls_;
    const auto& rack = kind == 0 ? crack_ : mrack_;
    std::fill(v.empty_active.begin(), v.empty_active.end(), 0);
    for (std::size_t j = 0; j < host.size(); ++j)
        if (host[j] == 0 && rack_cnt_[static_cast<std::size_t>(rack[j])] > 0) ++v.empty_active[static_cast<std::size_t>(cls[j])];
    v.active_racks = 0;
    for (int r = 0; r < lay_.num_racks(); ++r)
        v.active_racks += rack_cnt_[static_cast<std::size_t>(r)] > 0 && rack_cap_[kind][static_cast<std::size_t>(r)] > 0;
    v.inactive = kind_racks_[kind] - v.active_racks;
    for (std::size_t t = 0; t < cls_[kind].size(); ++t) {
        auto& add = v.added[t];
        int i = 0;
        for (int r : racks_by_cls_[kind][t]) {
            if (rack_cnt_[static_cast<std::size_t>(r)] > 0 || rack_cap_[kind][static_cast<std::size_t>(r)] <= 0) continue;
            add[static_cast<std::size_t>(i + 1)] = add[static_cast<std::size_t>(i)] + rack_cls_cnt_[kind][static_cast<std::size_t>(r)][t];
            ++i;
        }
    }
}

/**
 * Configuration bound for one kind when r more racks holding it are switched on: price_sum over
 * the remaining items, less the best gain any usable empty or partly used component could make.
 */
inline double BranchAndBound::config_bound(int kind, const PriceSet& ps, double price_sum, const RackView& v, int r) const
{
    double total = price_sum;
    for (std::size_t t = 0; t < cls_[kind].size(); ++t)
        total -= static_cast<double>(v.empty_active[t] + v.added[t][static_cast<std::size_t>(r)]) * ps.zfresh[t];
    const auto& host = kind == 0 ? chost_ : mhost_;
    const auto& res = kind == 0 ? cres_ : mres_;
    const auto& cls = kind == 0 ? ccls_ : mcls_;
    for (std::size_t j = 0; j < host.size(); ++j)
        if (host[j] > 0) total -= ps.kres[static_cast<std::size_t>(cls[j])].at(res[j]);
    return total;
}

/// Least idle power of empty components, usable with r more racks, whose capacity covers the deficit.
inline double BranchAndBound::idle_cover(int kind, double deficit, const RackView& v, int r) const
{
    if (deficit <= eps) return 0.0;
    const auto& cl = cls_[kind];
    double best = inf;
    auto rec = [&](auto&& self, std::size_t t, double left, double idle) -> void {
        if (idle >= best) return;
        if (left <= eps) {
            best = idle;
            return;
        }
        if (t == cl.size()) return;
        const int n = v.empty_active[t] + v.added[t][static_cast<std::size_t>(r)];
        for (int k = 0; k <= n; ++k) {
            self(self, t + 1, left - k * cl[t].cap, idle + k * cl[t].idle);
            if (left - k * cl[t].cap <= eps) break;
        }
    };
    rec(rec, 0, deficit, 0.0);
    return best;
}

/// Fewest inactive racks holding `kind` that must be switched on for the demand to fit.
inline int BranchAndBound::racks_needed(int kind, double demand) const
{
    double deficit = demand - eps;
    for (std::size_t j = 0; j < (kind == 0 ? cres_ : mres_).size(); ++j) {
        const int r = kind == 0 ? crack_[j] : mrack_[j];
        if (rack_cnt_[static_cast<std::size_t>(r)] > 0) deficit -= kind == 0 ? cres_[j] : mres_[j];
    }
    int k = 0;
    for (int r : racks_by_cap_[kind]) {
        if (deficit <= 0) break;
        if (rack_cnt_[static_cast<std::size_t>(r)] > 0 || rack_cap_[kind][static_cast<std::size_t>(r)] <= 0) continue;
        deficit -= rack_cap_[kind][static_cast<std::size_t>(r)];
        ++k;
    }
    return deficit > 0 ? -1 : k;
}

/// Fewest new pods that can hold this many new racks.
inline int BranchAndBound::pods_needed(int new_racks) const
{
    int in_active_pods = 0;
    for (int p = 0; p < lay_.num_pods(); ++p)
        if (pod_cnt_[static_cast<std::size_t>(p)] > 0)
            for (int r : lay_.pods()[static_cast<std::size_t>(p)].racks)
                in_active_pods += rack_cnt_[static_cast<std::size_t>(r)] == 0;
    int kp = new_racks > in_active_pods ? (new_racks - in_active_pods + max_racks_per_pod_ - 1) / max_racks_per_pod_ : 0;
    if (nap_ == 0 && new_racks > 0) kp = std::max(kp, 1);
    return kp;
}

/**
 * Admissible bound on the cost still to come while CPUs are chosen for order_[d..]. Either every
 * remaining workload is served, and then the cheapest number of extra racks is charged together
 * with the per-kind bounds that many racks allow, or some are blocked at their blocking gap.
 */
inline double BranchAndBound::bound_cpu(int d) const
{
    const auto ud = static_cast<std::size_t>(d);
    const auto& dd = depth_[ud];
    const double mem_demand = served_wm_ + wm_suffix_[ud];
    const double alpha = pb_.params.alpha;
    view(0, rv_[0]);
    view(1, rv_[1]);

    auto level = [&](int kind, int r) {
        const int l = std::clamp(rv_[kind].active_racks + r, 1, static_cast<int>(dd.ps[kind].size()));
        return static_cast<std::size_t>(l - 1);
    };
    // remaining demand at the cheapest power factor plus the components it forces on
    double open_res = 0.0;
    for (std::size_t j = 0; j < cres_.size(); ++j)
        if (chost_[j] > 0) open_res += cres_[j];
    auto cpu_part = [&](int r) {
        const auto& ps = dd.ps[0][level(0, r)];
        const double plain = cpu_pfmin_ * dd.demand[0] + idle_cover(0, dd.demand[0] - open_res, rv_[0], r);
        return std::max(plain, config_bound(0, ps, ps.price_sum, rv_[0], r));
    };
    auto mem_part = [&](int r) {
        const auto l = level(1, r);
        return config_bound(1, depth_[0].ps[1][l], served_mprice_[l] + mprice0_suffix_[l][ud], rv_[1], r);
    };

    // some remaining workload blocked: every rack usable, no static term
    double blocked = inf;
    {
        const int rc = rv_[0].inactive, rm = rv_[1].inactive;
        const auto& pc = dd.ps[0][level(0, rc)];
        const auto& pm = depth_[0].ps[1][level(1, rm)];
        double neg = 0.0, mingap = inf;
        bool any = false, anyneg = false;
        for (int k = d; k < n_; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            if (cpu_opts_[uk].empty()) continue;
            any = true;
            const double gap = alpha - (nnet_[uk] + pc.price[uk] + pm.price[uk]);
            if (gap < 0) {
                neg += gap;
                anyneg = true;
            }
            mingap = std::min(mingap, gap);
        }
        if (any) blocked = cpu_part(rc) + mem_part(rm) + (anyneg ? neg : mingap);
    }

    // everything served
    double served = inf;
    double packed = mem_pfmin_ * wm_suffix_[ud];
    for (std::size_t x = 0; x < dom_mask_.size(); ++x) packed += domain_packing(x);
    const double mfloor = std::max(packed, domain_bound_memo(d));
    const int kc = racks_needed(0, dd.demand[0]), km = racks_needed(1, mem_demand);
    if (kc >= 0 && km >= 0) {
        for (int r = kc; r <= rv_[0].inactive; ++r) dk_[0][static_cast<std::size_t>(r)] = cpu_part(r);
        for (int r = km; r <= rv_[1].inactive; ++r) dk_[1][static_cast<std::size_t>(r)] = std::max(mfloor, mem_part(r));
        const bool need = nar_ == 0 && (dd.demand[0] > 0 || mem_demand > 0);
        if (racks_homogeneous_) {
            for (int rc = kc; rc <= rv_[0].inactive; ++rc)
                for (int rm = km; rm <= rv_[1].inactive; ++rm) {
                    const int nr = rc + rm;
                    if (need && nr == 0) continue;
                    const double stat = static_power(nar_ + nr, nap_ + pods_needed(nr)) - static_power(nar_, nap_);
                    served = std::min(served, dk_[0][static_cast<std::size_t>(rc)] + dk_[1][static_cast<std::size_t>(rm)] + stat);
                }
        } else {
            const int top = std::max(rv_[0].inactive, rv_[1].inactive);
            for (int r = std::max(kc, km); r <= top; ++r) {
                if (need && r == 0) continue;
                const int rc = std::min(r, rv_[0].inactive), rm = std::min(r, rv_[1].inactive);
                if (r > rv_[0].inactive) dk_[0][static_cast<std::size_t>(rc)] = cpu_part(rc);
                if (r > rv_[1].inactive) dk_[1][static_cast<std::size_t>(rm)] = std::max(mfloor, mem_part(rm));
                const double stat = static_power(nar_ + r, nap_ + pods_needed(r)) - static_power(nar_, nap_);
                served = std::min(served, dk_[0][static_cast<std::size_t>(rc)] + dk_[1][static_cast<std::size_t>(rm)] + stat);
            }
        }
    }
    return dd.nnet_sum + std::min(served, blocked);
}

/**
 * Memory power floor once every remaining workload is served: each locality domain must switch on
 * memories covering the demand of the workloads whose CPU it hosts. Undecided demand may use spare
 * capacity of any domain with CPU room for it, and the undecided workloads with the largest memory
 * and the largest CPU demand each need one domain holding both of their demands whole. Every unit
 * costs at least the smallest power factor.
 */
/// domain_bound() remembered by depth and the workloads tied to each domain.
inline double BranchAndBound::domain_bound_memo(int d) const
{
    if (n_ > 64) return domain_bound(d);
    dom_key_.assign(1, static_cast<std::uint64_t>(d));
    dom_key_.insert(dom_key_.end(), dom_mask_.begin(), dom_mask_.end());
    if (auto it = dom_memo_.find(dom_key_); it != dom_memo_.end()) return it->second;
    if (dom_memo_.size() >= dom_memo_limit) dom_memo_.clear();
    const double v = domain_bound(d);
    dom_memo_.emplace(dom_key_, v);
    return v;
}

inline double BranchAndBound::domain_bound(int d) const
{
    const auto ud = static_cast<std::size_t>(d);
    const double u = wm_suffix_[ud];
    const int a = big_mem_[ud], b = big_cpu_[ud];
    // frontiers of (slack, idle) indexed by which of the two workloads already has a domain
    auto& f = dom_f_;
    auto& nx = dom_nx_;
    for (auto& v : f) v.clear();
    const int full = a < 0 ? 0 : 3;
    f[a < 0 ? 3 : 0].assign(1, {0.0, 0.0});
    double demand = u;
    auto prune = [](std::vector<std::pair<double, double>>& in, std::vector<std::pair<double, double>>& out) {
        std::sort(in.begin(), in.end(), [](const auto& p, const auto& q) {
            return p.first > q.first || (p.first == q.first && p.second < q.second);
        });
        out.clear();
        for (const auto& p : in)
            if (out.empty() || p.second < out.back().second - 1e-12) out.push_back(p);
    };
    auto fits = [&](int k, double cpu_free, double slack) {
        const auto uk = static_cast<std::size_t>(k);
        return cpu_free + eps >= wc_[uk] && slack + eps >= wm_[uk];
    };
    for (std::size_t x = 0; x < dom_cover_.size(); ++x) {
        const double dx = dom_demand_[x];
        if (dx <= eps && u <= eps) continue;
        demand += dx;
        const double cpu_free = dom_cpu_free_[x];
        const bool open = u > eps && cpu_free + eps >= wc_min_suffix_[ud];
        for (auto& v : nx) v.clear();
        for (int h = 0; h < 4; ++h)
            for (const auto& [slack, idle] : f[h]) {
                if (dx <= eps) nx[h].push_back({slack, idle});
                for (const auto& [cap, id] : dom_cover_[x]) {
                    if (cap + eps < dx) continue;
                    int nh = h;
                    if (a >= 0 && fits(a, cpu_free, cap - dx)) nh |= 1;
                    if (b >= 0 && fits(b, cpu_free, cap - dx)) nh |= 2;
                    nx[nh].push_back({open ? std::min(u, slack + cap - dx) : slack, idle + id});
                }
            }
        bool any = false;
        for (int h = 0; h < 4; ++h) {
            prune(nx[h], f[h]);
            any = any || !f[h].empty();
        }
        if (!any) return inf;
    }
    double best = inf;
    for (const auto& [slack, idle] : f[full == 0 ? 3 : full])
        if (slack + eps >= u) best = std::min(best, idle);
    return best + mem_pfmin_ * demand;
}

/// Least memory power of packing the workloads already tied to a domain into its memories.
inline double BranchAndBound::domain_packing(std::size_t x) const
{
    const std::uint64_t mask = dom_mask_[x];
    if (mask == 0 || std::popcount(mask) > pack_max_items) return 0.0;
    auto& memo = const_cast<std::unordered_map<std::uint64_t, double>&>(pack_memo_[x]);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;

    std::vector<double> items;
    for (int k = 0; k < n_; ++k)
        if (mask >> k & 1) items.push_back(wm_[static_cast<std::size_t>(k)]);
    std::sort(items.rbegin(), items.rend());
    std::vector<double> after(items.size() + 1, 0.0);
    for (std::size_t i = items.size(); i-- > 0;) after[i] = after[i + 1] + items[i];
    const auto& cl = cls_[1];
    std::vector<int> left = dom_cls_cnt_[x];
    std::vector<std::pair<int, double>> bins; // (class, residual)
    double best = inf;
    auto rec = [&](auto&& self, std::size_t i, double cost) -> void {
        if (cost + mem_pfmin_ * after[i] >= best - 1e-12) return;
        if (i == items.size()) {
            best = cost;
            return;
        }
        const double s = items[i];
        for (std::size_t b = 0; b < bins.size(); ++b) {
            auto& [t, res] = bins[b];
            if (res + eps < s) continue;
            res -= s;
            self(self, i + 1, cost + cl[static_cast<std::size_t>(t)].pf * s);
            res += s;
        }
        for (std::size_t t = 0; t < cl.size(); ++t) {
            if (left[t] == 0 || cl[t].cap + eps < s) continue;
            --left[t];
            bins.push_back({static_cast<int>(t), cl[t].cap - s});
            self(self, i + 1, cost + cl[t].idle + cl[t].pf * s);
            bins.pop_back();
            ++left[t];
        }
    };
    rec(rec, 0, 0.0);
    memo.emplace(mask, best);
    return best;
}

inline bool BranchAndBound::cpu_allowed(int c) const
{
    const auto uc = static_cast<std::size_t>(c);
    if (chost_[uc] > 0) return true;
    for (int o : csame_[uc])
        if (chost_[static_cast<std::size_t>(o)] == 0) return false;
    const int nd = cnode_[uc];
    if (node_cnt_[static_cast<std::size_t>(nd)] > 0) return true;
    for (int o : node_same_[static_cast<std::size_t>(nd)])
        if (node_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    const int r = crack_[uc];
    if (rack_cnt_[static_cast<std::size_t>(r)] > 0) return true;
    for (int o : rack_same_[static_cast<std::size_t>(r)])
        if (rack_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    const int p = cpod_[uc];
    if (pod_cnt_[static_cast<std::size_t>(p)] > 0) return true;
    for (int o : pod_same_[static_cast<std::size_t>(p)])
        if (pod_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    return true;
}

inline bool BranchAndBound::mem_allowed(int m) const
{
    const auto um = static_cast<std::size_t>(m);
    if (mhost_[um] > 0) return true;
    for (int o : msame_[um])
        if (mhost_[static_cast<std::size_t>(o)] == 0) return false;
    const int nd = mnode_[um];
    if (node_cnt_[static_cast<std::size_t>(nd)] > 0) return true;
    for (int o : node_same_[static_cast<std::size_t>(nd)])
        if (node_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    const int r = mrack_[um];
    if (rack_cnt_[static_cast<std::size_t>(r)] > 0) return true;
    for (int o : rack_same_[static_cast<std::size_t>(r)])
        if (rack_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    const int p = mpod_[um];
    if (pod_cnt_[static_cast<std::size_t>(p)] > 0) return true;
    for (int o : pod_same_[static_cast<std::size_t>(p)])
        if (pod_cnt_[static_cast<std::size_t>(o)] == 0) return false;
    return true;
}

inline double BranchAndBound::static_delta(int rack, int pod) const
{
    const int dn = rack_cnt_[static_cast<std::size_t>(rack)] == 0;
    const int dp = pod_cnt_[static_cast<std::size_t>(pod)] == 0;
    return dn || dp ? static_power(nar_ + dn, nap_ + dp) - static_power(nar_, nap_) : 0.0;
}

inline double BranchAndBound::shuffle_cost(int k, int m) const
{
    double pj = 0.0;
    for (const auto& p : partners_[static_cast<std::size_t>(k)]) {
        const int y = as_m_[static_cast<std::size_t>(p.pos)];
        if (y < 0 || y == m) continue;
        pj += p.out * table_.shuffle(m, y) + p.in * table_.shuffle(y, m);
    }
    return pj * gbps_pj_to_watt;
}

inline void BranchAndBound::place_cpu(int k, int c)
{
    const auto uk = static_cast<std::size_t>(k);
    as_c_[uk] = c;
    if (c < 0) return;
    const auto uc = static_cast<std::size_t>(c);
    cres_[uc] -= wc_[uk];
    if (chost_[uc]++ == 0) --empty_cnt_[0][static_cast<std::size_t>(ccls_[uc])];
    ++node_cnt_[static_cast<std::size_t>(cnode_[uc])];
    if (rack_cnt_[static_cast<std::size_t>(crack_[uc])]++ == 0) ++nar_;
    if (pod_cnt_[static_cast<std::size_t>(cpod_[uc])]++ == 0) ++nap_;
    for (std::size_t l = 0; l < served_mprice_.size(); ++l) served_mprice_[l] += depth_[0].ps[1][l].price[uk];
    served_wm_ += wm_[uk];
    dom_demand_[static_cast<std::size_t>(dom_of_cpu_[uc])] += wm_[uk];
    dom_cpu_free_[static_cast<std::size_t>(dom_of_cpu_[uc])] -= wc_[uk];
    if (n_ <= 64) dom_mask_[static_cast<std::size_t>(dom_of_cpu_[uc])] |= std::uint64_t{1} << k;
}

inline void BranchAndBound::unplace_cpu(int k, int c)
{
    const auto uk = static_cast<std::size_t>(k);
    as_c_[uk] = -1;
    if (c < 0) return;
    const auto uc = static_cast<std::size_t>(c);
    cres_[uc] += wc_[uk];
    if (--chost_[uc] == 0) ++empty_cnt_[0][static_cast<std::size_t>(ccls_[uc])];
    --node_cnt_[static_cast<std::size_t>(cnode_[uc])];
    if (--rack_cnt_[static_cast<std::size_t>(crack_[uc])] == 0) --nar_;
    if (--pod_cnt_[static_cast<std::size_t>(cpod_[uc])] == 0) --nap_;
    for (std::size_t l = 0; l < served_mprice_.size(); ++l) served_mprice_[l] -= depth_[0].ps[1][l].price[uk];
    served_wm_ -= wm_[uk];
    dom_demand_[static_cast<std::size_t>(dom_of_cpu_[uc])] -= wm_[uk];
    dom_cpu_free_[static_cast<std::size_t>(dom_of_cpu_[uc])] += wc_[uk];
    if (n_ <= 64) dom_mask_[static_cast<std::size_t>(dom_of_cpu_[uc])] &= ~(std::uint64_t{1} << k);
}

inline void BranchAndBound::place_mem(int k, int m)
{
    const auto uk = static_cast<std::size_t>(k), um = static_cast<std::size_t>(m);
    as_m_[uk] = m;
    mres_[um] -= wm_[uk];
    if (mhost_[um]++ == 0) --empty_cnt_[1][static_cast<std::size_t>(mcls_[um])];
    ++node_cnt_[static_cast<std::size_t>(mnode_[um])];
    if (rack_cnt_[static_cast<std::size_t>(mrack_[um])]++ == 0) ++nar_;
    if (pod_cnt_[static_cast<std::size_t>(mpod_[um])]++ == 0) ++nap_;
}

inline void BranchAndBound::unplace_mem(int k, int m)
{
    const auto uk = static_cast<std::size_t>(k), um = static_cast<std::size_t>(m);
    as_m_[uk] = -1;
    mres_[um] += wm_[uk];
    if (--mhost_[um] == 0) ++empty_cnt_[1][static_cast<std::size_t>(mcls_[um])];
    --node_cnt_[static_cast<std::size_t>(mnode_[um])];
    if (--rack_cnt_[static_cast<std::size_t>(mrack_[um])] == 0) --nar_;
    if (--pod_cnt_[static_cast<std::size_t>(mpod_[um])] == 0) --nap_;
}

inline bool BranchAndBound::tick()
{
    ++nodes_;
    if ((nodes_ & 0xfff) == 0 &&
        (nodes_ >= opt_.budget.max_nodes || seconds_since(t0_) > opt_.budget.max_seconds))
        aborted_ = true;
    return !aborted_;
}

inline void BranchAndBound::dfs_cpu(int d, double g)
{
    if (!tick()) return;
    if (d == n_) {
        memory_phase(g);
        return;
    }

    const auto ud = static_cast<std::size_t>(d);
    auto& kids = kids_cpu_[ud];
    kids.clear();
    const int grp = group_[ud];
    const int forced = grp >= 0 ? gstate_[static_cast<std::size_t>(grp)] : -1;
    if (forced != 0) {
        for (const auto& o : cpu_opts_[ud]) {
            const auto uc = static_cast<std::size_t>(o.c);
            if (cres_[uc] + eps < wc_[ud] || !cpu_allowed(o.c)) continue;
            double inc = ns_[ud] + o.base + static_delta(crack_[uc], cpod_[uc]);
            if (chost_[uc] == 0) inc += cidle_[uc];
            kids.push_back({o.c, inc});
        }
    }
    if (forced != 1) kids.push_back({-1, pb_.params.alpha});

    const bool set_group = grp >= 0 && forced < 0;
    auto enter = [&](const Child& ch) {
        place_cpu(d, ch.id);
        if (set_group) gstate_[static_cast<std::size_t>(grp)] = ch.id >= 0 ? 1 : 0;
    };
    auto leave = [&](const Child& ch) {
        if (set_group) gstate_[static_cast<std::size_t>(grp)] = -1;
        unplace_cpu(d, ch.id);
    };
    // most promising child first
    std::size_t keep = 0;
    for (auto& ch : kids) {
        if (g + ch.inc >= best_ - eps) continue;
        enter(ch);
        ch.lb = ch.inc + bound_cpu(d + 1);
        leave(ch);
        if (g + ch.lb < best_ - eps) kids[keep++] = ch;
    }
    kids.resize(keep);
    std::stable_sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) { return a.lb < b.lb; });

    for (std::size_t i = 0; i < kids.size(); ++i) {
        const Child ch = kids_cpu_[ud][i];
        if (g + ch.lb >= best_ - eps) break;
        enter(ch);
        dfs_cpu(d + 1, g + ch.inc);
        leave(ch);
        if (aborted_) return;
    }
}

/**
 * Memory phase. Served workloads fall into groups that share no memory option, no inactive rack
 * or pod, and whose cross-group shuffle energy does not depend on the choice; groups are solved
 * one by one and remembered by their items, cpu equivalence and rack activity.
 */
inline void BranchAndBound::memory_phase(double g)
{
    std::vector<int> served;
    for (int k = 0; k < n_; ++k)
        if (as_c_[static_cast<std::size_t>(k)] >= 0) served.push_back(k);
    auto opts = [&](int k) -> const std::vector<MemOpt>& {
        return mem_opts_[static_cast<std::size_t>(k)][static_cast<std::size_t>(as_c_[static_cast<std::size_t>(k)])];
    };

    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };
    std::vector<int> by_mem(static_cast<std::size_t>(lay_.num_mems()), -1);
    std::vector<int> by_rack(static_cast<std::size_t>(lay_.num_racks()), -1);
    std::vector<int> by_pod(static_cast<std::size_t>(lay_.num_pods()), -1);
    auto join = [&](std::vector<int>& owner, int key, int k) {
        int& o = owner[static_cast<std::size_t>(key)];
        if (o < 0) o = k;
        else unite(k, o);
    };
    for (int k : served)
        for (const auto& o : opts(k)) {
            join(by_mem, o.m, k);
            const int r = mrack_[static_cast<std::size_t>(o.m)], p = mpod_[static_cast<std::size_t>(o.m)];
            if (rack_cnt_[static_cast<std::size_t>(r)] == 0) join(by_rack, r, k);
            if (pod_cnt_[static_cast<std::size_t>(p)] == 0) join(by_pod, p, k);
        }
    for (int k : served)
        for (const auto& pr : partners_[static_cast<std::size_t>(k)]) {
            if (as_c_[static_cast<std::size_t>(pr.pos)] < 0 || find(k) == find(pr.pos)) continue;
            bool constant = true;
            double vo = -1.0, vi = -1.0;
            for (const auto& x : opts(k))
                for (const auto& y : opts(pr.pos)) {
                    const double o = table_.shuffle(x.m, y.m), i = table_.shuffle(y.m, x.m);
                    if (vo < 0) {
                        vo = o;
                        vi = i;
                    }
                    if ((pr.out > 0 && o != vo) || (pr.in > 0 && i != vi)) constant = false;
                }
            if (!constant) unite(k, pr.pos);
        }

    std::vector<std::vector<int>> groups;
    {
        std::vector<int> slot(static_cast<std::size_t>(n_), -1);
        for (int k : served) {
            const int r = find(k);
            if (slot[static_cast<std::size_t>(r)] < 0) {
                slot[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
                groups.emplace_back();
            }
            groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(k);
        }
    }

    std::vector<int> activity;
    for (int r = 0; r < lay_.num_racks(); ++r) activity.push_back(rack_cnt_[static_cast<std::size_t>(r)] > 0);
    for (int p = 0; p < lay_.num_pods(); ++p) activity.push_back(pod_cnt_[static_cast<std::size_t>(p)] > 0);

    double total = g;
    std::vector<int> mems(static_cast<std::size_t>(n_), -1);
    for (const auto& items : groups) {
        std::vector<int> key;
        for (int k : items) {
            key.push_back(k);
            key.push_back(mem_equiv_[static_cast<std::size_t>(as_c_[static_cast<std::size_t>(k)])]);
        }
        key.push_back(-1);
        key.insert(key.end(), activity.begin(), activity.end());
        auto it = memo_.find(key);
        if (it == memo_.end()) {
            if (!solve_group(items)) return;
            it = memo_.emplace(std::move(key), MemoEntry{grp_best_, grp_best_m_}).first;
        }
        if (it->second.cost == inf) return;
        total += it->second.cost;
        if (total >= best_ - eps) return;
        for (std::size_t i = 0; i < items.size(); ++i) mems[static_cast<std::size_t>(items[i])] = it->second.mems[i];
    }
    // shuffle between groups
    double pj = 0.0;
    for (int k : served)
        for (const auto& pr : partners_[static_cast<std::size_t>(k)]) {
            const int y = mems[static_cast<std::size_t>(pr.pos)];
            if (y < 0 || find(k) == find(pr.pos)) continue;
            const int x = mems[static_cast<std::size_t>(k)];
            pj += pr.out * table_.shuffle(x, y) + pr.in * table_.shuffle(y, x);
        }
    total += pj * gbps_pj_to_watt;
    if (total < best_ - eps) {
        best_ = total;
        best_c_ = as_c_;
        best_m_ = mems;
    }
}

/// Exact cheapest memories for one group; false when the budget ran out.
inline bool BranchAndBound::solve_group(const std::vector<int>& items)
{
    grp_items_ = items;
    grp_best_ = inf;
    grp_best_m_.assign(items.size(), -1);
    grp_cur_m_.assign(items.size(), -1);
    grp_rest_.assign(items.size() + 1, 0.0);
    for (std::size_t i = items.size(); i-- > 0;) grp_rest_[i] = grp_rest_[i + 1] + wm_[static_cast<std::size_t>(items[i])];
    grp_mems_.clear();
    std::vector<char> seen(static_cast<std::size_t>(lay_.num_mems()), 0);
    grp_pfmin_ = inf;
    for (int k : items)
        for (const auto& o : mem_opts_[static_cast<std::size_t>(k)][static_cast<std::size_t>(as_c_[static_cast<std::size_t>(k)])])
            if (!seen[static_cast<std::size_t>(o.m)]) {
                seen[static_cast<std::size_t>(o.m)] = 1;
                grp_mems_.push_back(o.m);
                grp_pfmin_ = std::min(grp_pfmin_, mpf_[static_cast<std::size_t>(o.m)]);
            }
    if (kids_mem_.size() < items.size()) kids_mem_.resize(items.size());
    dfs_group(0, 0.0);
    return !aborted_;
}

/// Power factor floor plus the cheapest idle power per unit that the overflow beyond active memories needs.
inline double BranchAndBound::group_bound(std::size_t i) const
{
    const double rest = grp_rest_[i];
    if (rest <= 0) return 0.0;
    double spare = 0.0, rate = inf;
    for (int m : grp_mems_) {
        const auto um = static_cast<std::size_t>(m);
        if (mhost_[um] > 0) spare += mres_[um];
        else rate = std::min(rate, midle_[um] / mcap_[um]);
    }
    const double deficit = rest - spare;
    if (deficit <= eps) return rest * grp_pfmin_;
    return rate == inf ? inf : rest * grp_pfmin_ + deficit * rate;
}

inline void BranchAndBound::dfs_group(std::size_t i, double g)
{
    if (!tick()) return;
    if (i == grp_items_.size()) {
        if (g < grp_best_ - eps) {
            grp_best_ = g;
            grp_best_m_ = grp_cur_m_;
        }
        return;
    }

    const int k = grp_items_[i];
    const auto uk = static_cast<std::size_t>(k);
    const int c = as_c_[uk];
    double netmin = 0.0;
    for (const auto& o : cpu_opts_[uk])
        if (o.c == c) netmin = o.netmin;
    auto& kids = kids_mem_[i];
    kids.clear();
    for (const auto& o : mem_opts_[uk][static_cast<std::size_t>(c)]) {
        const auto um = static_cast<std::size_t>(o.m);
        if (mres_[um] + eps < wm_[uk] || !mem_allowed(o.m)) continue;
        double inc = mpf_[um] * wm_[uk] + (o.net - netmin) + shuffle_cost(k, o.m) + static_delta(mrack_[um], mpod_[um]);
        if (mhost_[um] == 0) inc += midle_[um];
        kids.push_back({o.m, inc});
    }
    std::size_t keep = 0;
    for (auto& ch : kids) {
        if (g + ch.inc >= grp_best_ - eps) continue;
        place_mem(k, ch.id);
        ch.lb = ch.inc + group_bound(i + 1);
        unplace_mem(k, ch.id);
        if (g + ch.lb < grp_best_ - eps) kids[keep++] = ch;
    }
    kids.resize(keep);
    std::stable_sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) { return a.lb < b.lb; });

    for (std::size_t j = 0; j < kids.size(); ++j) {
        const Child ch = kids_mem_[i][j];
        if (g + ch.lb >= grp_best_ - eps) break;
        place_mem(k, ch.id);
        grp_cur_m_[i] = ch.id;
        dfs_group(i + 1, g + ch.inc);
        grp_cur_m_[i] = -1;
        unplace_mem(k, ch.id);
        if (aborted_) return;
    }
}

inline SolveResult BranchAndBound::run()
{
    const auto& ws = pb_.wl();
    const auto un = static_cast<std::size_t>(n_);

    cres_ = ccap_;
    mres_ = mcap_;
    chost_.assign(ccap_.size(), 0);
    mhost_.assign(mcap_.size(), 0);
    node_cnt_.assign(static_cast<std::size_t>(lay_.num_nodes()), 0);
    rack_cnt_.assign(static_cast<std::size_t>(lay_.num_racks()), 0);
    pod_cnt_.assign(static_cast<std::size_t>(lay_.num_pods()), 0);
    as_c_.assign(un, -1);
    as_m_.assign(un, -1);
    gstate_.assign(static_cast<std::size_t>(ngroups_), -1);
    kids_cpu_.assign(un, {});
    kids_mem_.assign(un, {});

    // incumbent: everything blocked, then any feasible warm start
    std::optional<Placement> start;
    double start_obj = pb_.params.alpha * n_;
    auto consider = [&](const Placement& p) {
        if (p.num_workloads() != ws.size() || !check(p, pb_).empty()) return;
        const double v = objective_unchecked(pb_, table_, p);
        if (v < start_obj) {
            start_obj = v;
            start = p;
        }
    };
    if (opt_.heep_warm_start) consider(heep_place(pb_).placement);
    if (opt_.warm_start) consider(*opt_.warm_start);
    best_ = start_obj + 1e-7; // the first search leaf at or below the start value replaces it

    SolveResult res;
    res.root_bound = bound_cpu(0);
    dfs_cpu(0, 0.0);

    auto finish = [&](const std::vector<std::optional<int>>& wcl, const std::vector<std::optional<int>>& wml) {
        res.placement = derive(pb_, wcl, wml);
        res.report = report(lay_, pb_.fabric, table_, res.placement, ws, pb_.shuffle());
        res.objective = res.report.tdpc + pb_.params.alpha * res.report.blocked;
    };
    if (!best_c_.empty()) {
        std::vector<std::optional<int>> wcl(ws.size()), wml(ws.size());
        for (int k = 0; k < n_; ++k) {
            const auto w = static_cast<std::size_t>(order_[static_cast<std::size_t>(k)]);
            if (best_c_[static_cast<std::size_t>(k)] >= 0) {
                wcl[w] = best_c_[static_cast<std::size_t>(k)];
                wml[w] = best_m_[static_cast<std::size_t>(k)];
            }
        }
        finish(wcl, wml);
        if (start && start_obj < res.objective) finish(start->wcl, start->wml);
    } else if (start) {
        finish(start->wcl, start->wml);
    } else {
        finish(std::vector<std::optional<int>>(ws.size()), std::vector<std::optional<int>>(ws.size()));
    }
    res.proven_optimal = !aborted_;
    res.nodes_explored = nodes_;
    res.wall_time = seconds_since(t0_);
    return res;
}

} // namespace detail

/// Exact minimum of the objective. proven_optimal is false when the budget ran out first.
inline SolveResult solve_exact(const Problem& pb, const SolveOptions& opt = {})
{
    pb.params.validate();
    return detail::BranchAndBound(pb, opt).run();
}

/**
 * Plain enumeration of every (cpu, memory) pair or blocking per workload, pruned only by capacity
 * and latency, each complete assignment scored by the placement module. Tiny instances only.
 */
inline SolveResult solve_exhaustive(const Problem& pb)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto& ws = pb.wl();
    const std::size_t n = ws.size();
    if (n > 8) throw contract_error("exhaustive enumeration is limited to 8 workloads");
    const auto table = compute_pair_energy_table(pb.layout, pb.fabric);

    std::vector<std::vector<std::pair<int, int>>> pairs(n);
    for (std::size_t w = 0; w < n; ++w) pairs[w] = detail::latency_pairs(pb.layout, pb.dc_kind, ws[w]);

    std::vector<double> cl(static_cast<std::size_t>(pb.layout.num_cpus()), 0.0);
    std::vector<double> ml(static_cast<std::size_t>(pb.layout.num_mems()), 0.0);
    std::vector<std::optional<int>> wcl(n), wml(n);
    SolveResult best;
    best.objective = std::numeric_limits<double>::infinity();
    std::uint64_t leaves = 0;

    auto rec = [&](auto&& self, std::size_t w) -> void {
        if (w == n) {
            ++leaves;
            auto p = derive(pb, wcl, wml);
            if (!check(p, pb).empty()) return;
            const double v = objective_unchecked(pb, table, p);
            if (v < best.objective) {
                best.objective = v;
                best.placement = std::move(p);
            }
            return;
        }
        for (auto [c, m] : pairs[w]) {
            const auto uc = static_cast<std::size_t>(c), um = static_cast<std::size_t>(m);
            if (cl[uc] + ws[w].wc > pb.layout.cpu_class(c).capacity + capacity_tolerance) continue;
            if (ml[um] + ws[w].wm > pb.layout.mem_class(m).capacity + capacity_tolerance) continue;
            cl[uc] += ws[w].wc;
            ml[um] += ws[w].wm;
            wcl[w] = c;
            wml[w] = m;
            self(self, w + 1);
            cl[uc] -= ws[w].wc;
            ml[um] -= ws[w].wm;
        }
        wcl[w].reset();
        wml[w].reset();
        self(self, w + 1);
    };
    rec(rec, 0);

    best.report = report(pb.layout, pb.fabric, table, best.placement, ws, pb.shuffle());
    best.proven_optimal = true;
    best.nodes_explored = leaves;
    best.wall_time = detail::seconds_since(t0);
    return best;
}

} // namespace cdc
