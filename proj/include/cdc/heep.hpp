#pragma once

/**
 * @file heep.hpp
 * @brief Greedy class-threshold placement heuristic.
 *
 * Each query workload is hosted by walking the containment tree bottom-up: every node proposes
 * its best CPU and memory component, racks pick among their nodes' proposals, pods among their
 * racks', and the DC among its pods'. Every pick uses the same class-threshold rule
 * (select_best_component). CPU and memory must end up within the DC kind's locality domain, so
 * from that level upwards a child only competes if it offers both, and the comparison is driven
 * by its CPU proposal.
 */

#include "cdc/objective.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cdc {

struct ClassThreshold
{
    double capacity = 0.0;
    double lower = 0.5;  ///< lambda
    double upper = 1.0;  ///< Lambda
    bool last = false;   ///< the least efficient class carries no thresholds
};

struct ThresholdTable
{
    std::vector<ClassThreshold> cpu;
    std::vector<ClassThreshold> mem;

    const std::vector<ClassThreshold>& of(ResourceKind k) const noexcept { return k == ResourceKind::Cpu ? cpu : mem; }
};

/// Classes must be ordered most efficient first.
inline std::vector<ClassThreshold> thresholds(std::span<const ComponentClass> classes, double lower = 0.5)
{
    if (classes.empty()) throw config_error("threshold table needs at least one class");
    std::vector<ClassThreshold> out;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        ClassThreshold t;
        t.capacity = classes[k].capacity;
        if (k + 1 < classes.size()) {
            t.lower = lower;
            t.upper = classes[k + 1].capacity / classes[k].capacity;
        } else {
            t.last = true;
            t.lower = t.upper = 0.0;
        }
        out.push_back(t);
    }
    return out;
}

inline ThresholdTable thresholds(const DcLayout& layout)
{
    return {thresholds(layout.cpu_classes()), thresholds(layout.mem_classes())};
}

struct Candidate
{
    int component = -1;
    int cls = 0;
    double util = 0.0; ///< utilization after placing the query demand
};

/// Outcome of one selection, with the rejected heads kept for the decision log.
struct Selection
{
    Candidate chosen;
    std::vector<Candidate> rejected;
};

/**
 * Class-threshold rule. Reduces `cands` to the best candidate per class (highest resulting
 * utilization, first on ties), then walks the classes most efficient first. A head is accepted
 * when U <= lambda, U > Lambda, or it is the last remaining candidate.
 */
inline Selection select_best_component(const std::vector<Candidate>& cands, const std::vector<ClassThreshold>& table)
{
    if (cands.empty()) throw contract_error("select_best_component needs at least one candidate");
    std::vector<std::optional<Candidate>> best(table.size());
    for (const auto& c : cands) {
        if (c.cls < 0 || static_cast<std::size_t>(c.cls) >= table.size()) throw lookup_error("candidate class out of range");
        auto& b = best[static_cast<std::size_t>(c.cls)];
        if (!b || c.util > b->util) b = c;
    }
    std::vector<Candidate> heads;
    for (auto& b : best)
        if (b) heads.push_back(*b);

    Selection s;
    for (std::size_t i = 0; i < heads.size(); ++i) {
        const auto& h = heads[i];
        const auto& t = table[static_cast<std::size_t>(h.cls)];
        if (i + 1 == heads.size() || t.last || h.util <= t.lower || h.util > t.upper) {
            s.chosen = h;
            return s;
        }
        s.rejected.push_back(h);
    }
    return s; // unreachable: the last head is always accepted
}

struct HeepDecision
{
    int step = 0;
    int workload = 0;
    std::string source; ///< head, scan-cpu or scan-rack
    bool blocked = false;
    std::optional<int> cpu, mem;
    double cpu_util = 0.0, mem_util = 0.0;
    std::string fired; ///< rejected heads, "kind:class@util" separated by ';'
    int candidates = 0;
};

struct HeepResult
{
    Placement placement;
    PowerReport report;
    double objective = 0.0;
    std::vector<HeepDecision> log;
};

namespace detail {

class HeepRun
{
public:
    HeepRun(const Problem& pb) : pb_(pb), lay_(pb.layout), tab_(thresholds(pb.layout))
    {
        cres_.resize(static_cast<std::size_t>(lay_.num_cpus()));
        mres_.resize(static_cast<std::size_t>(lay_.num_mems()));
        for (int c = 0; c < lay_.num_cpus(); ++c) cres_[static_cast<std::size_t>(c)] = lay_.cpu_class(c).capacity;
        for (int m = 0; m < lay_.num_mems(); ++m) mres_[static_cast<std::size_t>(m)] = lay_.mem_class(m).capacity;
        kind_domain_ = to_int(max_latency_for(pb.dc_kind));
        domain_ = kind_domain_;
    }

    HeepResult run();

private:
    struct Pick
    {
        std::optional<Candidate> cpu, mem;
        std::vector<Candidate> rejected_cpu, rejected_mem;
        int considered = 0;
        bool both() const noexcept { return cpu && mem; }
    };

    static constexpr double eps = capacity_tolerance;

    bool fits_cpu(int c, double d) const { return cres_[static_cast<std::size_t>(c)] + eps >= d; }
    bool fits_mem(int m, double d) const { return mres_[static_cast<std::size_t>(m)] + eps >= d; }
    double util_cpu(int c, double d) const
    {
        const double cap = lay_.cpu_class(c).capacity;
        return (cap - cres_[static_cast<std::size_t>(c)] + d) / cap;
    }
    double util_mem(int m, double d) const
    {
        const double cap = lay_.mem_class(m).capacity;
        return (cap - mres_[static_cast<std::size_t>(m)] + d) / cap;
    }

    void reduce(std::optional<Candidate>& slot, std::vector<Candidate>& pool, std::vector<Candidate>& rej,
                const std::vector<ClassThreshold>& t)
    {
        if (pool.empty()) return;
        auto s = select_best_component(pool, t);
        slot = s.chosen;
        rej.insert(rej.end(), s.rejected.begin(), s.rejected.end());
    }

    Pick node_pick(int n, const Workload& w, std::optional<int> fixed_cpu)
    {
        Pick p;
        std::vector<Candidate> cp, mp;
        const auto& node = lay_.nodes()[static_cast<std::size_t>(n)];
        if (fixed_cpu) {
            if (lay_.node_of(ResourceKind::Cpu, *fixed_cpu) == n)
                cp.push_back({*fixed_cpu, lay_.cpu(*fixed_cpu).class_index, util_cpu(*fixed_cpu, w.wc)});
        } else {
            for (int c : node.cpus)
                if (fits_cpu(c, w.wc)) cp.push_back({c, lay_.cpu(c).class_index, util_cpu(c, w.wc)});
        }
        for (int m : node.mems)
            if (fits_mem(m, w.wm)) mp.push_back({m, lay_.mem(m).class_index, util_mem(m, w.wm)});
        p.considered = static_cast<int>(cp.size() + mp.size());
        reduce(p.cpu, cp, p.rejected_cpu, tab_.cpu);
        reduce(p.mem, mp, p.rejected_mem, tab_.mem);
        return p;
    }

    /// Combines child picks at one tree level (`level`: 2 rack, 3 pod, 4 DC).
    Pick combine(std::vector<Pick>& kids, int level)
    {
        Pick p;
        for (const auto& k : kids) {
            p.considered += k.considered;
            p.rejected_cpu.insert(p.rejected_cpu.end(), k.rejected_cpu.begin(), k.rejected_cpu.end());
            p.rejected_mem.insert(p.rejected_mem.end(), k.rejected_mem.begin(), k.rejected_mem.end());
        }
        if (level <= domain_) {
            std::vector<Candidate> cp, mp;
            for (const auto& k : kids) {
                if (k.cpu) cp.push_back(*k.cpu);
                if (k.mem) mp.push_back(*k.mem);
            }
            reduce(p.cpu, cp, p.rejected_cpu, tab_.cpu);
            reduce(p.mem, mp, p.rejected_mem, tab_.mem);
            return p;
        }
        // above the locality domain: children must offer both, chosen by their CPU proposal
        std::vector<Candidate> cp;
        std::vector<const Pick*> owner;
        for (const auto& k : kids)
            if (k.both()) {
                cp.push_back(*k.cpu);
                owner.push_back(&k);
            }
        if (cp.empty()) return p;
        auto s = select_best_component(cp, tab_.cpu);
        p.rejected_cpu.insert(p.rejected_cpu.end(), s.rejected.begin(), s.rejected.end());
        for (std::size_t i = 0; i < cp.size(); ++i)
            if (cp[i].component == s.chosen.component) {
                p.cpu = owner[i]->cpu;
                p.mem = owner[i]->mem;
                break;
            }
        return p;
    }

    Pick rack_pick(int r, const Workload& w, std::optional<int> fixed_cpu)
    {
        std::vector<Pick> kids;
        for (int n : lay_.racks()[static_cast<std::size_t>(r)].nodes) kids.push_back(node_pick(n, w, fixed_cpu));
        auto p = combine(kids, 2);
        if (domain_ == 1 && !p.both()) p.cpu.reset(), p.mem.reset();
        return p;
    }

    Pick pod_pick(int pod, const Workload& w, std::optional<int> fixed_cpu)
    {
        std::vector<Pick> kids;
        for (int r : lay_.pods()[static_cast<std::size_t>(pod)].racks) kids.push_back(rack_pick(r, w, fixed_cpu));
        return combine(kids, 3);
    }

    /// Full search, or restricted to the racks of `scope` when given.
    Pick search(const Workload& w, const std::vector<int>* scope, std::optional<int> fixed_cpu)
    {
        std::vector<Pick> kids;
        if (scope) {
            if (kind_domain_ >= 3) {
                // pod-scale scope is a pod
                for (int pod : *scope) kids.push_back(pod_pick(pod, w, fixed_cpu));
                return combine(kids, 4);
            }
            for (int r : *scope) kids.push_back(rack_pick(r, w, fixed_cpu));
            auto p = combine(kids, 3);
            return p.both() ? p : Pick{};
        }
        for (int pod = 0; pod < lay_.num_pods(); ++pod) kids.push_back(pod_pick(pod, w, fixed_cpu));
        auto p = combine(kids, 4);
        return p.both() ? p : Pick{};
    }

    int query_domain(const Workload& w) const { return std::min(kind_domain_, to_int(w.max_lat)); }

    /// Blocking criterion: some locality domain holds a CPU and a memory component with room.
    bool servable(const Workload& w) const
    {
        const auto bound = std::min(to_int(max_latency_for(pb_.dc_kind)), to_int(w.max_lat));
        for (int c = 0; c < lay_.num_cpus(); ++c) {
            if (!fits_cpu(c, w.wc)) continue;
            for (int m = 0; m < lay_.num_mems(); ++m)
                if (fits_mem(m, w.wm) && to_int(latency_class(lay_, c, m)) <= bound) return true;
        }
        return false;
    }

    void commit(int w, int c, int m)
    {
        const auto& wl = pb_.wl()[static_cast<std::size_t>(w)];
        cres_[static_cast<std::size_t>(c)] -= wl.wc;
        mres_[static_cast<std::size_t>(m)] -= wl.wm;
        wcl_[static_cast<std::size_t>(w)] = c;
        wml_[static_cast<std::size_t>(w)] = m;
    }

    static std::string fired(const Pick& p)
    {
        std::ostringstream os;
        bool first = true;
        auto put = [&](const char* k, const std::vector<Candidate>& v) {
            for (const auto& c : v) {
                os << (first ? "" : ";") << k << ':' << c.cls << '@' << c.util;
                first = false;
            }
        };
        put("cpu", p.rejected_cpu);
        put("mem", p.rejected_mem);
        return os.str();
    }

    const Problem& pb_;
    const DcLayout& lay_;
    ThresholdTable tab_;
    std::vector<double> cres_, mres_;
    std::vector<std::optional<int>> wcl_, wml_;
    int kind_domain_ = 2;
    int domain_ = 2; ///< locality level of the current query
};

inline HeepResult HeepRun::run()
{
    const auto& ws = pb_.wl();
    const std::size_t n = ws.size();
    wcl_.assign(n, std::nullopt);
    wml_.assign(n, std::nullopt);

    const bool all_mem = n > 0 && std::all_of(ws.begin(), ws.end(), [](const Workload& w) {
        return w.cls == WorkloadClass::MemIntensive;
    });
    std::vector<int> jobs(n);
    std::iota(jobs.begin(), jobs.end(), 0);
    std::stable_sort(jobs.begin(), jobs.end(), [&](int a, int b) {
        const auto& x = ws[static_cast<std::size_t>(a)];
        const auto& y = ws[static_cast<std::size_t>(b)];
        if (all_mem) return x.wm != y.wm ? x.wm > y.wm : x.wc > y.wc;
        return x.wc != y.wc ? x.wc > y.wc : x.wm > y.wm;
    });
    std::vector<int> by_cpu = jobs;
    std::stable_sort(by_cpu.begin(), by_cpu.end(), [&](int a, int b) {
        return ws[static_cast<std::size_t>(a)].wc > ws[static_cast<std::size_t>(b)].wc;
    });

    // integrated workloads are placed whole or not at all
    std::vector<std::vector<int>> siblings(n);
    for (const auto& iw : pb_.workloads.integrated)
        for (int m : iw.members) siblings[static_cast<std::size_t>(m)] = iw.members;

    std::vector<char> done(n, 0);
    HeepResult res;
    std::optional<int> best_cpu;
    std::optional<int> best_scope; // rack, or pod for pod-scale
    int step = 0;

    auto scope_of = [&](int c) {
        return kind_domain_ >= 3 ? lay_.pod_of(ResourceKind::Cpu, c) : lay_.rack_of(ResourceKind::Cpu, c);
    };
    auto fits_scope = [&](const Workload& w, int scope) {
        std::vector<int> racks = kind_domain_ >= 3 ? lay_.pods()[static_cast<std::size_t>(scope)].racks : std::vector<int>{scope};
        for (int r : racks)
            for (int nd : lay_.racks()[static_cast<std::size_t>(r)].nodes)
                for (int c : lay_.nodes()[static_cast<std::size_t>(nd)].cpus)
                    if (fits_cpu(c, w.wc)) return true;
        return false;
    };

    while (true) {
        std::optional<int> query;
        std::string source = "head";
        std::optional<int> fixed_cpu;
        std::vector<int> scope;

        if (best_cpu) {
            for (int w : by_cpu) {
                if (done[static_cast<std::size_t>(w)]) continue;
                const auto& wl = ws[static_cast<std::size_t>(w)];
                domain_ = query_domain(wl);
                if (fits_cpu(*best_cpu, wl.wc)) {
                    scope = {*best_scope};
                    auto p = search(wl, &scope, *best_cpu);
                    if (p.both()) {
                        query = w;
                        source = "scan-cpu";
                        fixed_cpu = best_cpu;
                        break;
                    }
                }
            }
            if (!query)
                for (int w : by_cpu) {
                    if (done[static_cast<std::size_t>(w)]) continue;
                    const auto& wl = ws[static_cast<std::size_t>(w)];
                    if (!fits_scope(wl, *best_scope)) continue;
                    domain_ = query_domain(wl);
                    scope = {*best_scope};
                    if (search(wl, &scope, std::nullopt).both()) {
                        query = w;
                        source = "scan-rack";
                        break;
                    }
                }
        }
        if (!query)
            for (int w : jobs)
                if (!done[static_cast<std::size_t>(w)]) {
                    query = w;
                    break;
                }
        if (!query) break;

        const int q = *query;
        const auto& wl = ws[static_cast<std::size_t>(q)];
        domain_ = query_domain(wl);
        HeepDecision d;
        d.step = step++;
        d.workload = q;
        d.source = source;

        Pick p;
        if (source == "head") {
            if (servable(wl)) p = search(wl, nullptr, std::nullopt);
        } else {
            p = search(wl, &scope, fixed_cpu);
        }
        done[static_cast<std::size_t>(q)] = 1;
        d.candidates = p.considered;
        d.fired = fired(p);
        if (!p.both()) {
            d.blocked = true;
            res.log.push_back(d);
            continue;
        }
        d.cpu = p.cpu->component;
        d.mem = p.mem->component;
        d.cpu_util = p.cpu->util;
        d.mem_util = p.mem->util;
        commit(q, p.cpu->component, p.mem->component);
        best_cpu = p.cpu->component;
        best_scope = scope_of(*best_cpu);
        res.log.push_back(d);
    }

    // roll back partially served integrated workloads
    for (const auto& iw : pb_.workloads.integrated) {
        bool all = true;
        for (int m : iw.members) all = all && wcl_[static_cast<std::size_t>(m)].has_value();
        if (all) continue;
        for (int m : iw.members) {
            const auto um = static_cast<std::size_t>(m);
            if (!wcl_[um]) continue;
            cres_[static_cast<std::size_t>(*wcl_[um])] += ws[um].wc;
            mres_[static_cast<std::size_t>(*wml_[um])] += ws[um].wm;
            wcl_[um].reset();
            wml_[um].reset();
            HeepDecision d;
            d.step = step++;
            d.workload = m;
            d.source = "rollback";
            d.blocked = true;
            res.log.push_back(d);
        }
    }

    const auto table = compute_pair_energy_table(lay_, pb_.fabric);
    res.placement = derive(pb_, wcl_, wml_);
    res.report = report(lay_, pb_.fabric, table, res.placement, ws, pb_.shuffle());
    res.objective = res.report.tdpc + pb_.params.alpha * res.report.blocked;
    return res;
}

} // namespace detail

inline HeepResult heep_place(const Problem& pb)
{
    return detail::HeepRun(pb).run();
}

inline constexpr const char* heep_log_csv_header = "step,workload,source,blocked,cpu,mem,cpu_util,mem_util,candidates,fired";

inline void write_heep_log_csv(std::ostream& os, const std::vector<HeepDecision>& log)
{
    os << heep_log_csv_header << '\n';
    for (const auto& d : log) {
        os << d.step << ',' << d.workload << ',' << d.source << ',' << (d.blocked ? 1 : 0) << ',';
        if (d.cpu) os << *d.cpu;
        os << ',';
        if (d.mem) os << *d.mem;
        os << ',' << detail::fmt17(d.cpu_util) << ',' << detail::fmt17(d.mem_util) << ',' << d.candidates << ','
           << d.fired << '\n';
    }
}

} // namespace cdc
