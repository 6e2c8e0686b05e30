#pragma once

/**
 * @file placement.hpp
 * @brief Assignment of workload demands to components, derived activity, and constraint checks.
 */

#include "cdc/dc_model.hpp"
#include "cdc/error.hpp"
#include "cdc/workload.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cdc {

/// Y_wcm = 1 entry: workload w composed over CPU c and memory m.
struct PairUse
{
    int workload;
    int cpu;
    int mem;
};

/// gamma entry: shuffle source s and destination d hosted on memories x and y.
struct ShufflePairUse
{
    int src;
    int dst;
    int x;
    int y;
};

/**
 * A full assignment (WCL / WML) plus every quantity derived from it. Construct with derive();
 * derived fields are never edited independently of the assignment maps.
 */
struct Placement
{
    std::vector<std::optional<int>> wcl; ///< workload -> CPU component
    std::vector<std::optional<int>> wml; ///< workload -> memory component

    std::vector<char> served; ///< S_w
    std::vector<double> cpu_load, mem_load;
    std::vector<int> cpu_hosted, mem_hosted; ///< demands hosted per component
    std::vector<char> rack_active, pod_active;
    int nar = 0;
    int nap = 0;
    std::vector<PairUse> pairs;
    std::vector<ShufflePairUse> shuffle_pairs;
    std::vector<std::optional<int>> cpu_rack, mem_rack; ///< H_wr / F_wr as the hosting rack
    std::vector<std::optional<int>> cpu_pod, mem_pod;   ///< A_wp / B_wp as the hosting pod

    std::size_t num_workloads() const noexcept { return wcl.size(); }
    bool is_served(int w) const { return served.at(static_cast<std::size_t>(w)) != 0; }
    bool is_blocked(int w) const { return !is_served(w); }
    bool cpu_active(int c) const { return cpu_hosted.at(static_cast<std::size_t>(c)) > 0; }
    bool mem_active(int m) const { return mem_hosted.at(static_cast<std::size_t>(m)) > 0; }

    int num_blocked() const noexcept
    {
        int n = 0;
        for (char s : served) n += s ? 0 : 1;
        return n;
    }
    int num_active_cpus() const noexcept
    {
        int n = 0;
        for (int h : cpu_hosted) n += h > 0;
        return n;
    }
    int num_active_mems() const noexcept
    {
        int n = 0;
        for (int h : mem_hosted) n += h > 0;
        return n;
    }

    static Placement derive(const DcLayout& layout, std::vector<std::optional<int>> wcl,
                            std::vector<std::optional<int>> wml, const ShuffleMatrix* shuffle = nullptr,
                            const std::vector<Workload>* workloads = nullptr);

    /// All workloads unassigned.
    static Placement empty(const DcLayout& layout, std::size_t num_workloads)
    {
        return derive(layout, std::vector<std::optional<int>>(num_workloads),
                      std::vector<std::optional<int>>(num_workloads));
    }
};

/**
 * Recomputes every derived field. Loads are only filled when `workloads` is given
 * (demands live there); activity only depends on the maps.
 */
inline Placement Placement::derive(const DcLayout& layout, std::vector<std::optional<int>> wcl,
                                   std::vector<std::optional<int>> wml, const ShuffleMatrix* shuffle,
                                   const std::vector<Workload>* workloads)
{
    if (wcl.size() != wml.size()) throw integrity_error("cpu and memory maps differ in size");
    if (workloads && workloads->size() != wcl.size())
        throw integrity_error("placement maps and workload list differ in size");

    Placement p;
    const std::size_t n = wcl.size();
    p.wcl = std::move(wcl);
    p.wml = std::move(wml);
    p.served.assign(n, 0);
    p.cpu_load.assign(static_cast<std::size_t>(layout.num_cpus()), 0.0);
    p.mem_load.assign(static_cast<std::size_t>(layout.num_mems()), 0.0);
    p.cpu_hosted.assign(static_cast<std::size_t>(layout.num_cpus()), 0);
    p.mem_hosted.assign(static_cast<std::size_t>(layout.num_mems()), 0);
    p.rack_active.assign(static_cast<std::size_t>(layout.num_racks()), 0);
    p.pod_active.assign(static_cast<std::size_t>(layout.num_pods()), 0);
    p.cpu_rack.assign(n, std::nullopt);
    p.mem_rack.assign(n, std::nullopt);
    p.cpu_pod.assign(n, std::nullopt);
    p.mem_pod.assign(n, std::nullopt);

    for (std::size_t w = 0; w < n; ++w) {
        if (const auto& c = p.wcl[w]) {
            if (*c < 0 || *c >= layout.num_cpus())
                throw integrity_error("workload " + std::to_string(w) + " assigned to unknown cpu " + std::to_string(*c));
            const auto uc = static_cast<std::size_t>(*c);
            ++p.cpu_hosted[uc];
            if (workloads) p.cpu_load[uc] += (*workloads)[w].wc;
            const int r = layout.rack_of(ResourceKind::Cpu, *c);
            p.cpu_rack[w] = r;
            p.cpu_pod[w] = layout.pod_of_rack(r);
            p.rack_active[static_cast<std::size_t>(r)] = 1;
            p.pod_active[static_cast<std::size_t>(layout.pod_of_rack(r))] = 1;
        }
        if (const auto& m = p.wml[w]) {
            if (*m < 0 || *m >= layout.num_mems())
                throw integrity_error("workload " + std::to_string(w) + " assigned to unknown memory " + std::to_string(*m));
            const auto um = static_cast<std::size_t>(*m);
            ++p.mem_hosted[um];
            if (workloads) p.mem_load[um] += (*workloads)[w].wm;
            const int r = layout.rack_of(ResourceKind::Memory, *m);
            p.mem_rack[w] = r;
            p.mem_pod[w] = layout.pod_of_rack(r);
            p.rack_active[static_cast<std::size_t>(r)] = 1;
            p.pod_active[static_cast<std::size_t>(layout.pod_of_rack(r))] = 1;
        }
        if (p.wcl[w] && p.wml[w]) {
            p.served[w] = 1;
            p.pairs.push_back({static_cast<int>(w), *p.wcl[w], *p.wml[w]});
        }
    }
    for (char a : p.rack_active) p.nar += a;
    for (char a : p.pod_active) p.nap += a;

    if (shuffle)
        for (const auto& [key, gbps] : shuffle->entries()) {
            const auto [s, d] = key;
            if (s < 0 || d < 0 || static_cast<std::size_t>(s) >= n || static_cast<std::size_t>(d) >= n)
                throw integrity_error("shuffle entry references unknown workload");
            const auto& x = p.wml[static_cast<std::size_t>(s)];
            const auto& y = p.wml[static_cast<std::size_t>(d)];
            if (x && y) p.shuffle_pairs.push_back({s, d, *x, *y});
            (void)gbps;
        }
    return p;
}

/// One failed constraint instance. `constraint` is the numeric id also used for LP export rows.
struct Violation
{
    int constraint = 0;
    std::vector<int> entities;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string to_string(const Violation& v)
{
    std::ostringstream os;
    os << "(" << v.constraint << ") " << v.message << " [";
    for (std::size_t i = 0; i < v.entities.size(); ++i) os << (i ? "," : "") << v.entities[i];
    os << "] lhs=" << v.lhs << " rhs=" << v.rhs;
    return os.str();
}

inline constexpr double capacity_tolerance = 1e-9;

/**
 * Lists every violated constraint: capacities (14, 15), co-serving (18), latency bound (31) and
 * integrated all-or-nothing serving (36, 37). Single hosting (16, 17) is structural here, and the
 * activity and linearization rows hold by construction of derive().
 */
inline std::vector<Violation> check(const Placement& p, const DcLayout& layout, const WorkloadSet& ws,
                                    DcKind dc_kind)
{
    std::vector<Violation> out;
    const auto& w = ws.workloads;
    if (p.num_workloads() != w.size()) {
        out.push_back({0, {}, static_cast<double>(p.num_workloads()), static_cast<double>(w.size()),
                       "placement and workload set differ in size"});
        return out;
    }

    std::vector<double> cl(static_cast<std::size_t>(layout.num_cpus()), 0.0);
    std::vector<double> ml(static_cast<std::size_t>(layout.num_mems()), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (p.wcl[i]) cl[static_cast<std::size_t>(*p.wcl[i])] += w[i].wc;
        if (p.wml[i]) ml[static_cast<std::size_t>(*p.wml[i])] += w[i].wm;
    }
    for (int c = 0; c < layout.num_cpus(); ++c) {
        const double cap = layout.cpu_class(c).capacity;
        if (cl[static_cast<std::size_t>(c)] > cap + capacity_tolerance)
            out.push_back({14, {c}, cl[static_cast<std::size_t>(c)], cap, "cpu capacity exceeded"});
    }
    for (int m = 0; m < layout.num_mems(); ++m) {
        const double cap = layout.mem_class(m).capacity;
        if (ml[static_cast<std::size_t>(m)] > cap + capacity_tolerance)
            out.push_back({15, {m}, ml[static_cast<std::size_t>(m)], cap, "memory capacity exceeded"});
    }

    const LatencyClass kind_bound = max_latency_for(dc_kind);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const int id = static_cast<int>(i);
        const double sc = p.wcl[i] ? 1.0 : 0.0, sm = p.wml[i] ? 1.0 : 0.0;
        if (sc != sm) out.push_back({18, {id}, sc, sm, "cpu and memory demands must be served together"});
        if (p.wcl[i] && p.wml[i]) {
            const auto lat = latency_class(layout, *p.wcl[i], *p.wml[i]);
            const int bound = std::min(to_int(kind_bound), to_int(w[i].max_lat));
            if (to_int(lat) > bound)
                out.push_back({31, {id, *p.wcl[i], *p.wml[i]}, static_cast<double>(to_int(lat)),
                               static_cast<double>(bound), "cpu-memory latency above bound"});
        }
    }

    for (const auto& iw : ws.integrated) {
        double cpu_served = 0.0, mem_served = 0.0;
        int n_served = 0;
        for (int m : iw.members) {
            const auto um = static_cast<std::size_t>(m);
            if (p.wcl[um]) cpu_served += w[um].wc;
            if (p.wml[um]) mem_served += w[um].wm;
            n_served += p.is_served(m) ? 1 : 0;
        }
        const bool all = n_served == static_cast<int>(iw.members.size());
        const double is = all ? 1.0 : 0.0;
        const double tol = 1e-9 * std::max(1.0, iw.ci);
        if (n_served != 0 && !all)
            out.push_back({36, {iw.id}, cpu_served, iw.ci * is, "integrated workload partially served"});
        else if (std::abs(cpu_served - iw.ci * is) > tol)
            out.push_back({36, {iw.id}, cpu_served, iw.ci * is, "integrated cpu demand mismatch"});
        if (std::abs(mem_served - iw.mi * is) > 1e-9 * std::max(1.0, iw.mi) && (n_served == 0 || all))
            out.push_back({37, {iw.id}, mem_served, iw.mi * is, "integrated memory demand mismatch"});
        else if (n_served != 0 && !all)
            out.push_back({37, {iw.id}, mem_served, iw.mi * is, "integrated workload partially served"});
    }
    return out;
}

} // namespace cdc
