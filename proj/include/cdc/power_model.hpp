#pragma once

/**
 * @file power_model.hpp
 * @brief Component power, fabric power and per-pair energy-per-bit tables.
 *
 * Units: traffic in Gb/s, energies in pJ/b, power in W. Gb/s x pJ/b = 1e-3 W.
 */

#include "cdc/dc_model.hpp"
#include "cdc/error.hpp"
#include "cdc/placement.hpp"
#include "cdc/workload.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cdc {

enum class FabricKind { Electrical, Hybrid, Optical };

inline std::string_view to_string(FabricKind k) noexcept
{
    switch (k) {
    case FabricKind::Electrical: return "electrical";
    case FabricKind::Hybrid: return "hybrid";
    case FabricKind::Optical: return "optical";
    }
    return "?";
}

inline FabricKind fabric_kind_from_string(std::string_view s)
{
    if (s == "electrical" || s == "Electrical") return FabricKind::Electrical;
    if (s == "hybrid" || s == "Hybrid") return FabricKind::Hybrid;
    if (s == "optical" || s == "Optical") return FabricKind::Optical;
    throw config_error("unknown fabric kind '" + std::string(s) + "'");
}

inline constexpr double gbps_pj_to_watt = 1e-3;

struct FabricParams
{
    FabricKind kind = FabricKind::Optical;
    double es_idle_power = 312.0;              ///< W
    double es_peak_power = 493.0;              ///< W
    double es_energy_per_bit = 181.0 / 6.4;    ///< pJ/b, dynamic range over 6.4 Tb/s
    double wss_power = 50.0;                   ///< W
    double oxc_power = 75.0;                   ///< W
    int aggregation_switches = 1;              ///< A
    int interpod_crossconnects = 1;            ///< B
    double on_board = 0.5;                     ///< pJ/b
    double rack_backplane = 1.0;               ///< pJ/b
    double inter_rack = 1.0;                   ///< pJ/b
    double inter_dc = 10.0;                    ///< pJ/b
    int ns_aggregation_hops = 1;               ///< electrical aggregation stages on the north-south path

    /// The per-bit value as printed in the component table, kept as an override.
    static constexpr double table_es_energy_per_bit = 0.028;

    static FabricParams defaults(FabricKind k)
    {
        FabricParams f;
        f.kind = k;
        return f;
    }

    void validate() const
    {
        for (double v : {es_idle_power, es_peak_power, wss_power, oxc_power})
            if (!(v >= 0.0)) throw config_error("fabric powers must be >= 0");
        for (double v : {es_energy_per_bit, on_board, rack_backplane, inter_rack, inter_dc})
            if (!(v >= 0.0)) throw config_error("fabric energies must be >= 0");
        if (aggregation_switches < 1 || interpod_crossconnects < 1)
            throw config_error("aggregation switches and inter-pod cross-connects must be >= 1");
        if (ns_aggregation_hops < 0) throw config_error("north-south aggregation hops must be >= 0");
    }
};

/// Electrical switches crossed on a path of the given relation.
inline int switches_crossed(FabricKind k, LatencyClass rel) noexcept
{
    if (k == FabricKind::Optical || rel == LatencyClass::SameNode) return 0;
    if (k == FabricKind::Hybrid) return rel == LatencyClass::SameRack ? 1 : 2;
    switch (rel) {
    case LatencyClass::SameRack: return 1;
    case LatencyClass::SamePod: return 3;
    default: return 4;
    }
}

/// Interface energy of a path of the given relation.
inline double interface_energy(const FabricParams& f, LatencyClass rel) noexcept
{
    switch (rel) {
    case LatencyClass::SameNode: return f.on_board;
    case LatencyClass::SameRack: return 2 * f.on_board + f.rack_backplane;
    case LatencyClass::SamePod: return 2 * f.on_board + 2 * f.rack_backplane + f.inter_rack;
    case LatencyClass::SameDc: return 2 * f.on_board + 2 * f.rack_backplane + 2 * f.inter_rack;
    }
    return 0.0;
}

inline double path_energy(const FabricParams& f, LatencyClass rel) noexcept
{
    return interface_energy(f, rel) + switches_crossed(f.kind, rel) * f.es_energy_per_bit;
}

/// Energy per bit of traffic leaving the DC from any component.
inline double north_south_energy(const FabricParams& f) noexcept
{
    const double iface = f.on_board + f.rack_backplane + f.inter_rack + f.inter_dc;
    int sw = 0;
    if (f.kind == FabricKind::Electrical) sw = 1 + f.ns_aggregation_hops;
    else if (f.kind == FabricKind::Hybrid) sw = 1;
    return iface + sw * f.es_energy_per_bit;
}

/// Energy per bit (pJ/b) per ordered component pair and traffic role.
class PairEnergyTable
{
public:
    PairEnergyTable() = default;
    PairEnergyTable(int ncpu, int nmem, std::vector<double> up, std::vector<double> down,
                    std::vector<double> shuffle, double ns, std::array<double, 4> by_relation)
      : ncpu_(ncpu), nmem_(nmem), up_(std::move(up)), down_(std::move(down)),
        shuffle_(std::move(shuffle)), ns_(ns), by_relation_(by_relation)
    {}

    double uplink(int cpu, int mem) const { return up_.at(idx(cpu, ncpu_, mem, nmem_)); }
    double downlink(int mem, int cpu) const { return down_.at(idx(mem, nmem_, cpu, ncpu_)); }
    double shuffle(int x, int y) const { return shuffle_.at(idx(x, nmem_, y, nmem_)); }
    double north_south() const noexcept { return ns_; }
    double by_relation(LatencyClass rel) const noexcept { return by_relation_[static_cast<std::size_t>(to_int(rel) - 1)]; }
    int num_cpus() const noexcept { return ncpu_; }
    int num_mems() const noexcept { return nmem_; }

private:
    static std::size_t idx(int a, int na, int b, int nb)
    {
        if (a < 0 || a >= na || b < 0 || b >= nb) throw lookup_error("pair energy lookup out of range");
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b);
    }

    int ncpu_ = 0, nmem_ = 0;
    std::vector<double> up_, down_, shuffle_;
    double ns_ = 0.0;
    std::array<double, 4> by_relation_{};
};

inline PairEnergyTable compute_pair_energy_table(const DcLayout& layout, const FabricParams& fabric)
{
    fabric.validate();
    std::array<double, 4> rel{};
    for (int r = 1; r <= 4; ++r) rel[static_cast<std::size_t>(r - 1)] = path_energy(fabric, latency_from_int(r));
    const int nc = layout.num_cpus(), nm = layout.num_mems();
    std::vector<double> up(static_cast<std::size_t>(nc * nm)), down(static_cast<std::size_t>(nm * nc)),
        sh(static_cast<std::size_t>(nm * nm));
    for (int c = 0; c < nc; ++c)
        for (int m = 0; m < nm; ++m) {
            const double e = rel[static_cast<std::size_t>(to_int(latency_class(layout, c, m)) - 1)];
            up[static_cast<std::size_t>(c * nm + m)] = e;
            down[static_cast<std::size_t>(m * nc + c)] = e;
        }
    for (int x = 0; x < nm; ++x)
        for (int y = 0; y < nm; ++y) {
            const auto r = layout.relation(ResourceKind::Memory, x, ResourceKind::Memory, y);
            sh[static_cast<std::size_t>(x * nm + y)] = rel[static_cast<std::size_t>(to_int(r) - 1)];
        }
    return {nc, nm, std::move(up), std::move(down), std::move(sh), north_south_energy(fabric), rel};
}

/// Fixed switch power for the given activity. Nothing is drawn while no rack is active.
inline double static_network_power(const FabricParams& f, int nar, int nap)
{
    if (nar < 0 || nap < 0) throw contract_error("active rack/pod counts must be >= 0");
    if (nar == 0 && nap == 0) return 0.0;
    switch (f.kind) {
    case FabricKind::Electrical: return (nar + f.aggregation_switches) * f.es_idle_power;
    case FabricKind::Hybrid: return nar * f.es_idle_power + (nap + f.interpod_crossconnects) * f.oxc_power;
    case FabricKind::Optical: return nar * f.wss_power + (nap + f.interpod_crossconnects) * f.oxc_power;
    }
    return 0.0;
}

namespace detail {

inline void check_sizes(const DcLayout& layout, const Placement& p, const std::vector<Workload>& ws)
{
    if (p.num_workloads() != ws.size()) throw integrity_error("placement and workload list differ in size");
    for (std::size_t w = 0; w < ws.size(); ++w) {
        if (p.wcl[w] && (*p.wcl[w] < 0 || *p.wcl[w] >= layout.num_cpus()))
            throw integrity_error("assignment references unknown cpu " + std::to_string(*p.wcl[w]));
        if (p.wml[w] && (*p.wml[w] < 0 || *p.wml[w] >= layout.num_mems()))
            throw integrity_error("assignment references unknown memory " + std::to_string(*p.wml[w]));
    }
}

inline double component_power(const DcLayout& layout, ResourceKind k, const Placement& p,
                              const std::vector<Workload>& ws)
{
    detail::check_sizes(layout, p, ws);
    const int n = layout.num_components(k);
    std::vector<double> load(static_cast<std::size_t>(n), 0.0);
    std::vector<char> active(static_cast<std::size_t>(n), 0);
    const auto& map = k == ResourceKind::Cpu ? p.wcl : p.wml;
    for (std::size_t w = 0; w < ws.size(); ++w)
        if (map[w]) {
            const auto j = static_cast<std::size_t>(*map[w]);
            active[j] = 1;
            load[j] += k == ResourceKind::Cpu ? ws[w].wc : ws[w].wm;
        }
    // summed in sorted order so placements that differ by a swap of equal components agree bit for bit
    std::vector<double> terms;
    for (int j = 0; j < n; ++j)
        if (active[static_cast<std::size_t>(j)]) {
            const auto& cls = layout.component_class(k, j);
            terms.push_back(cls.idle_power() + cls.power_factor() * load[static_cast<std::size_t>(j)]);
        }
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

} // namespace detail

inline double tcpc(const DcLayout& layout, const Placement& p, const std::vector<Workload>& ws)
{
    return detail::component_power(layout, ResourceKind::Cpu, p, ws);
}

inline double tmpc(const DcLayout& layout, const Placement& p, const std::vector<Workload>& ws)
{
    return detail::component_power(layout, ResourceKind::Memory, p, ws);
}

/// Traffic-proportional part of the network power.
inline double tnpc_dynamic(const PairEnergyTable& table, const Placement& p, const std::vector<Workload>& ws,
                           const ShuffleMatrix& shuffle)
{
    double pj = 0.0;
    for (std::size_t w = 0; w < ws.size(); ++w) {
        if (!p.wcl[w] || !p.wml[w]) continue;
        const auto& wl = ws[w];
        pj += table.uplink(*p.wcl[w], *p.wml[w]) * wl.tcm_up + table.downlink(*p.wml[w], *p.wcl[w]) * wl.tcm_down;
        pj += table.north_south() * (wl.tci_up + wl.tci_down + wl.tri_up + wl.tri_down);
    }
    for (const auto& [key, gbps] : shuffle.entries()) {
        const auto& x = p.wml.at(static_cast<std::size_t>(key.first));
        const auto& y = p.wml.at(static_cast<std::size_t>(key.second));
        if (x && y && *x != *y) pj += table.shuffle(*x, *y) * gbps;
    }
    return pj * gbps_pj_to_watt;
}

inline double tnpc(const DcLayout& layout, const FabricParams& fabric, const PairEnergyTable& table,
                   const Placement& p, const std::vector<Workload>& ws, const ShuffleMatrix& shuffle)
{
    detail::check_sizes(layout, p, ws);
    return tnpc_dynamic(table, p, ws, shuffle) + static_network_power(fabric, p.nar, p.nap);
}

inline double tnpc(const DcLayout& layout, const FabricParams& fabric, const Placement& p,
                   const std::vector<Workload>& ws, const ShuffleMatrix& shuffle)
{
    return tnpc(layout, fabric, compute_pair_energy_table(layout, fabric), p, ws, shuffle);
}

struct PowerReport
{
    double tcpc = 0.0;
    double tmpc = 0.0;
    double tnpc = 0.0;
    double tdpc = 0.0;
    int blocked = 0;
    int active_cpu = 0;
    int active_mem = 0;
    int nar = 0;
    int nap = 0;
    double avg_cpu_util = 0.0;
    double avg_mem_util = 0.0;
};

inline PowerReport report(const DcLayout& layout, const FabricParams& fabric, const PairEnergyTable& table,
                          const Placement& p, const std::vector<Workload>& ws, const ShuffleMatrix& shuffle)
{
    PowerReport r;
    r.tcpc = tcpc(layout, p, ws);
    r.tmpc = tmpc(layout, p, ws);
    r.tnpc = tnpc(layout, fabric, table, p, ws, shuffle);
    r.tdpc = r.tcpc + r.tmpc + r.tnpc;
    r.nar = p.nar;
    r.nap = p.nap;

    std::vector<double> cl(static_cast<std::size_t>(layout.num_cpus()), 0.0);
    std::vector<double> ml(static_cast<std::size_t>(layout.num_mems()), 0.0);
    std::vector<char> ca(cl.size(), 0), ma(ml.size(), 0);
    for (std::size_t w = 0; w < ws.size(); ++w) {
        if (!p.wcl[w] || !p.wml[w]) ++r.blocked;
        if (p.wcl[w]) {
            cl[static_cast<std::size_t>(*p.wcl[w])] += ws[w].wc;
            ca[static_cast<std::size_t>(*p.wcl[w])] = 1;
        }
        if (p.wml[w]) {
            ml[static_cast<std::size_t>(*p.wml[w])] += ws[w].wm;
            ma[static_cast<std::size_t>(*p.wml[w])] = 1;
        }
    }
    double su = 0.0;
    for (int c = 0; c < layout.num_cpus(); ++c)
        if (ca[static_cast<std::size_t>(c)]) {
            ++r.active_cpu;
            su += cl[static_cast<std::size_t>(c)] / layout.cpu_class(c).capacity;
        }
    r.avg_cpu_util = r.active_cpu ? su / r.active_cpu : 0.0;
    su = 0.0;
    for (int m = 0; m < layout.num_mems(); ++m)
        if (ma[static_cast<std::size_t>(m)]) {
            ++r.active_mem;
            su += ml[static_cast<std::size_t>(m)] / layout.mem_class(m).capacity;
        }
    r.avg_mem_util = r.active_mem ? su / r.active_mem : 0.0;
    return r;
}

inline PowerReport report(const DcLayout& layout, const FabricParams& fabric, const Placement& p,
                          const std::vector<Workload>& ws, const ShuffleMatrix& shuffle)
{
    return report(layout, fabric, compute_pair_energy_table(layout, fabric), p, ws, shuffle);
}

inline constexpr const char* power_report_csv_header =
    "tcpc,tmpc,tnpc,tdpc,blocked,active_cpu,active_mem,nar,nap,avg_cpu_util,avg_mem_util";

inline void write_csv_row(std::ostream& os, const PowerReport& r)
{
    using detail::fmt17;
    os << fmt17(r.tcpc) << ',' << fmt17(r.tmpc) << ',' << fmt17(r.tnpc) << ',' << fmt17(r.tdpc) << ','
       << r.blocked << ',' << r.active_cpu << ',' << r.active_mem << ',' << r.nar << ',' << r.nap << ','
       << fmt17(r.avg_cpu_util) << ',' << fmt17(r.avg_mem_util);
}

} // namespace cdc
