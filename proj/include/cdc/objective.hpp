#pragma once

/**
 * @file objective.hpp
 * @brief Total power plus blocking penalty, and placement serialization.
 */

#include "cdc/placement.hpp"
#include "cdc/power_model.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace cdc {

struct ObjectiveParams
{
    double alpha = 2000.0; ///< W per blocked workload
    double big_q = 100000.0;
    double big_g = 1000.0;

    void validate() const
    {
        if (!(alpha > 0.0)) throw config_error("alpha must be > 0");
        if (!(big_q > 0.0) || !(big_g > 0.0)) throw config_error("big-M values must be > 0");
    }
};

/// Everything needed to evaluate or optimize one placement problem.
struct Problem
{
    DcLayout layout;
    FabricParams fabric;
    WorkloadSet workloads;
    DcKind dc_kind = DcKind::Traditional;
    ObjectiveParams params;

    const std::vector<Workload>& wl() const noexcept { return workloads.workloads; }
    const ShuffleMatrix& shuffle() const noexcept { return workloads.shuffle; }
};

inline Placement derive(const Problem& pb, std::vector<std::optional<int>> wcl, std::vector<std::optional<int>> wml)
{
    return Placement::derive(pb.layout, std::move(wcl), std::move(wml), &pb.shuffle(), &pb.wl());
}

inline std::vector<Violation> check(const Placement& p, const Problem& pb)
{
    return check(p, pb.layout, pb.workloads, pb.dc_kind);
}

/// Evaluation without the feasibility precondition, for callers that already know it holds.
inline double objective_unchecked(const Problem& pb, const PairEnergyTable& table, const Placement& p)
{
    const auto r = report(pb.layout, pb.fabric, table, p, pb.wl(), pb.shuffle());
    return r.tdpc + pb.params.alpha * r.blocked;
}

inline double objective(const Problem& pb, const PairEnergyTable& table, const Placement& p)
{
    const auto v = check(p, pb);
    if (!v.empty()) throw contract_error("objective of infeasible placement: " + to_string(v.front()));
    return objective_unchecked(pb, table, p);
}

inline double objective(const Problem& pb, const Placement& p)
{
    return objective(pb, compute_pair_energy_table(pb.layout, pb.fabric), p);
}

inline constexpr const char* placement_csv_header = "workload,cpu,mem";

/// One row per workload; blocked demands are written as empty cells.
inline void write_placement_csv(std::ostream& os, const Placement& p)
{
    os << placement_csv_header << '\n';
    for (std::size_t w = 0; w < p.num_workloads(); ++w) {
        os << w << ',';
        if (p.wcl[w]) os << *p.wcl[w];
        os << ',';
        if (p.wml[w]) os << *p.wml[w];
        os << '\n';
    }
}

inline std::pair<std::vector<std::optional<int>>, std::vector<std::optional<int>>> read_placement_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != placement_csv_header)
        throw config_error("placement csv: bad header");
    std::vector<std::optional<int>> wcl, wml;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = detail::split_csv(line);
        if (f.size() != 3) throw config_error("placement csv: expected 3 columns in '" + line + "'");
        if (detail::parse_int(f[0]) != static_cast<int>(wcl.size()))
            throw config_error("placement csv: workload rows must be dense and ordered");
        wcl.push_back(f[1].empty() ? std::nullopt : std::optional<int>(detail::parse_int(f[1])));
        wml.push_back(f[2].empty() ? std::nullopt : std::optional<int>(detail::parse_int(f[2])));
    }
    return {std::move(wcl), std::move(wml)};
}

} // namespace cdc
