#pragma once

/**
 * @file workload.hpp
 * @brief Monolithic and micro-service workload sets with group-structured shuffle traffic.
 *
 * Demands: CPU in GHz, memory in GB. Traffic: Gb/s.
 */

#include "cdc/dc_model.hpp"
#include "cdc/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cdc {

enum class WorkloadClass { CpuIntensive, MemIntensive };

enum class ShufflePattern { OneToOne, OneToMany, ManyToMany, Mixed };

enum class ShuffleIntensity { None, NonIntensive, Intensive };

inline std::string_view to_string(WorkloadClass c) noexcept
{
    return c == WorkloadClass::CpuIntensive ? "cpu-intensive" : "mem-intensive";
}

inline WorkloadClass workload_class_from_string(std::string_view s)
{
    if (s == "cpu-intensive" || s == "cpu" || s == "CpuIntensive") return WorkloadClass::CpuIntensive;
    if (s == "mem-intensive" || s == "mem" || s == "memory" || s == "MemIntensive")
        return WorkloadClass::MemIntensive;
    throw config_error("unknown workload class '" + std::string(s) + "'");
}

inline std::string_view to_string(ShufflePattern p) noexcept
{
    switch (p) {
    case ShufflePattern::OneToOne: return "one-to-one";
    case ShufflePattern::OneToMany: return "one-to-many";
    case ShufflePattern::ManyToMany: return "many-to-many";
    case ShufflePattern::Mixed: return "mixed";
    }
    return "?";
}

inline ShufflePattern shuffle_pattern_from_string(std::string_view s)
{
    if (s == "one-to-one") return ShufflePattern::OneToOne;
    if (s == "one-to-many") return ShufflePattern::OneToMany;
    if (s == "many-to-many") return ShufflePattern::ManyToMany;
    if (s == "mixed") return ShufflePattern::Mixed;
    throw config_error("unknown shuffle pattern '" + std::string(s) + "'");
}

inline std::string_view to_string(ShuffleIntensity i) noexcept
{
    switch (i) {
    case ShuffleIntensity::None: return "none";
    case ShuffleIntensity::NonIntensive: return "non-intensive";
    case ShuffleIntensity::Intensive: return "intensive";
    }
    return "?";
}

inline ShuffleIntensity shuffle_intensity_from_string(std::string_view s)
{
    if (s == "none") return ShuffleIntensity::None;
    if (s == "non-intensive") return ShuffleIntensity::NonIntensive;
    if (s == "intensive") return ShuffleIntensity::Intensive;
    throw config_error("unknown shuffle intensity '" + std::string(s) + "'");
}

struct Workload
{
    int id = 0;
    WorkloadClass cls = WorkloadClass::CpuIntensive;
    double wc = 0.0; ///< GHz
    double wm = 0.0; ///< GB
    double tcm_up = 0.0, tcm_down = 0.0;
    double tci_up = 0.0, tci_down = 0.0;
    double tri_up = 0.0, tri_down = 0.0;
    int group_id = 0;
    std::optional<int> parent_integrated;
    LatencyClass max_lat = LatencyClass::SameDc;

    double cpu_mem_traffic() const noexcept { return tcm_up + tcm_down; }
    double cpu_io_traffic() const noexcept { return tci_up + tci_down; }
    double mem_io_traffic() const noexcept { return tri_up + tri_down; }

    void validate() const
    {
        if (!(wc > 0.0) || !(wm > 0.0))
            throw config_error("workload " + std::to_string(id) + ": demands must be > 0");
        for (double t : {tcm_up, tcm_down, tci_up, tci_down, tri_up, tri_down})
            if (!(t >= 0.0)) throw config_error("workload " + std::to_string(id) + ": traffic must be >= 0");
    }

    friend bool operator==(const Workload&, const Workload&) = default;
};

/// Inter-memory traffic (Gb/s) between workloads of the same group, keyed by (source, destination).
class ShuffleMatrix
{
public:
    using Key = std::pair<int, int>;

    void set(int src, int dst, double gbps)
    {
        if (src == dst) throw config_error("shuffle traffic needs two distinct workloads");
        if (!(gbps >= 0.0)) throw config_error("shuffle traffic must be >= 0");
        entries_[{src, dst}] = gbps;
    }

    double get(int src, int dst) const
    {
        auto it = entries_.find({src, dst});
        return it == entries_.end() ? 0.0 : it->second;
    }

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::map<Key, double>& entries() const noexcept { return entries_; }

    friend bool operator==(const ShuffleMatrix&, const ShuffleMatrix&) = default;

private:
    std::map<Key, double> entries_;
};

struct IntegratedWorkload
{
    int id = 0;
    double ci = 0.0; ///< GHz
    double mi = 0.0; ///< GB
    std::vector<int> members;

    friend bool operator==(const IntegratedWorkload&, const IntegratedWorkload&) = default;
};

/// Everything a placement is evaluated against besides the layout.
struct WorkloadSet
{
    std::vector<Workload> workloads;
    ShuffleMatrix shuffle;
    std::vector<IntegratedWorkload> integrated; ///< empty for monolithic sets

    std::size_t size() const noexcept { return workloads.size(); }

    void validate() const
    {
        for (std::size_t i = 0; i < workloads.size(); ++i) {
            if (workloads[i].id != static_cast<int>(i))
                throw config_error("workload ids must be dense and ordered");
            workloads[i].validate();
        }
        const int n = static_cast<int>(workloads.size());
        for (const auto& [key, v] : shuffle.entries()) {
            if (key.first < 0 || key.first >= n || key.second < 0 || key.second >= n)
                throw lookup_error("shuffle entry references unknown workload");
            (void)v;
        }
        for (const auto& iw : integrated)
            for (int m : iw.members)
                if (m < 0 || m >= n) throw lookup_error("integrated workload references unknown member");
    }
};

/// Demand and traffic ranges for one workload class.
struct DemandProfile
{
    double wc_lo, wc_hi; ///< GHz
    double wm_lo, wm_hi; ///< GB
};

inline DemandProfile demand_profile(WorkloadClass c) noexcept
{
    return c == WorkloadClass::CpuIntensive ? DemandProfile{1.0, 3.0, 4.0, 8.0}
                                            : DemandProfile{0.5, 2.0, 6.0, 24.0};
}

struct TrafficProfile
{
    double tcm_up = 120.0, tcm_down = 100.0;
    double tci_up = 2.0, tci_down = 1.0;
    double tri_up = 2.0, tri_down = 1.0;
};

/**
 * Seeded source of uniform doubles. The engine is std::mt19937_64 (bit-exact by the standard);
 * the real mapping is done here rather than via std::uniform_real_distribution, whose output
 * is implementation-defined.
 */
class Rng
{
public:
    static constexpr const char* name = "mt19937_64/u53-v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

struct GenerateOptions
{
    int count = 0;
    WorkloadClass cls = WorkloadClass::CpuIntensive;
    int group_size = 5;
    ShufflePattern pattern = ShufflePattern::ManyToMany;
    ShuffleIntensity intensity = ShuffleIntensity::NonIntensive;
    std::uint64_t seed = 1;
    TrafficProfile traffic{};
};

namespace detail {

inline std::vector<std::pair<int, int>> pattern_pairs(ShufflePattern pattern,
                                                      const std::vector<int>& members, Rng& rng)
{
    std::vector<std::pair<int, int>> pairs;
    const std::size_t n = members.size();
    switch (pattern) {
    case ShufflePattern::OneToOne:
        for (std::size_t i = 0; i + 1 < n; i += 2) pairs.emplace_back(members[i], members[i + 1]);
        break;
    case ShufflePattern::OneToMany:
        for (std::size_t i = 1; i < n; ++i) pairs.emplace_back(members[0], members[i]);
        break;
    case ShufflePattern::ManyToMany:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) pairs.emplace_back(members[i], members[j]);
        break;
    case ShufflePattern::Mixed:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rng.coin()) pairs.emplace_back(members[i], members[j]);
        break;
    }
    return pairs;
}

} // namespace detail

/**
 * Generates `count` workloads of one class. Workloads are grouped consecutively
 * (group g = ids [g*group_size, (g+1)*group_size)); shuffle entries are drawn only inside a group.
 * Identical options give bit-identical output.
 */
inline WorkloadSet generate(const GenerateOptions& opt)
{
    if (opt.count < 0) throw config_error("workload count must be >= 0");
    if (opt.group_size < 1) throw config_error("group size must be >= 1");

    Rng rng(opt.seed);
    const auto prof = demand_profile(opt.cls);
    WorkloadSet set;
    set.workloads.reserve(static_cast<std::size_t>(opt.count));
    for (int i = 0; i < opt.count; ++i) {
        Workload w;
        w.id = i;
        w.cls = opt.cls;
        w.wc = rng.uniform(prof.wc_lo, prof.wc_hi);
        w.wm = rng.uniform(prof.wm_lo, prof.wm_hi);
        w.tcm_up = opt.traffic.tcm_up;
        w.tcm_down = opt.traffic.tcm_down;
        w.tci_up = opt.traffic.tci_up;
        w.tci_down = opt.traffic.tci_down;
        w.tri_up = opt.traffic.tri_up;
        w.tri_down = opt.traffic.tri_down;
        w.group_id = i / opt.group_size;
        set.workloads.push_back(w);
    }

    if (opt.intensity == ShuffleIntensity::None) return set;
    const double lo = opt.intensity == ShuffleIntensity::Intensive ? 10.0 : 0.0;
    const double hi = opt.intensity == ShuffleIntensity::Intensive ? 70.0 : 10.0;
    for (int g = 0; g * opt.group_size < opt.count; ++g) {
        std::vector<int> members;
        for (int i = g * opt.group_size; i < std::min(opt.count, (g + 1) * opt.group_size); ++i)
            members.push_back(i);
        for (auto [s, d] : detail::pattern_pairs(opt.pattern, members, rng))
            set.shuffle.set(s, d, rng.uniform(lo, hi));
    }
    return set;
}

/**
 * Decouples each workload into `cpu_shares.size()` micro-services. Demands follow the share
 * vectors (the last member takes the remainder so sums are conserved); per-direction traffic
 * is divided equally. Shuffle traffic is not carried over.
 */
inline WorkloadSet split_to_microservices(const std::vector<Workload>& parents, int parts,
                                          const std::vector<double>& cpu_shares,
                                          const std::vector<double>& mem_shares)
{
    if (parts < 1) throw config_error("parts must be >= 1");
    if (static_cast<int>(cpu_shares.size()) != parts || static_cast<int>(mem_shares.size()) != parts)
        throw config_error("one cpu and one memory share per part is required");
    auto check_sum = [](const std::vector<double>& v, const char* what) {
        double s = 0.0;
        for (double x : v) {
            if (!(x > 0.0)) throw config_error(std::string(what) + " shares must be > 0");
            s += x;
        }
        if (std::abs(s - 1.0) > 1e-9) throw config_error(std::string(what) + " shares must sum to 1");
    };
    check_sum(cpu_shares, "cpu");
    check_sum(mem_shares, "memory");

    WorkloadSet out;
    const double k = static_cast<double>(parts);
    for (std::size_t i = 0; i < parents.size(); ++i) {
        const auto& p = parents[i];
        IntegratedWorkload iw;
        iw.id = static_cast<int>(i);
        double wc_used = 0.0, wm_used = 0.0;
        for (int j = 0; j < parts; ++j) {
            Workload m = p;
            m.id = static_cast<int>(out.workloads.size());
            m.parent_integrated = iw.id;
            const bool last = j == parts - 1;
            m.wc = last ? p.wc - wc_used : p.wc * cpu_shares[static_cast<std::size_t>(j)];
            m.wm = last ? p.wm - wm_used : p.wm * mem_shares[static_cast<std::size_t>(j)];
            wc_used += m.wc;
            wm_used += m.wm;
            m.tcm_up = p.tcm_up / k;
            m.tcm_down = p.tcm_down / k;
            m.tci_up = p.tci_up / k;
            m.tci_down = p.tci_down / k;
            m.tri_up = p.tri_up / k;
            m.tri_down = p.tri_down / k;
            iw.members.push_back(m.id);
            out.workloads.push_back(m);
        }
        iw.ci = wc_used;
        iw.mi = wm_used;
        out.integrated.push_back(std::move(iw));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flat-table serialization. Doubles are written with 17 significant digits so a
// loaded table replays bit-exactly.

inline constexpr const char* workload_csv_header =
    "id,class,wc,wm,tcm_up,tcm_down,tci_up,tci_down,tri_up,tri_down,group_id,parent_integrated,max_lat";

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_double(const std::string& s)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw config_error("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw config_error("malformed number '" + s + "'");
    }
}

inline int parse_int(const std::string& s)
{
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw config_error("malformed integer '" + s + "'");
    return v;
}

inline std::string fmt17(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace detail

inline void write_workloads_csv(std::ostream& os, const std::vector<Workload>& ws)
{
    using detail::fmt17;
    os << workload_csv_header << '\n';
    for (const auto& w : ws) {
        os << w.id << ',' << to_string(w.cls) << ',' << fmt17(w.wc) << ',' << fmt17(w.wm) << ','
           << fmt17(w.tcm_up) << ',' << fmt17(w.tcm_down) << ',' << fmt17(w.tci_up) << ','
           << fmt17(w.tci_down) << ',' << fmt17(w.tri_up) << ',' << fmt17(w.tri_down) << ','
           << w.group_id << ',';
        if (w.parent_integrated) os << *w.parent_integrated;
        os << ',' << to_int(w.max_lat) << '\n';
    }
}

inline std::vector<Workload> read_workloads_csv(std::istream& is)
{
    using namespace detail;
    std::string line;
    if (!std::getline(is, line) || line != workload_csv_header)
        throw config_error("workload table: unexpected header");
    std::vector<Workload> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 13) throw config_error("workload table: expected 13 columns");
        Workload w;
        w.id = parse_int(f[0]);
        w.cls = workload_class_from_string(f[1]);
        w.wc = parse_double(f[2]);
        w.wm = parse_double(f[3]);
        w.tcm_up = parse_double(f[4]);
        w.tcm_down = parse_double(f[5]);
        w.tci_up = parse_double(f[6]);
        w.tci_down = parse_double(f[7]);
        w.tri_up = parse_double(f[8]);
        w.tri_down = parse_double(f[9]);
        w.group_id = parse_int(f[10]);
        if (!f[11].empty()) w.parent_integrated = parse_int(f[11]);
        w.max_lat = latency_from_int(parse_int(f[12]));
        w.validate();
        out.push_back(w);
    }
    return out;
}

inline void write_shuffle_csv(std::ostream& os, const ShuffleMatrix& m)
{
    os << "src,dst,gbps\n";
    for (const auto& [k, v] : m.entries()) os << k.first << ',' << k.second << ',' << detail::fmt17(v) << '\n';
}

inline ShuffleMatrix read_shuffle_csv(std::istream& is)
{
    using namespace detail;
    std::string line;
    if (!std::getline(is, line) || line != "src,dst,gbps") throw config_error("shuffle table: unexpected header");
    ShuffleMatrix m;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 3) throw config_error("shuffle table: expected 3 columns");
        m.set(parse_int(f[0]), parse_int(f[1]), parse_double(f[2]));
    }
    return m;
}

/// Rebuilds integrated workloads from the parent links of a loaded micro-service table.
inline std::vector<IntegratedWorkload> integrated_from_members(const std::vector<Workload>& ws)
{
    std::map<int, IntegratedWorkload> by_id;
    for (const auto& w : ws) {
        if (!w.parent_integrated) continue;
        auto& iw = by_id[*w.parent_integrated];
        iw.id = *w.parent_integrated;
        iw.ci += w.wc;
        iw.mi += w.wm;
        iw.members.push_back(w.id);
    }
    std::vector<IntegratedWorkload> out;
    for (auto& [id, iw] : by_id) out.push_back(std::move(iw));
    return out;
}

} // namespace cdc
