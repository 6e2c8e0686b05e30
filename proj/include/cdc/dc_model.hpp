#pragma once

/**
 * @file dc_model.hpp
 * @brief Physical/logical layout of a composable data center.
 *
 * A layout is a strict containment tree DC -> pods -> racks -> nodes -> components.
 * CPU and memory components live in separate dense id spaces, numbered in
 * (pod, rack, node, slot) order; every tie-break elsewhere in the library relies
 * on that canonical order.
 */

#include "cdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdc {

enum class ResourceKind { Cpu, Memory };

enum class DcKind { Traditional, RackScale, PodScale, LogicalRackScale };

/// Inter-component latency abstraction: the smallest containment level shared by two components.
enum class LatencyClass : int { SameNode = 1, SameRack = 2, SamePod = 3, SameDc = 4 };

inline int to_int(LatencyClass l) noexcept { return static_cast<int>(l); }

inline LatencyClass latency_from_int(int v)
{
    if (v < 1 || v > 4)
        throw config_error("latency class must be in [1,4], got " + std::to_string(v));
    return static_cast<LatencyClass>(v);
}

inline std::string_view to_string(DcKind k) noexcept
{
    switch (k) {
    case DcKind::Traditional: return "traditional";
    case DcKind::RackScale: return "rack-scale";
    case DcKind::PodScale: return "pod-scale";
    case DcKind::LogicalRackScale: return "logical-rack-scale";
    }
    return "?";
}

inline DcKind dc_kind_from_string(std::string_view s)
{
    if (s == "traditional" || s == "Traditional") return DcKind::Traditional;
    if (s == "rack-scale" || s == "RackScale") return DcKind::RackScale;
    if (s == "pod-scale" || s == "PodScale") return DcKind::PodScale;
    if (s == "logical-rack-scale" || s == "LogicalRackScale") return DcKind::LogicalRackScale;
    throw config_error("unknown dc kind '" + std::string(s) + "'");
}

inline std::string_view to_string(ResourceKind k) noexcept
{
    return k == ResourceKind::Cpu ? "cpu" : "memory";
}

/// A CPU (capacity in GHz) or memory (capacity in GB) unit type with a linear load-power profile.
struct ComponentClass
{
    ResourceKind kind = ResourceKind::Cpu;
    std::string name;
    double capacity = 0.0;
    double peak_power = 0.0;
    double idle_fraction = 0.7;

    double idle_power() const noexcept { return idle_fraction * peak_power; }

    /// Active watts per unit of capacity (GHz or GB).
    double power_factor() const noexcept
    {
        return (peak_power - idle_fraction * peak_power) / capacity;
    }

    void validate() const
    {
        if (!(capacity > 0.0))
            throw config_error("component class '" + name + "': capacity must be > 0");
        if (!(peak_power > 0.0))
            throw config_error("component class '" + name + "': peak power must be > 0");
        if (!(idle_fraction >= 0.0 && idle_fraction <= 1.0))
            throw config_error("component class '" + name + "': idle fraction must be in [0,1]");
    }
};

/// Server classes used throughout the evaluation: high performance, standard, legacy.
/// Ordered by descending energy efficiency.
inline std::vector<ComponentClass> reference_cpu_classes(double idle_fraction = 0.7)
{
    return {
        {ResourceKind::Cpu, "cpu-3.6GHz", 3.6, 130.0, idle_fraction},
        {ResourceKind::Cpu, "cpu-2.66GHz", 2.66, 95.0, idle_fraction},
        {ResourceKind::Cpu, "cpu-2.4GHz", 2.4, 80.0, idle_fraction},
    };
}

inline std::vector<ComponentClass> reference_memory_classes(double idle_fraction = 0.7)
{
    return {
        {ResourceKind::Memory, "mem-32GB", 32.0, 40.0, idle_fraction},
        {ResourceKind::Memory, "mem-24GB", 24.0, 30.72, idle_fraction},
        {ResourceKind::Memory, "mem-8GB", 8.0, 10.24, idle_fraction},
    };
}

/// CPU classes followed by memory classes, as accepted by build_reference_layout().
inline std::vector<ComponentClass> reference_classes(double idle_fraction = 0.7)
{
    auto all = reference_cpu_classes(idle_fraction);
    auto mem = reference_memory_classes(idle_fraction);
    all.insert(all.end(), mem.begin(), mem.end());
    return all;
}

struct Component
{
    int id = 0;
    int class_index = 0; ///< index into the layout's class list of the same kind
    int node = 0;
};

struct Node
{
    int rack = 0;
    std::vector<int> cpus;
    std::vector<int> mems;
};

struct Rack
{
    int pod = 0;
    std::vector<int> nodes;
};

struct Pod
{
    std::vector<int> racks;
};

/**
 * Immutable layout. Build with build_reference_layout() or assemble the pieces and
 * call validate(); every accessor assumes a validated layout.
 */
class DcLayout
{
public:
    DcLayout() = default;

    DcLayout(DcKind kind,
             std::vector<ComponentClass> cpu_classes,
             std::vector<ComponentClass> mem_classes,
             std::vector<Component> cpus,
             std::vector<Component> mems,
             std::vector<Node> nodes,
             std::vector<Rack> racks,
             std::vector<Pod> pods)
      : kind_(kind),
        cpu_classes_(std::move(cpu_classes)),
        mem_classes_(std::move(mem_classes)),
        cpus_(std::move(cpus)),
        mems_(std::move(mems)),
        nodes_(std::move(nodes)),
        racks_(std::move(racks)),
        pods_(std::move(pods))
    {
        validate();
    }

    DcKind kind() const noexcept { return kind_; }

    std::span<const ComponentClass> cpu_classes() const noexcept { return cpu_classes_; }
    std::span<const ComponentClass> mem_classes() const noexcept { return mem_classes_; }
    std::span<const Component> cpus() const noexcept { return cpus_; }
    std::span<const Component> mems() const noexcept { return mems_; }
    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<const Rack> racks() const noexcept { return racks_; }
    std::span<const Pod> pods() const noexcept { return pods_; }

    int num_cpus() const noexcept { return static_cast<int>(cpus_.size()); }
    int num_mems() const noexcept { return static_cast<int>(mems_.size()); }
    int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
    int num_racks() const noexcept { return static_cast<int>(racks_.size()); }
    int num_pods() const noexcept { return static_cast<int>(pods_.size()); }

    const Component& cpu(int id) const
    {
        check_id(id, num_cpus(), "cpu");
        return cpus_[static_cast<std::size_t>(id)];
    }
    const Component& mem(int id) const
    {
        check_id(id, num_mems(), "memory");
        return mems_[static_cast<std::size_t>(id)];
    }

    const ComponentClass& cpu_class(int id) const { return cpu_classes_[static_cast<std::size_t>(cpu(id).class_index)]; }
    const ComponentClass& mem_class(int id) const { return mem_classes_[static_cast<std::size_t>(mem(id).class_index)]; }

    const Component& component(ResourceKind k, int id) const { return k == ResourceKind::Cpu ? cpu(id) : mem(id); }
    const ComponentClass& component_class(ResourceKind k, int id) const
    {
        return k == ResourceKind::Cpu ? cpu_class(id) : mem_class(id);
    }
    int num_components(ResourceKind k) const noexcept { return k == ResourceKind::Cpu ? num_cpus() : num_mems(); }
    std::span<const ComponentClass> classes(ResourceKind k) const noexcept
    {
        return k == ResourceKind::Cpu ? cpu_classes() : mem_classes();
    }

    int node_of(ResourceKind k, int id) const { return component(k, id).node; }
    int rack_of(ResourceKind k, int id) const { return nodes_[static_cast<std::size_t>(node_of(k, id))].rack; }
    int pod_of(ResourceKind k, int id) const { return racks_[static_cast<std::size_t>(rack_of(k, id))].pod; }
    int rack_of_node(int n) const { return nodes_.at(static_cast<std::size_t>(n)).rack; }
    int pod_of_rack(int r) const { return racks_.at(static_cast<std::size_t>(r)).pod; }

    /// Relation between two components of any kinds (same node = 1 ... different pods = 4).
    LatencyClass relation(ResourceKind ka, int a, ResourceKind kb, int b) const
    {
        const int na = node_of(ka, a), nb = node_of(kb, b);
        if (na == nb) return LatencyClass::SameNode;
        const int ra = rack_of_node(na), rb = rack_of_node(nb);
        if (ra == rb) return LatencyClass::SameRack;
        if (pod_of_rack(ra) == pod_of_rack(rb)) return LatencyClass::SamePod;
        return LatencyClass::SameDc;
    }

    double total_capacity(ResourceKind k) const
    {
        double sum = 0.0;
        for (int i = 0; i < num_components(k); ++i)
            sum += component_class(k, i).capacity;
        return sum;
    }

    /// Checks the containment partition and the per-kind structural rules; throws config_error.
    void validate() const;

private:
    static void check_id(int id, int n, const char* what)
    {
        if (id < 0 || id >= n)
            throw lookup_error(std::string("unknown ") + what + " component id " + std::to_string(id));
    }

    DcKind kind_ = DcKind::Traditional;
    std::vector<ComponentClass> cpu_classes_;
    std::vector<ComponentClass> mem_classes_;
    std::vector<Component> cpus_;
    std::vector<Component> mems_;
    std::vector<Node> nodes_;
    std::vector<Rack> racks_;
    std::vector<Pod> pods_;
};

inline void DcLayout::validate() const
{
    for (const auto& c : cpu_classes_) {
        c.validate();
        if (c.kind != ResourceKind::Cpu) throw config_error("memory class in cpu class list");
    }
    for (const auto& c : mem_classes_) {
        c.validate();
        if (c.kind != ResourceKind::Memory) throw config_error("cpu class in memory class list");
    }

    auto check_components = [&](const std::vector<Component>& comps, std::size_t nclasses,
                                bool cpu) {
        std::vector<int> seen(comps.size(), 0);
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& c = comps[i];
            if (c.id != static_cast<int>(i)) throw config_error("component ids must be dense and ordered");
            if (c.class_index < 0 || static_cast<std::size_t>(c.class_index) >= nclasses)
                throw config_error("component " + std::to_string(c.id) + " has unknown class");
            if (c.node < 0 || c.node >= num_nodes())
                throw config_error("component " + std::to_string(c.id) + " references unknown node");
        }
        for (int n = 0; n < num_nodes(); ++n) {
            const auto& ids = cpu ? nodes_[static_cast<std::size_t>(n)].cpus : nodes_[static_cast<std::size_t>(n)].mems;
            for (int id : ids) {
                if (id < 0 || static_cast<std::size_t>(id) >= comps.size())
                    throw config_error("node lists unknown component");
                if (comps[static_cast<std::size_t>(id)].node != n)
                    throw config_error("component/node allocation maps disagree");
                ++seen[static_cast<std::size_t>(id)];
            }
        }
        for (int s : seen)
            if (s != 1) throw config_error("every component must belong to exactly one node");
    };
    check_components(cpus_, cpu_classes_.size(), true);
    check_components(mems_, mem_classes_.size(), false);

    std::vector<int> node_seen(nodes_.size(), 0);
    for (int r = 0; r < num_racks(); ++r) {
        const auto& rack = racks_[static_cast<std::size_t>(r)];
        if (rack.pod < 0 || rack.pod >= num_pods()) throw config_error("rack references unknown pod");
        for (int n : rack.nodes) {
            if (n < 0 || n >= num_nodes()) throw config_error("rack lists unknown node");
            if (nodes_[static_cast<std::size_t>(n)].rack != r) throw config_error("node/rack allocation maps disagree");
            ++node_seen[static_cast<std::size_t>(n)];
        }
    }
    for (int s : node_seen)
        if (s != 1) throw config_error("every node must belong to exactly one rack");

    std::vector<int> rack_seen(racks_.size(), 0);
    for (int p = 0; p < num_pods(); ++p)
        for (int r : pods_[static_cast<std::size_t>(p)].racks) {
            if (r < 0 || r >= num_racks()) throw config_error("pod lists unknown rack");
            if (racks_[static_cast<std::size_t>(r)].pod != p) throw config_error("rack/pod allocation maps disagree");
            ++rack_seen[static_cast<std::size_t>(r)];
        }
    for (int s : rack_seen)
        if (s != 1) throw config_error("every rack must belong to exactly one pod");

    switch (kind_) {
    case DcKind::Traditional:
    case DcKind::LogicalRackScale:
        for (const auto& n : nodes_)
            if (n.cpus.size() != 1 || n.mems.size() != 1)
                throw config_error("traditional server nodes hold exactly one cpu and one memory component");
        break;
    case DcKind::RackScale:
        for (const auto& n : nodes_)
            if (!n.cpus.empty() && !n.mems.empty())
                throw config_error("rack-scale nodes must be homogeneous");
        for (const auto& r : racks_) {
            bool has_cpu = false, has_mem = false;
            for (int n : r.nodes) {
                has_cpu |= !nodes_[static_cast<std::size_t>(n)].cpus.empty();
                has_mem |= !nodes_[static_cast<std::size_t>(n)].mems.empty();
            }
            if (!has_cpu || !has_mem)
                throw config_error("rack-scale racks need at least one cpu node and one memory node");
        }
        break;
    case DcKind::PodScale:
        for (const auto& p : pods_) {
            bool has_cpu = false, has_mem = false;
            for (int r : p.racks) {
                bool rc = false, rm = false;
                for (int n : racks_[static_cast<std::size_t>(r)].nodes) {
                    rc |= !nodes_[static_cast<std::size_t>(n)].cpus.empty();
                    rm |= !nodes_[static_cast<std::size_t>(n)].mems.empty();
                }
                if (rc && rm) throw config_error("pod-scale racks must be homogeneous");
                has_cpu |= rc;
                has_mem |= rm;
            }
            if (!has_cpu || !has_mem)
                throw config_error("pod-scale pods need at least one cpu rack and one memory rack");
        }
        break;
    }
}

/**
 * Builds one of the reference layouts.
 *
 * `classes` holds CPU and memory classes (any order within the span, relative order per
 * kind preserved). Traditional and logical rack-scale layouts pair the i-th CPU class with
 * the i-th memory class into servers, so both kinds need the same number of classes.
 *
 * - Traditional / LogicalRackScale: each rack holds, per class, `servers_per_class_per_rack`
 *   server nodes of one CPU + one memory component.
 * - RackScale: each rack holds one homogeneous CPU node per CPU class and one memory node per
 *   memory class, each with `servers_per_class_per_rack` components.
 * - PodScale: the first half of each pod's racks are CPU racks, the second half memory racks;
 *   the pod keeps the same component count as the other kinds, folded into homogeneous racks.
 */
inline DcLayout build_reference_layout(DcKind kind, int pods, int racks_per_pod,
                                       int servers_per_class_per_rack,
                                       std::span<const ComponentClass> classes)
{
    if (pods < 1 || racks_per_pod < 1 || servers_per_class_per_rack < 1)
        throw config_error("pod, rack and server counts must be >= 1");

    std::vector<ComponentClass> cpu_classes, mem_classes;
    for (const auto& c : classes)
        (c.kind == ResourceKind::Cpu ? cpu_classes : mem_classes).push_back(c);
    if (cpu_classes.empty() || mem_classes.empty())
        throw config_error("layout needs at least one cpu class and one memory class");

    const bool server_based = kind == DcKind::Traditional || kind == DcKind::LogicalRackScale;
    if (server_based && cpu_classes.size() != mem_classes.size())
        throw config_error("server-based layouts need as many cpu classes as memory classes");
    if (kind == DcKind::PodScale && (racks_per_pod < 2 || racks_per_pod % 2 != 0))
        throw config_error("pod-scale layouts need an even number (>= 2) of racks per pod");

    std::vector<Component> cpus, mems;
    std::vector<Node> nodes;
    std::vector<Rack> racks;
    std::vector<Pod> podv(static_cast<std::size_t>(pods));

    const int spc = servers_per_class_per_rack;
    auto new_rack = [&](int p) {
        racks.push_back({p, {}});
        podv[static_cast<std::size_t>(p)].racks.push_back(static_cast<int>(racks.size()) - 1);
        return static_cast<int>(racks.size()) - 1;
    };
    auto new_node = [&](int r) {
        nodes.push_back({r, {}, {}});
        racks[static_cast<std::size_t>(r)].nodes.push_back(static_cast<int>(nodes.size()) - 1);
        return static_cast<int>(nodes.size()) - 1;
    };
    auto add_cpu = [&](int n, int cls) {
        const int id = static_cast<int>(cpus.size());
        cpus.push_back({id, cls, n});
        nodes[static_cast<std::size_t>(n)].cpus.push_back(id);
    };
    auto add_mem = [&](int n, int cls) {
        const int id = static_cast<int>(mems.size());
        mems.push_back({id, cls, n});
        nodes[static_cast<std::size_t>(n)].mems.push_back(id);
    };

    const int ncc = static_cast<int>(cpu_classes.size());
    const int nmc = static_cast<int>(mem_classes.size());
    for (int p = 0; p < pods; ++p) {
        if (kind == DcKind::PodScale) {
            const int half = racks_per_pod / 2;
            // each homogeneous rack absorbs the components of two heterogeneous racks
            const int fold = racks_per_pod / half;
            for (int r = 0; r < half; ++r) {
                const int rack = new_rack(p);
                for (int k = 0; k < ncc; ++k)
                    for (int f = 0; f < fold; ++f) {
                        const int n = new_node(rack);
                        for (int s = 0; s < spc; ++s) add_cpu(n, k);
                    }
            }
            for (int r = 0; r < half; ++r) {
                const int rack = new_rack(p);
                for (int k = 0; k < nmc; ++k)
                    for (int f = 0; f < fold; ++f) {
                        const int n = new_node(rack);
                        for (int s = 0; s < spc; ++s) add_mem(n, k);
                    }
            }
            continue;
        }
        for (int r = 0; r < racks_per_pod; ++r) {
            const int rack = new_rack(p);
            if (server_based) {
                for (int k = 0; k < ncc; ++k)
                    for (int s = 0; s < spc; ++s) {
                        const int n = new_node(rack);
                        add_cpu(n, k);
                        add_mem(n, k);
                    }
            } else {
                for (int k = 0; k < ncc; ++k) {
                    const int n = new_node(rack);
                    for (int s = 0; s < spc; ++s) add_cpu(n, k);
                }
                for (int k = 0; k < nmc; ++k) {
                    const int n = new_node(rack);
                    for (int s = 0; s < spc; ++s) add_mem(n, k);
                }
            }
        }
    }

    return DcLayout(kind, std::move(cpu_classes), std::move(mem_classes), std::move(cpus),
                    std::move(mems), std::move(nodes), std::move(racks), std::move(podv));
}

/// The evaluation layout: 2 pods x 2 racks, 2 servers per class per rack, three server classes.
inline DcLayout paper_layout(DcKind kind)
{
    const auto classes = reference_classes();
    return build_reference_layout(kind, 2, 2, 2, classes);
}

inline LatencyClass latency_class(const DcLayout& layout, int cpu, int mem)
{
    return layout.relation(ResourceKind::Cpu, cpu, ResourceKind::Memory, mem);
}

/// Largest CPU-memory latency class a workload may be composed over in a DC of this kind.
inline LatencyClass max_latency_for(DcKind kind) noexcept
{
    switch (kind) {
    case DcKind::Traditional: return LatencyClass::SameNode;
    case DcKind::RackScale: return LatencyClass::SameRack;
    case DcKind::LogicalRackScale: return LatencyClass::SameRack;
    case DcKind::PodScale: return LatencyClass::SamePod;
    }
    return LatencyClass::SameDc;
}

} // namespace cdc
