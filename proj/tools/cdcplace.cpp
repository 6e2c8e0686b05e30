// cdcplace: layouts, workload generation, HEEP, exact placement, LP export and sweeps.

#include "cdc/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace cdc;

namespace {

struct LayoutArgs
{
    std::string kind = "traditional";
    int pods = 2, racks = 2, servers = 2;

    void add(CLI::App* app)
    {
        app->add_option("-k,--kind", kind, "traditional | rack-scale | pod-scale | logical-rack-scale");
        app->add_option("--pods", pods, "pods");
        app->add_option("--racks", racks, "racks per pod");
        app->add_option("--servers", servers, "servers (or components) per class per rack");
    }

    DcLayout build() const
    {
        return build_reference_layout(dc_kind_from_string(kind), pods, racks, servers, reference_classes());
    }
};

struct InstanceArgs
{
    LayoutArgs layout;
    std::string fabric = "optical";
    std::string workloads_csv, shuffle_csv;
    std::string cls = "cpu-intensive";
    int count = 5;
    std::uint64_t seed = 1;
    std::string pattern = "many-to-many", intensity = "non-intensive";
    int group_size = 5;
    int micro = 0;
    double alpha = ObjectiveParams{}.alpha;
    double es_epb = FabricParams{}.es_energy_per_bit;

    void add(CLI::App* app)
    {
        layout.add(app);
        app->add_option("-f,--fabric", fabric, "electrical | hybrid | optical");
        app->add_option("-w,--workloads", workloads_csv, "workload table to load instead of generating");
        app->add_option("--shuffle", shuffle_csv, "shuffle table for --workloads");
        app->add_option("-c,--class", cls, "cpu-intensive | mem-intensive");
        app->add_option("-n,--count", count, "number of generated workloads");
        app->add_option("-s,--seed", seed, "generator seed");
        app->add_option("--pattern", pattern, "shuffle pattern");
        app->add_option("--intensity", intensity, "none | non-intensive | intensive");
        app->add_option("--group-size", group_size, "workloads per shuffle group");
        app->add_option("--micro", micro, "split each generated workload into this many equal micro-services");
        app->add_option("--alpha", alpha, "W per blocked workload");
        app->add_option("--es-epb", es_epb, "electrical switch energy per bit (pJ/b)");
    }

    Problem build() const
    {
        Problem pb;
        pb.dc_kind = dc_kind_from_string(layout.kind);
        pb.layout = layout.build();
        pb.fabric = FabricParams::defaults(fabric_kind_from_string(fabric));
        pb.fabric.es_energy_per_bit = es_epb;
        pb.fabric.validate();
        pb.params.alpha = alpha;
        pb.params.validate();
        if (!workloads_csv.empty()) {
            std::ifstream in(workloads_csv);
            if (!in) throw config_error("cannot open " + workloads_csv);
            pb.workloads.workloads = read_workloads_csv(in);
            pb.workloads.integrated = integrated_from_members(pb.workloads.workloads);
            if (!shuffle_csv.empty()) {
                std::ifstream sh(shuffle_csv);
                if (!sh) throw config_error("cannot open " + shuffle_csv);
                pb.workloads.shuffle = read_shuffle_csv(sh);
            }
        } else {
            GenerateOptions g;
            g.count = count;
            g.cls = workload_class_from_string(cls);
            g.seed = seed;
            g.pattern = shuffle_pattern_from_string(pattern);
            g.intensity = shuffle_intensity_from_string(intensity);
            g.group_size = group_size;
            pb.workloads = generate(g);
            if (micro > 0) {
                const std::vector<double> shares(static_cast<std::size_t>(micro), 1.0 / micro);
                pb.workloads = split_to_microservices(pb.workloads.workloads, micro, shares, shares);
            }
        }
        pb.workloads.validate();
        return pb;
    }
};

std::ostream& open_out(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw config_error("cannot write " + path);
    return file;
}

nlohmann::json report_json(const PowerReport& r)
{
    return {{"tcpc", r.tcpc},         {"tmpc", r.tmpc},         {"tnpc", r.tnpc},
            {"tdpc", r.tdpc},         {"blocked", r.blocked},   {"active_cpu", r.active_cpu},
            {"active_mem", r.active_mem}, {"nar", r.nar},       {"nap", r.nap},
            {"avg_cpu_util", r.avg_cpu_util}, {"avg_mem_util", r.avg_mem_util}};
}

nlohmann::json placement_json(const Placement& p)
{
    auto rows = nlohmann::json::array();
    for (std::size_t w = 0; w < p.num_workloads(); ++w)
        rows.push_back({{"workload", w},
                        {"cpu", p.wcl[w] ? nlohmann::json(*p.wcl[w]) : nlohmann::json()},
                        {"mem", p.wml[w] ? nlohmann::json(*p.wml[w]) : nlohmann::json()}});
    return rows;
}

void print_summary(const char* method, double objective, const PowerReport& r)
{
    std::cerr << method << ": objective " << objective << " W, tdpc " << r.tdpc << " (cpu " << r.tcpc << ", mem "
              << r.tmpc << ", net " << r.tnpc << "), blocked " << r.blocked << '\n';
}

int cmd_layout(const LayoutArgs& a, bool show_thresholds)
{
    const auto lay = a.build();
    if (show_thresholds) {
        const auto t = thresholds(lay);
        std::cout << "kind,class,capacity,lower,upper\n";
        auto dump = [](const char* kind, std::span<const ComponentClass> cls, const std::vector<ClassThreshold>& ts) {
            for (std::size_t i = 0; i < ts.size(); ++i) {
                std::cout << kind << ',' << cls[i].name << ',' << ts[i].capacity << ',';
                if (ts[i].last) std::cout << ",\n";
                else std::cout << ts[i].lower << ',' << ts[i].upper << '\n';
            }
        };
        dump("cpu", lay.cpu_classes(), t.cpu);
        dump("mem", lay.mem_classes(), t.mem);
        return 0;
    }
    std::cout << "kind,id,class,capacity,peak_power,node,rack,pod\n";
    for (auto k : {ResourceKind::Cpu, ResourceKind::Memory})
        for (int i = 0; i < lay.num_components(k); ++i) {
            const auto& c = lay.component_class(k, i);
            std::cout << to_string(k) << ',' << i << ',' << c.name << ',' << c.capacity << ',' << c.peak_power << ','
                      << lay.node_of(k, i) << ',' << lay.rack_of(k, i) << ',' << lay.pod_of(k, i) << '\n';
        }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-aware placement of workloads in composable data centers"};
    app.require_subcommand(1);

    auto* layout = app.add_subcommand("layout", "print a reference layout or its class thresholds");
    LayoutArgs layout_args;
    layout_args.add(layout);
    bool show_thresholds = false;
    layout->add_flag("--thresholds", show_thresholds, "print the class utilization thresholds instead");

    auto* gen = app.add_subcommand("generate", "generate a seeded workload set");
    InstanceArgs gen_args;
    gen_args.add(gen);
    std::string gen_out, gen_shuffle_out;
    gen->add_option("-o,--output", gen_out, "workload table (default stdout)");
    gen->add_option("--shuffle-out", gen_shuffle_out, "shuffle table");

    auto* solve = app.add_subcommand("solve", "exact placement");
    InstanceArgs solve_args;
    solve_args.add(solve);
    double time_limit = SolveBudget{}.max_seconds;
    std::uint64_t node_limit = SolveBudget{}.max_nodes;
    std::string solve_out, solve_json;
    bool exhaustive = false;
    solve->add_option("--time-limit", time_limit, "seconds");
    solve->add_option("--node-limit", node_limit, "nodes");
    solve->add_flag("--exhaustive", exhaustive, "plain enumeration (small instances only)");
    solve->add_option("-o,--output", solve_out, "placement table (default stdout)");
    solve->add_option("--json", solve_json, "detailed result as JSON");

    auto* heep = app.add_subcommand("heep", "HEEP heuristic placement");
    InstanceArgs heep_args;
    heep_args.add(heep);
    std::string heep_out, heep_log, heep_json;
    heep->add_option("-o,--output", heep_out, "placement table (default stdout)");
    heep->add_option("--log", heep_log, "decision log table");
    heep->add_option("--json", heep_json, "detailed result as JSON, including the decision log");

    auto* lp = app.add_subcommand("export-lp", "write the full MILP in LP format");
    InstanceArgs lp_args;
    lp_args.add(lp);
    std::string lp_out, lp_solution;
    lp->add_option("-o,--output", lp_out, "LP file (default stdout)");
    lp->add_option("--read-solution", lp_solution,
                   "instead of exporting, load an external solution file and evaluate its placement");

    auto* sweep = app.add_subcommand("sweep", "run a scenario file");
    std::string scenario_path, sweep_out, lp_dir = "lp";
    sweep->add_option("scenario", scenario_path, "scenario JSON")->required();
    sweep->add_option("-o,--output", sweep_out, "result table (default stdout)");
    sweep->add_option("--lp-dir", lp_dir, "directory for lp-export cells");

    auto* cmp = app.add_subcommand("compare", "mean percentage reduction between paired rows");
    std::vector<std::string> cmp_inputs;
    std::string cmp_base, cmp_cand, cmp_metric = "tdpc";
    cmp->add_option("rows", cmp_inputs, "result tables")->required();
    cmp->add_option("--base", cmp_base, "field=value of the baseline rows")->required();
    cmp->add_option("--cand", cmp_cand, "field=value of the candidate rows")->required();
    cmp->add_option("--metric", cmp_metric, "tdpc | tcpc | tmpc | tnpc | objective | active_cpu | active_mem");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*layout) return cmd_layout(layout_args, show_thresholds);

        if (*gen) {
            const auto pb = gen_args.build();
            std::ofstream f;
            write_workloads_csv(open_out(gen_out, f), pb.wl());
            if (!gen_shuffle_out.empty()) {
                std::ofstream s(gen_shuffle_out);
                if (!s) throw config_error("cannot write " + gen_shuffle_out);
                write_shuffle_csv(s, pb.shuffle());
            }
            return 0;
        }

        if (*solve) {
            const auto pb = solve_args.build();
            SolveResult r;
            if (exhaustive) {
                r = solve_exhaustive(pb);
            } else {
                SolveOptions o;
                o.budget.max_seconds = time_limit;
                o.budget.max_nodes = node_limit;
                r = solve_exact(pb, o);
            }
            std::ofstream f;
            write_placement_csv(open_out(solve_out, f), r.placement);
            print_summary(r.proven_optimal ? "exact (proven)" : "exact (not proven)", r.objective, r.report);
            std::cerr << "nodes " << r.nodes_explored << ", " << r.wall_time << " s\n";
            if (!solve_json.empty()) {
                std::ofstream j(solve_json);
                j << nlohmann::json{{"objective", r.objective},
                                    {"proven_optimal", r.proven_optimal},
                                    {"nodes_explored", r.nodes_explored},
                                    {"wall_time", r.wall_time},
                                    {"root_bound", r.root_bound},
                                    {"report", report_json(r.report)},
                                    {"placement", placement_json(r.placement)}}
                         .dump(2)
                  << '\n';
            }
            return 0;
        }

        if (*heep) {
            const auto pb = heep_args.build();
            const auto r = heep_place(pb);
            std::ofstream f;
            write_placement_csv(open_out(heep_out, f), r.placement);
            print_summary("heep", r.objective, r.report);
            if (!heep_log.empty()) {
                std::ofstream l(heep_log);
                if (!l) throw config_error("cannot write " + heep_log);
                write_heep_log_csv(l, r.log);
            }
            if (!heep_json.empty()) {
                auto log = nlohmann::json::array();
                for (const auto& d : r.log)
                    log.push_back({{"step", d.step},
                                   {"workload", d.workload},
                                   {"source", d.source},
                                   {"blocked", d.blocked},
                                   {"cpu", d.cpu ? nlohmann::json(*d.cpu) : nlohmann::json()},
                                   {"mem", d.mem ? nlohmann::json(*d.mem) : nlohmann::json()},
                                   {"cpu_util", d.cpu_util},
                                   {"mem_util", d.mem_util},
                                   {"candidates", d.candidates},
                                   {"fired", d.fired}});
                std::ofstream j(heep_json);
                j << nlohmann::json{{"objective", r.objective},
                                    {"report", report_json(r.report)},
                                    {"placement", placement_json(r.placement)},
                                    {"log", log}}
                         .dump(2)
                  << '\n';
            }
            return 0;
        }

        if (*lp) {
            const auto pb = lp_args.build();
            if (!lp_solution.empty()) {
                std::ifstream in(lp_solution);
                if (!in) throw config_error("cannot open " + lp_solution);
                const auto sol = read_lp_solution(in);
                const auto p = placement_from_solution(pb, sol);
                const auto v = check(p, pb);
                if (!v.empty()) throw integrity_error("solution placement is infeasible: " + to_string(v.front()));
                std::ofstream f;
                write_placement_csv(open_out(lp_out, f), p);
                print_summary("external", objective(pb, p), report(pb.layout, pb.fabric, p, pb.wl(), pb.shuffle()));
                return 0;
            }
            std::ofstream f;
            open_out(lp_out, f) << export_lp(pb);
            return 0;
        }

        if (*sweep) {
            const auto sc = load_scenario(scenario_path);
            RunOptions ro;
            ro.lp_dir = lp_dir;
            ro.on_row = [](const ResultRow& r) {
                std::cerr << r.fabric << " n=" << r.count << " seed=" << r.seed << ' ' << r.method << ": " << r.status;
                if (r.status == "ok" || r.status == "not-proven") std::cerr << ' ' << r.objective;
                if (r.status == "error") std::cerr << ' ' << r.detail;
                std::cerr << '\n';
            };
            const auto rows = run(sc, ro);
            std::ofstream f;
            write_rows_csv(open_out(sweep_out, f), rows);
            return any_error(rows) ? 1 : 0;
        }

        if (*cmp) {
            std::vector<ResultRow> rows;
            for (const auto& path : cmp_inputs) {
                std::ifstream in(path);
                if (!in) throw config_error("cannot open " + path);
                auto part = read_rows_csv(in);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            const auto c = compare(rows, parse_selector(cmp_base), parse_selector(cmp_cand), cmp_metric);
            std::cout << comparison_csv_header << '\n';
            write_comparison_csv(std::cout, c);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
