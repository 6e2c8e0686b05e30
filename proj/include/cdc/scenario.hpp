#pragma once

/**
 * @file scenario.hpp
 * @brief Declarative scenarios, the sweep runner and pairwise comparison of result rows.
 *
 * A scenario is a JSON document:
 * @code
 * {
 *   "schema_version": 1,
 *   "name": "fabric-sweep",
 *   "dc_kind": "traditional",          // ignored when "setup" is given
 *   "fabrics": ["electrical", "optical"],
 *   "class": "cpu-intensive",
 *   "counts": [5, 10],
 *   "seeds": [1, 2],
 *   "setup": "RS-Micro",               // optional: TS-Mono, RS-Mono, TS-Micro, RS-Micro
 *   "methods": ["heep", "exact"],      // heep | exact | lp-export
 *   "layout": {"pods": 2, "racks_per_pod": 2, "servers_per_class": 2},
 *   "budget": {"max_seconds": 60, "max_nodes": 500000000},
 *   "overrides": {"alpha": 2000, "es_energy_per_bit": 28.28125, "cpu_shares": [0.5, 0.5],
 *                 "mem_shares": [0.5, 0.5], "pattern": "many-to-many",
 *                 "intensity": "non-intensive", "group_size": 5}
 * }
 * @endcode
 * "fabric" (a single string) is accepted in place of "fabrics".
 */

#include "cdc/heep.hpp"
#include "cdc/lp_export.hpp"
#include "cdc/solvers.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>

namespace cdc {

inline constexpr int scenario_schema_version = 1;
inline constexpr int row_schema_version = 1;

enum class Setup { None, TsMono, RsMono, TsMicro, RsMicro };

inline std::string_view to_string(Setup s) noexcept
{
    switch (s) {
    case Setup::TsMono: return "TS-Mono";
    case Setup::RsMono: return "RS-Mono";
    case Setup::TsMicro: return "TS-Micro";
    case Setup::RsMicro: return "RS-Micro";
    case Setup::None: break;
    }
    return "";
}

inline Setup setup_from_string(std::string_view s)
{
    for (auto v : {Setup::None, Setup::TsMono, Setup::RsMono, Setup::TsMicro, Setup::RsMicro})
        if (to_string(v) == s) return v;
    throw config_error("unknown setup '" + std::string(s) + "'");
}

inline DcKind setup_kind(Setup s) noexcept
{
    return s == Setup::RsMono || s == Setup::RsMicro ? DcKind::LogicalRackScale : DcKind::Traditional;
}

inline bool setup_is_micro(Setup s) noexcept { return s == Setup::TsMicro || s == Setup::RsMicro; }

enum class Method { Heep, Exact, LpExport };

inline std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::Heep: return "heep";
    case Method::Exact: return "exact";
    case Method::LpExport: return "lp-export";
    }
    return "";
}

inline Method method_from_string(std::string_view s)
{
    for (auto m : {Method::Heep, Method::Exact, Method::LpExport})
        if (to_string(m) == s) return m;
    throw config_error("unknown method '" + std::string(s) + "'");
}

struct LayoutShape
{
    int pods = 2;
    int racks_per_pod = 2;
    int servers_per_class = 2;

    friend bool operator==(const LayoutShape&, const LayoutShape&) = default;
};

struct Overrides
{
    double alpha = ObjectiveParams{}.alpha;
    double es_energy_per_bit = FabricParams{}.es_energy_per_bit;
    std::vector<double> cpu_shares{0.5, 0.5};
    std::vector<double> mem_shares{0.5, 0.5};
    ShufflePattern pattern = ShufflePattern::ManyToMany;
    ShuffleIntensity intensity = ShuffleIntensity::NonIntensive;
    int group_size = 5;

    friend bool operator==(const Overrides&, const Overrides&) = default;
};

struct Scenario
{
    std::string name = "scenario";
    DcKind dc_kind = DcKind::Traditional;
    std::vector<FabricKind> fabrics{FabricKind::Optical};
    WorkloadClass cls = WorkloadClass::CpuIntensive;
    std::vector<int> counts{5};
    std::vector<std::uint64_t> seeds{1};
    Setup setup = Setup::None;
    std::vector<Method> methods{Method::Heep, Method::Exact};
    LayoutShape layout;
    SolveBudget budget;
    Overrides overrides;

    /// The kind actually solved: a setup tag decides it.
    DcKind effective_kind() const noexcept { return setup == Setup::None ? dc_kind : setup_kind(setup); }

    void validate() const
    {
        if (name.empty()) throw config_error("scenario name must not be empty");
        if (fabrics.empty()) throw config_error("scenario needs at least one fabric");
        if (counts.empty() || seeds.empty() || methods.empty())
            throw config_error("scenario needs counts, seeds and methods");
        for (int c : counts)
            if (c < 0) throw config_error("workload counts must be >= 0");
        if (setup != Setup::None && dc_kind != DcKind::Traditional && dc_kind != DcKind::LogicalRackScale)
            throw config_error("setup tags require a traditional or logical-rack-scale dc_kind");
        if (!(budget.max_seconds > 0.0) || budget.max_nodes == 0) throw config_error("budget must be positive");
        if (overrides.group_size < 1) throw config_error("group_size must be >= 1");
        if (overrides.cpu_shares.size() != overrides.mem_shares.size() || overrides.cpu_shares.empty())
            throw config_error("cpu_shares and mem_shares need the same nonzero length");
        ObjectiveParams p;
        p.alpha = overrides.alpha;
        p.validate();
        if (!(overrides.es_energy_per_bit >= 0.0)) throw config_error("es_energy_per_bit must be >= 0");
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// JSON conversion -----------------------------------------------------------

namespace detail {

template <class T>
void get_opt(const nlohmann::json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where)
{
    if (!j.is_object()) throw config_error(std::string(where) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw config_error(std::string("unknown key '") + k + "' in " + where);
        (void)v;
    }
}

} // namespace detail

inline nlohmann::json to_json(const Scenario& s)
{
    nlohmann::json j;
    j["schema_version"] = scenario_schema_version;
    j["name"] = s.name;
    j["dc_kind"] = std::string(to_string(s.dc_kind));
    auto& fab = j["fabrics"] = nlohmann::json::array();
    for (auto f : s.fabrics) fab.push_back(std::string(to_string(f)));
    j["class"] = std::string(to_string(s.cls));
    j["counts"] = s.counts;
    j["seeds"] = s.seeds;
    if (s.setup != Setup::None) j["setup"] = std::string(to_string(s.setup));
    auto& ms = j["methods"] = nlohmann::json::array();
    for (auto m : s.methods) ms.push_back(std::string(to_string(m)));
    j["layout"] = {{"pods", s.layout.pods},
                   {"racks_per_pod", s.layout.racks_per_pod},
                   {"servers_per_class", s.layout.servers_per_class}};
    j["budget"] = {{"max_seconds", s.budget.max_seconds}, {"max_nodes", s.budget.max_nodes}};
    const auto& o = s.overrides;
    j["overrides"] = {{"alpha", o.alpha},
                      {"es_energy_per_bit", o.es_energy_per_bit},
                      {"cpu_shares", o.cpu_shares},
                      {"mem_shares", o.mem_shares},
                      {"pattern", std::string(to_string(o.pattern))},
                      {"intensity", std::string(to_string(o.intensity))},
                      {"group_size", o.group_size}};
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j)
{
    using detail::get_opt;
    try {
        detail::check_keys(j, {"schema_version", "name", "dc_kind", "fabric", "fabrics", "class", "counts", "seeds",
                               "setup", "methods", "layout", "budget", "overrides"},
                           "scenario");
        const int version = j.value("schema_version", 0);
        if (version != scenario_schema_version)
            throw config_error("unsupported scenario schema_version " + std::to_string(version));

        Scenario s;
        get_opt(j, "name", s.name);
        if (j.contains("dc_kind")) s.dc_kind = dc_kind_from_string(j["dc_kind"].get<std::string>());
        if (j.contains("fabric") && j.contains("fabrics")) throw config_error("give either fabric or fabrics");
        if (j.contains("fabric")) s.fabrics = {fabric_kind_from_string(j["fabric"].get<std::string>())};
        if (j.contains("fabrics")) {
            s.fabrics.clear();
            for (const auto& f : j["fabrics"]) s.fabrics.push_back(fabric_kind_from_string(f.get<std::string>()));
        }
        if (j.contains("class")) s.cls = workload_class_from_string(j["class"].get<std::string>());
        get_opt(j, "counts", s.counts);
        get_opt(j, "seeds", s.seeds);
        if (j.contains("setup")) s.setup = setup_from_string(j["setup"].get<std::string>());
        if (j.contains("methods")) {
            s.methods.clear();
            for (const auto& m : j["methods"]) s.methods.push_back(method_from_string(m.get<std::string>()));
        }
        if (j.contains("layout")) {
            const auto& l = j["layout"];
            detail::check_keys(l, {"pods", "racks_per_pod", "servers_per_class"}, "layout");
            get_opt(l, "pods", s.layout.pods);
            get_opt(l, "racks_per_pod", s.layout.racks_per_pod);
            get_opt(l, "servers_per_class", s.layout.servers_per_class);
        }
        if (j.contains("budget")) {
            const auto& b = j["budget"];
            detail::check_keys(b, {"max_seconds", "max_nodes"}, "budget");
            get_opt(b, "max_seconds", s.budget.max_seconds);
            get_opt(b, "max_nodes", s.budget.max_nodes);
        }
        if (j.contains("overrides")) {
            const auto& o = j["overrides"];
            detail::check_keys(o, {"alpha", "es_energy_per_bit", "cpu_shares", "mem_shares", "pattern", "intensity",
                                   "group_size"},
                               "overrides");
            get_opt(o, "alpha", s.overrides.alpha);
            get_opt(o, "es_energy_per_bit", s.overrides.es_energy_per_bit);
            get_opt(o, "cpu_shares", s.overrides.cpu_shares);
            get_opt(o, "mem_shares", s.overrides.mem_shares);
            get_opt(o, "group_size", s.overrides.group_size);
            if (o.contains("pattern")) s.overrides.pattern = shuffle_pattern_from_string(o["pattern"].get<std::string>());
            if (o.contains("intensity"))
                s.overrides.intensity = shuffle_intensity_from_string(o["intensity"].get<std::string>());
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("scenario: ") + e.what());
    }
}

inline Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw config_error("cannot open scenario " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("scenario " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

// Instances -----------------------------------------------------------------

/// One (fabric, count, seed) cell of a scenario.
struct Cell
{
    FabricKind fabric = FabricKind::Optical;
    int count = 0;
    std::uint64_t seed = 1;
};

inline DcLayout scenario_layout(const Scenario& s)
{
    return build_reference_layout(s.effective_kind(), s.layout.pods, s.layout.racks_per_pod,
                                  s.layout.servers_per_class, reference_classes());
}

/**
 * Builds the problem of one cell. Micro-service setups split every generated workload into
 * `cpu_shares.size()` members; all setups run without shuffle traffic.
 */
inline Problem build_problem(const Scenario& s, const Cell& cell)
{
    GenerateOptions g;
    g.count = cell.count;
    g.cls = s.cls;
    g.seed = cell.seed;
    g.group_size = s.overrides.group_size;
    g.pattern = s.overrides.pattern;
    g.intensity = s.setup == Setup::None ? s.overrides.intensity : ShuffleIntensity::None;

    Problem pb;
    pb.dc_kind = s.effective_kind();
    pb.layout = scenario_layout(s);
    pb.fabric = FabricParams::defaults(cell.fabric);
    pb.fabric.es_energy_per_bit = s.overrides.es_energy_per_bit;
    pb.params.alpha = s.overrides.alpha;
    pb.workloads = generate(g);
    if (setup_is_micro(s.setup)) {
        const auto& o = s.overrides;
        pb.workloads = split_to_microservices(pb.workloads.workloads, static_cast<int>(o.cpu_shares.size()),
                                              o.cpu_shares, o.mem_shares);
    }
    return pb;
}

// Rows ----------------------------------------------------------------------

struct ResultRow
{
    int schema_version = row_schema_version;
    std::string scenario;
    std::string setup;
    std::string dc_kind;
    std::string fabric;
    std::string cls;
    int count = 0;
    std::uint64_t seed = 0;
    std::string method;
    std::string status; ///< ok | not-proven | exported | error
    double objective = 0.0;
    PowerReport report;
    std::optional<double> gap_pct; ///< heep rows: 100 (heep / exact - 1) when exact ran
    std::uint64_t nodes = 0;
    double wall_time = 0.0;
    std::string detail; ///< output file or error text
    std::string config; ///< resolved scenario JSON restricted to this cell
};

inline constexpr const char* row_csv_header =
    "schema_version,scenario,setup,dc_kind,fabric,class,count,seed,method,status,objective,"
    "tcpc,tmpc,tnpc,tdpc,blocked,active_cpu,active_mem,nar,nap,avg_cpu_util,avg_mem_util,"
    "gap_pct,nodes,wall_time,detail,config";

namespace detail {

inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

/// RFC 4180 record split (quoted fields, doubled quotes; no embedded newlines).
inline std::vector<std::string> split_csv_quoted(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += '"', ++i;
            else if (c == '"') quoted = false;
            else out.back() += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw config_error("unterminated quoted field");
    return out;
}

} // namespace detail

inline void write_row_csv(std::ostream& os, const ResultRow& r)
{
    using detail::csv_quote;
    using detail::fmt17;
    os << r.schema_version << ',' << csv_quote(r.scenario) << ',' << r.setup << ',' << r.dc_kind << ','
       << r.fabric << ',' << r.cls << ',' << r.count << ',' << r.seed << ',' << r.method << ',' << r.status << ',';
    const bool has_report = r.status == "ok" || r.status == "not-proven";
    if (has_report) {
        os << fmt17(r.objective) << ',';
        write_csv_row(os, r.report);
    } else {
        os << std::string(11, ',');
    }
    os << ',' << (r.gap_pct ? fmt17(*r.gap_pct) : "") << ',' << r.nodes << ',' << fmt17(r.wall_time) << ','
       << csv_quote(r.detail) << ',' << csv_quote(r.config) << '\n';
}

inline void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << row_csv_header << '\n';
    for (const auto& r : rows) write_row_csv(os, r);
}

inline std::vector<ResultRow> read_rows_csv(std::istream& is)
{
    using detail::parse_double;
    using detail::parse_int;
    std::string line;
    if (!std::getline(is, line) || line != row_csv_header) throw config_error("result csv: bad header");
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_quoted(line);
        if (f.size() != 27) throw config_error("result csv: expected 27 columns");
        ResultRow r;
        r.schema_version = parse_int(f[0]);
        if (r.schema_version != row_schema_version)
            throw config_error("result csv: unsupported schema_version " + f[0]);
        r.scenario = f[1];
        r.setup = f[2];
        r.dc_kind = f[3];
        r.fabric = f[4];
        r.cls = f[5];
        r.count = parse_int(f[6]);
        r.seed = std::stoull(f[7]);
        r.method = f[8];
        r.status = f[9];
        if (!f[10].empty()) {
            r.objective = parse_double(f[10]);
            r.report.tcpc = parse_double(f[11]);
            r.report.tmpc = parse_double(f[12]);
            r.report.tnpc = parse_double(f[13]);
            r.report.tdpc = parse_double(f[14]);
            r.report.blocked = parse_int(f[15]);
            r.report.active_cpu = parse_int(f[16]);
            r.report.active_mem = parse_int(f[17]);
            r.report.nar = parse_int(f[18]);
            r.report.nap = parse_int(f[19]);
            r.report.avg_cpu_util = parse_double(f[20]);
            r.report.avg_mem_util = parse_double(f[21]);
        }
        if (!f[22].empty()) r.gap_pct = parse_double(f[22]);
        r.nodes = std::stoull(f[23]);
        r.wall_time = parse_double(f[24]);
        r.detail = f[25];
        r.config = f[26];
        rows.push_back(std::move(r));
    }
    return rows;
}

// Runner --------------------------------------------------------------------

struct RunOptions
{
    std::filesystem::path lp_dir = "."; ///< where lp-export cells write their models
    std::function<void(const ResultRow&)> on_row; ///< progress callback
};

/// Scenario restricted to one cell, as embedded in each row.
inline Scenario cell_scenario(const Scenario& s, const Cell& c)
{
    Scenario one = s;
    one.fabrics = {c.fabric};
    one.counts = {c.count};
    one.seeds = {c.seed};
    return one;
}

inline std::string cell_stem(const Scenario& s, const Cell& c)
{
    std::string stem = s.name + "_" + std::string(to_string(s.effective_kind())) + "_" +
                       std::string(to_string(c.fabric)) + "_n" + std::to_string(c.count) + "_s" +
                       std::to_string(c.seed);
    if (s.setup != Setup::None) stem += "_" + std::string(to_string(s.setup));
    return stem;
}

/**
 * Runs every (fabric, count, seed, method) cell in canonical order. A failing cell yields an
 * "error" row; heep rows carry the gap to the exact row of the same cell when both ran.
 */
inline std::vector<ResultRow> run(const Scenario& s, const RunOptions& opt = {})
{
    s.validate();
    std::vector<ResultRow> rows;
    for (auto fabric : s.fabrics)
        for (int count : s.counts)
            for (auto seed : s.seeds) {
                const Cell cell{fabric, count, seed};
                ResultRow base;
                base.scenario = s.name;
                base.setup = std::string(to_string(s.setup));
                base.dc_kind = std::string(to_string(s.effective_kind()));
                base.fabric = std::string(to_string(fabric));
                base.cls = std::string(to_string(s.cls));
                base.count = count;
                base.seed = seed;
                base.config = to_json(cell_scenario(s, cell)).dump();

                std::optional<Problem> pb;
                std::string build_error;
                try {
                    pb = build_problem(s, cell);
                } catch (const std::exception& e) {
                    build_error = e.what();
                }

                const std::size_t first = rows.size();
                std::optional<double> exact_obj;
                for (auto m : s.methods) {
                    ResultRow r = base;
                    r.method = std::string(to_string(m));
                    try {
                        if (!pb) throw config_error(build_error);
                        const auto t0 = std::chrono::steady_clock::now();
                        switch (m) {
                        case Method::Heep: {
                            auto h = heep_place(*pb);
                            r.status = "ok";
                            r.objective = h.objective;
                            r.report = h.report;
                            r.wall_time = detail::seconds_since(t0);
                            break;
                        }
                        case Method::Exact: {
                            SolveOptions so;
                            so.budget = s.budget;
                            auto x = solve_exact(*pb, so);
                            r.status = x.proven_optimal ? "ok" : "not-proven";
                            r.objective = x.objective;
                            r.report = x.report;
                            r.nodes = x.nodes_explored;
                            r.wall_time = x.wall_time;
                            exact_obj = x.objective;
                            break;
                        }
                        case Method::LpExport: {
                            std::filesystem::create_directories(opt.lp_dir);
                            const auto path = opt.lp_dir / (cell_stem(s, cell) + ".lp");
                            std::ofstream out(path);
                            if (!out) throw config_error("cannot write " + path.string());
                            out << export_lp(*pb);
                            r.status = "exported";
                            r.detail = path.string();
                            r.wall_time = detail::seconds_since(t0);
                            break;
                        }
                        }
                    } catch (const std::exception& e) {
                        r.status = "error";
                        r.detail = e.what();
                    }
                    rows.push_back(std::move(r));
                }
                for (std::size_t i = first; i < rows.size(); ++i)
                    if (rows[i].method == "heep" && rows[i].status == "ok" && exact_obj && *exact_obj > 0.0)
                        rows[i].gap_pct = 100.0 * (rows[i].objective / *exact_obj - 1.0);
                if (opt.on_row)
                    for (std::size_t i = first; i < rows.size(); ++i) opt.on_row(rows[i]);
            }
    return rows;
}

inline bool any_error(const std::vector<ResultRow>& rows)
{
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == "error"; });
}

// Comparison ----------------------------------------------------------------

/// `field=value` filter on one of: scenario, setup, dc_kind, fabric, class, method.
struct Selector
{
    std::string field;
    std::string value;
};

inline Selector parse_selector(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw config_error("selector must look like field=value: " + text);
    Selector s{text.substr(0, eq), text.substr(eq + 1)};
    static const std::set<std::string> fields{"scenario", "setup", "dc_kind", "fabric", "class", "method"};
    if (!fields.contains(s.field)) throw config_error("cannot select on '" + s.field + "'");
    return s;
}

namespace detail {

inline const std::string& row_field(const ResultRow& r, const std::string& f)
{
    if (f == "scenario") return r.scenario;
    if (f == "setup") return r.setup;
    if (f == "dc_kind") return r.dc_kind;
    if (f == "fabric") return r.fabric;
    if (f == "class") return r.cls;
    return r.method;
}

} // namespace detail

inline double row_metric(const ResultRow& r, const std::string& metric)
{
    if (metric == "tdpc") return r.report.tdpc;
    if (metric == "tcpc") return r.report.tcpc;
    if (metric == "tmpc") return r.report.tmpc;
    if (metric == "tnpc") return r.report.tnpc;
    if (metric == "objective") return r.objective;
    if (metric == "active_cpu") return r.report.active_cpu;
    if (metric == "active_mem") return r.report.active_mem;
    throw config_error("unknown metric '" + metric + "'");
}

struct Comparison
{
    std::string base;
    std::string cand;
    std::string metric;
    std::size_t pairs = 0;
    double mean_reduction_pct = 0.0; ///< mean of 100 (base - cand) / base
    double min_reduction_pct = 0.0;
    double max_reduction_pct = 0.0;
};

/**
 * Pairs base and candidate rows that agree on every identity column other than the selected
 * ones and averages the percentage reduction. Throws pairing_error unless the two sides
 * match one to one.
 */
inline Comparison compare(const std::vector<ResultRow>& rows, const Selector& base, const Selector& cand,
                          const std::string& metric = "tdpc")
{
    static const std::vector<std::string> id_fields{"setup", "dc_kind", "fabric", "class", "method"};
    auto key = [&](const ResultRow& r) {
        std::string k;
        for (const auto& f : id_fields)
            if (f != base.field && f != cand.field) k += detail::row_field(r, f) + '|';
        return k + std::to_string(r.count) + '|' + std::to_string(r.seed);
    };
    auto side = [&](const Selector& sel) {
        std::map<std::string, const ResultRow*> out;
        for (const auto& r : rows) {
            if (detail::row_field(r, sel.field) != sel.value) continue;
            if (r.status != "ok" && r.status != "not-proven") continue;
            if (!out.emplace(key(r), &r).second)
                throw pairing_error("duplicate rows for " + sel.field + "=" + sel.value);
        }
        return out;
    };
    const auto b = side(base), c = side(cand);
    if (b.empty()) throw pairing_error("no rows match " + base.field + "=" + base.value);
    if (b.size() != c.size()) throw pairing_error("base and candidate row sets differ in size");

    Comparison out{base.field + "=" + base.value, cand.field + "=" + cand.value, metric};
    double sum = 0.0;
    out.min_reduction_pct = std::numeric_limits<double>::infinity();
    out.max_reduction_pct = -std::numeric_limits<double>::infinity();
    for (const auto& [k, rb] : b) {
        auto it = c.find(k);
        if (it == c.end()) throw pairing_error("no candidate row pairs with " + k);
        const double vb = row_metric(*rb, metric), vc = row_metric(*it->second, metric);
        const double red = vb == 0.0 ? 0.0 : 100.0 * (vb - vc) / vb;
        sum += red;
        out.min_reduction_pct = std::min(out.min_reduction_pct, red);
        out.max_reduction_pct = std::max(out.max_reduction_pct, red);
    }
    out.pairs = b.size();
    out.mean_reduction_pct = sum / static_cast<double>(out.pairs);
    return out;
}

inline constexpr const char* comparison_csv_header = "base,candidate,metric,pairs,mean_reduction_pct,min_reduction_pct,max_reduction_pct";

inline void write_comparison_csv(std::ostream& os, const Comparison& c)
{
    using detail::fmt17;
    os << c.base << ',' << c.cand << ',' << c.metric << ',' << c.pairs << ',' << fmt17(c.mean_reduction_pct) << ','
       << fmt17(c.min_reduction_pct) << ',' << fmt17(c.max_reduction_pct) << '\n';
}

} // namespace cdc
