#pragma once

/**
 * @file lp_export.hpp
 * @brief Full MILP in CPLEX-LP text, its reader, and a reader for solver solution files.
 */

#include "cdc/objective.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cdc {

using LpTerms = std::vector<std::pair<std::string, double>>;

struct LpRow
{
    std::string name;
    LpTerms terms;
    char sense = '<'; ///< '<', '>' or '='
    double rhs = 0.0;

    friend bool operator==(const LpRow&, const LpRow&) = default;
};

struct LpBound
{
    std::string var;
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const LpBound&, const LpBound&) = default;
};

/// A linear program as written to / read from the text format. Terms keep their file order.
struct LpModel
{
    std::string objective_name = "obj";
    LpTerms objective;
    std::vector<LpRow> rows;
    std::vector<LpBound> bounds;
    std::vector<std::string> binaries;
    std::vector<std::string> generals;

    friend bool operator==(const LpModel&, const LpModel&) = default;
};

namespace lpvar {

inline std::string wcl(int w, int c) { return "WCL_w" + std::to_string(w) + "_c" + std::to_string(c); }
inline std::string wml(int w, int m) { return "WML_w" + std::to_string(w) + "_m" + std::to_string(m); }
inline std::string ca(int c) { return "CA_c" + std::to_string(c); }
inline std::string ma(int m) { return "MA_m" + std::to_string(m); }
inline std::string rs(int r) { return "RS_r" + std::to_string(r); }
inline std::string ps(int p) { return "PS_p" + std::to_string(p); }
inline std::string y(int w, int c, int m)
{
    return "Y_w" + std::to_string(w) + "_c" + std::to_string(c) + "_m" + std::to_string(m);
}
inline std::string gamma(int s, int d, int x, int yy)
{
    return "GAMMA_s" + std::to_string(s) + "_d" + std::to_string(d) + "_x" + std::to_string(x) + "_y" +
           std::to_string(yy);
}
inline std::string beta(int w) { return "BETA_w" + std::to_string(w); }
inline std::string is(int i) { return "IS_i" + std::to_string(i); }
inline const std::string nar = "NAR";
inline const std::string nap = "NAP";
inline const std::string da = "DA";

} // namespace lpvar

namespace detail {

/// Accumulates a linear expression, merging repeated variables while keeping first-seen order.
class LinExpr
{
public:
    void add(const std::string& v, double c)
    {
        if (c == 0.0) return;
        auto [it, fresh] = index_.try_emplace(v, terms_.size());
        if (fresh) terms_.push_back({v, c});
        else terms_[it->second].second += c;
    }
    LpTerms take() { return std::move(terms_); }

private:
    LpTerms terms_;
    std::map<std::string, std::size_t> index_;
};

} // namespace detail

/**
 * Builds the complete model for a problem. Every Y_wcm is present with its three linearization rows
 * and the latency row; GAMMA variables exist for ordered workload pairs with shuffle traffic on
 * distinct memories (the only ones with an objective coefficient). Objective units are W.
 */
inline LpModel build_lp_model(const Problem& pb)
{
    pb.workloads.validate();
    pb.params.validate();
    const auto& lay = pb.layout;
    const auto& ws = pb.wl();
    const auto table = compute_pair_energy_table(lay, pb.fabric);
    const int nw = static_cast<int>(ws.size()), nc = lay.num_cpus(), nm = lay.num_mems();
    const double q = pb.params.big_q, g = pb.params.big_g;
    const double ns = table.north_south() * gbps_pj_to_watt;
    const LatencyClass kind_bound = max_latency_for(pb.dc_kind);

    LpModel lp;
    detail::LinExpr obj;
    auto row = [&](std::string name, detail::LinExpr e, char sense, double rhs) {
        lp.rows.push_back({std::move(name), e.take(), sense, rhs});
    };

    // objective: TCPC + TMPC + TNPC + alpha * sum(BETA)
    for (int c = 0; c < nc; ++c) obj.add(lpvar::ca(c), lay.cpu_class(c).idle_power());
    for (int m = 0; m < nm; ++m) obj.add(lpvar::ma(m), lay.mem_class(m).idle_power());
    for (int w = 0; w < nw; ++w) {
        const auto& wl = ws[static_cast<std::size_t>(w)];
        for (int c = 0; c < nc; ++c)
            obj.add(lpvar::wcl(w, c), lay.cpu_class(c).power_factor() * wl.wc + ns * wl.cpu_io_traffic());
        for (int m = 0; m < nm; ++m)
            obj.add(lpvar::wml(w, m), lay.mem_class(m).power_factor() * wl.wm + ns * wl.mem_io_traffic());
    }
    for (int w = 0; w < nw; ++w) {
        const auto& wl = ws[static_cast<std::size_t>(w)];
        for (int c = 0; c < nc; ++c)
            for (int m = 0; m < nm; ++m)
                obj.add(lpvar::y(w, c, m),
                        (table.uplink(c, m) * wl.tcm_up + table.downlink(m, c) * wl.tcm_down) * gbps_pj_to_watt);
    }
    for (const auto& [key, gbps] : pb.shuffle().entries()) {
        if (gbps <= 0.0) continue;
        for (int x = 0; x < nm; ++x)
            for (int y = 0; y < nm; ++y)
                if (x != y) obj.add(lpvar::gamma(key.first, key.second, x, y), table.shuffle(x, y) * gbps * gbps_pj_to_watt);
    }
    const auto& f = pb.fabric;
    switch (f.kind) {
    case FabricKind::Electrical:
        obj.add(lpvar::nar, f.es_idle_power);
        obj.add(lpvar::da, f.aggregation_switches * f.es_idle_power);
        break;
    case FabricKind::Hybrid:
        obj.add(lpvar::nar, f.es_idle_power);
        obj.add(lpvar::nap, f.oxc_power);
        obj.add(lpvar::da, f.interpod_crossconnects * f.oxc_power);
        break;
    case FabricKind::Optical:
        obj.add(lpvar::nar, f.wss_power);
        obj.add(lpvar::nap, f.oxc_power);
        obj.add(lpvar::da, f.interpod_crossconnects * f.oxc_power);
        break;
    }
    for (int w = 0; w < nw; ++w) obj.add(lpvar::beta(w), pb.params.alpha);
    lp.objective = obj.take();

    // (14), (15) capacities
    for (int c = 0; c < nc; ++c) {
        detail::LinExpr e;
        for (int w = 0; w < nw; ++w) e.add(lpvar::wcl(w, c), ws[static_cast<std::size_t>(w)].wc);
        row("c14_c" + std::to_string(c), std::move(e), '<', lay.cpu_class(c).capacity);
    }
    for (int m = 0; m < nm; ++m) {
        detail::LinExpr e;
        for (int w = 0; w < nw; ++w) e.add(lpvar::wml(w, m), ws[static_cast<std::size_t>(w)].wm);
        row("c15_m" + std::to_string(m), std::move(e), '<', lay.mem_class(m).capacity);
    }
    // (16), (17) single hosting, (18) co-serving, (1) with beta = 1 - S
    for (int w = 0; w < nw; ++w) {
        detail::LinExpr a, b, s, bt;
        for (int c = 0; c < nc; ++c) {
            a.add(lpvar::wcl(w, c), 1.0);
            s.add(lpvar::wcl(w, c), 1.0);
            bt.add(lpvar::wcl(w, c), 1.0);
        }
        for (int m = 0; m < nm; ++m) {
            b.add(lpvar::wml(w, m), 1.0);
            s.add(lpvar::wml(w, m), -1.0);
        }
        bt.add(lpvar::beta(w), 1.0);
        const auto id = std::to_string(w);
        row("c16_w" + id, std::move(a), '<', 1.0);
        row("c17_w" + id, std::move(b), '<', 1.0);
        row("c18_w" + id, std::move(s), '=', 0.0);
        row("c1_w" + id, std::move(bt), '=', 1.0);
    }
    // (19)-(22) component activity
    for (int c = 0; c < nc; ++c) {
        detail::LinExpr lo, hi;
        for (int w = 0; w < nw; ++w) {
            lo.add(lpvar::wcl(w, c), g);
            hi.add(lpvar::wcl(w, c), 1.0);
        }
        lo.add(lpvar::ca(c), -1.0);
        hi.add(lpvar::ca(c), -q);
        row("c19_c" + std::to_string(c), std::move(lo), '>', 0.0);
        row("c20_c" + std::to_string(c), std::move(hi), '<', 0.0);
    }
    for (int m = 0; m < nm; ++m) {
        detail::LinExpr lo, hi;
        for (int w = 0; w < nw; ++w) {
            lo.add(lpvar::wml(w, m), g);
            hi.add(lpvar::wml(w, m), 1.0);
        }
        lo.add(lpvar::ma(m), -1.0);
        hi.add(lpvar::ma(m), -q);
        row("c21_m" + std::to_string(m), std::move(lo), '>', 0.0);
        row("c22_m" + std::to_string(m), std::move(hi), '<', 0.0);
    }
    // (23)-(26) rack and pod activity; H, F, A, B expanded over the hosted components
    auto usage = [&](auto in_scope) {
        detail::LinExpr e;
        for (int w = 0; w < nw; ++w) {
            for (int c = 0; c < nc; ++c)
                if (in_scope(ResourceKind::Cpu, c)) e.add(lpvar::wcl(w, c), 1.0);
            for (int m = 0; m < nm; ++m)
                if (in_scope(ResourceKind::Memory, m)) e.add(lpvar::wml(w, m), 1.0);
        }
        return e;
    };
    for (int r = 0; r < lay.num_racks(); ++r) {
        auto in_rack = [&](ResourceKind k, int j) { return lay.rack_of(k, j) == r; };
        auto lo = usage(in_rack), hi = usage(in_rack);
        lo.add(lpvar::rs(r), -1.0);
        hi.add(lpvar::rs(r), -q);
        row("c23_r" + std::to_string(r), std::move(lo), '>', 0.0);
        row("c24_r" + std::to_string(r), std::move(hi), '<', 0.0);
    }
    for (int p = 0; p < lay.num_pods(); ++p) {
        auto in_pod = [&](ResourceKind k, int j) { return lay.pod_of(k, j) == p; };
        detail::LinExpr lo, hi;
        auto base = usage(in_pod).take();
        for (const auto& [v, a] : base) {
            lo.add(v, g * a);
            hi.add(v, a);
        }
        lo.add(lpvar::ps(p), -1.0);
        hi.add(lpvar::ps(p), -q);
        row("c25_p" + std::to_string(p), std::move(lo), '>', 0.0);
        row("c26_p" + std::to_string(p), std::move(hi), '<', 0.0);
    }
    // (2), (3) counts, and the DC-active indicator gating the fixed switch power
    {
        detail::LinExpr a, b, u;
        a.add(lpvar::nar, 1.0);
        for (int r = 0; r < lay.num_racks(); ++r) a.add(lpvar::rs(r), -1.0);
        b.add(lpvar::nap, 1.0);
        for (int p = 0; p < lay.num_pods(); ++p) b.add(lpvar::ps(p), -1.0);
        row("c2", std::move(a), '=', 0.0);
        row("c3", std::move(b), '=', 0.0);
        u.add(lpvar::da, 1.0);
        u.add(lpvar::nar, -1.0);
        row("da_ub", std::move(u), '<', 0.0);
        for (int r = 0; r < lay.num_racks(); ++r) {
            detail::LinExpr e;
            e.add(lpvar::da, 1.0);
            e.add(lpvar::rs(r), -1.0);
            row("da_lb_r" + std::to_string(r), std::move(e), '>', 0.0);
        }
    }
    // (28)-(30) pair linearization, (31) latency bound
    for (int w = 0; w < nw; ++w) {
        detail::LinExpr lat;
        for (int c = 0; c < nc; ++c)
            for (int m = 0; m < nm; ++m) {
                const auto yv = lpvar::y(w, c, m);
                const auto sfx = "_w" + std::to_string(w) + "_c" + std::to_string(c) + "_m" + std::to_string(m);
                detail::LinExpr a, b, e;
                a.add(yv, 1.0);
                a.add(lpvar::wcl(w, c), -1.0);
                b.add(yv, 1.0);
                b.add(lpvar::wml(w, m), -1.0);
                e.add(yv, 1.0);
                e.add(lpvar::wcl(w, c), -1.0);
                e.add(lpvar::wml(w, m), -1.0);
                row("c28" + sfx, std::move(a), '<', 0.0);
                row("c29" + sfx, std::move(b), '<', 0.0);
                row("c30" + sfx, std::move(e), '>', -1.0);
                lat.add(yv, to_int(latency_class(lay, c, m)));
            }
        const int bound = std::min(to_int(kind_bound), to_int(ws[static_cast<std::size_t>(w)].max_lat));
        row("c31_w" + std::to_string(w), std::move(lat), '<', bound);
    }
    // (33)-(35) shuffle linearization
    for (const auto& [key, gbps] : pb.shuffle().entries()) {
        if (gbps <= 0.0) continue;
        const auto [s, d] = key;
        for (int x = 0; x < nm; ++x)
            for (int y = 0; y < nm; ++y) {
                if (x == y) continue;
                const auto gv = lpvar::gamma(s, d, x, y);
                const auto sfx = "_s" + std::to_string(s) + "_d" + std::to_string(d) + "_x" + std::to_string(x) +
                                 "_y" + std::to_string(y);
                detail::LinExpr a, b, e;
                a.add(gv, 1.0);
                a.add(lpvar::wml(s, x), -1.0);
                b.add(gv, 1.0);
                b.add(lpvar::wml(d, y), -1.0);
                e.add(gv, 1.0);
                e.add(lpvar::wml(s, x), -1.0);
                e.add(lpvar::wml(d, y), -1.0);
                row("c33" + sfx, std::move(a), '<', 0.0);
                row("c34" + sfx, std::move(b), '<', 0.0);
                row("c35" + sfx, std::move(e), '>', -1.0);
            }
    }
    // (36), (37) integrated workloads
    for (const auto& iw : pb.workloads.integrated) {
        detail::LinExpr a, b;
        for (int w : iw.members) {
            for (int c = 0; c < nc; ++c) a.add(lpvar::wcl(w, c), ws[static_cast<std::size_t>(w)].wc);
            for (int m = 0; m < nm; ++m) b.add(lpvar::wml(w, m), ws[static_cast<std::size_t>(w)].wm);
        }
        a.add(lpvar::is(iw.id), -iw.ci);
        b.add(lpvar::is(iw.id), -iw.mi);
        row("c36_i" + std::to_string(iw.id), std::move(a), '=', 0.0);
        row("c37_i" + std::to_string(iw.id), std::move(b), '=', 0.0);
    }

    lp.bounds.push_back({lpvar::nar, 0.0, static_cast<double>(lay.num_racks())});
    lp.bounds.push_back({lpvar::nap, 0.0, static_cast<double>(lay.num_pods())});
    lp.generals = {lpvar::nar, lpvar::nap};
    for (int w = 0; w < nw; ++w)
        for (int c = 0; c < nc; ++c) lp.binaries.push_back(lpvar::wcl(w, c));
    for (int w = 0; w < nw; ++w)
        for (int m = 0; m < nm; ++m) lp.binaries.push_back(lpvar::wml(w, m));
    for (int c = 0; c < nc; ++c) lp.binaries.push_back(lpvar::ca(c));
    for (int m = 0; m < nm; ++m) lp.binaries.push_back(lpvar::ma(m));
    for (int r = 0; r < lay.num_racks(); ++r) lp.binaries.push_back(lpvar::rs(r));
    for (int p = 0; p < lay.num_pods(); ++p) lp.binaries.push_back(lpvar::ps(p));
    for (int w = 0; w < nw; ++w)
        for (int c = 0; c < nc; ++c)
            for (int m = 0; m < nm; ++m) lp.binaries.push_back(lpvar::y(w, c, m));
    for (const auto& [key, gbps] : pb.shuffle().entries()) {
        if (gbps <= 0.0) continue;
        for (int x = 0; x < nm; ++x)
            for (int y = 0; y < nm; ++y)
                if (x != y) lp.binaries.push_back(lpvar::gamma(key.first, key.second, x, y));
    }
    for (int w = 0; w < nw; ++w) lp.binaries.push_back(lpvar::beta(w));
    for (const auto& iw : pb.workloads.integrated) lp.binaries.push_back(lpvar::is(iw.id));
    lp.binaries.push_back(lpvar::da);
    return lp;
}

inline constexpr const char* lp_naming_header =
    "\\ Variables:\n"
    "\\   WCL_w{w}_c{j}          workload w CPU demand on CPU j\n"
    "\\   WML_w{w}_m{j}          workload w memory demand on memory j\n"
    "\\   CA_c{j}, MA_m{j}       component active\n"
    "\\   RS_r{r}, PS_p{p}       rack / pod active\n"
    "\\   NAR, NAP               active rack / pod counts (integer)\n"
    "\\   Y_w{w}_c{c}_m{m}       workload w composed over CPU c and memory m\n"
    "\\   GAMMA_s{s}_d{d}_x{x}_y{y}  shuffle source s on memory x, destination d on memory y\n"
    "\\   BETA_w{w}              workload w blocked\n"
    "\\   IS_i{i}                integrated workload i served\n"
    "\\   DA                     any rack active (gates the fixed switch power)\n"
    "\\ Rows are named c{id}_... after the constraint they encode.\n";

namespace detail {

inline void write_terms(std::ostream& os, const LpTerms& terms)
{
    if (terms.empty()) {
        os << " 0 " << lpvar::da;
        return;
    }
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double c = terms[i].second;
        if (on_line == 6) {
            os << "\n   ";
            on_line = 0;
        }
        os << (c < 0 ? " - " : (i ? " + " : " ")) << fmt17(std::abs(c)) << ' ' << terms[i].first;
        ++on_line;
    }
}

inline void write_names(std::ostream& os, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i) os << (i % 8 == 0 ? (i ? "\n " : " ") : " ") << names[i];
    os << '\n';
}

} // namespace detail

inline void write_lp(std::ostream& os, const LpModel& lp, const std::string& title = {})
{
    using detail::fmt17;
    if (!title.empty()) os << "\\ " << title << '\n';
    os << lp_naming_header;
    os << "Minimize\n " << lp.objective_name << ':';
    detail::write_terms(os, lp.objective);
    os << "\nSubject To\n";
    for (const auto& r : lp.rows) {
        os << ' ' << r.name << ':';
        detail::write_terms(os, r.terms);
        os << ' ' << (r.sense == '<' ? "<=" : r.sense == '>' ? ">=" : "=") << ' ' << fmt17(r.rhs) << '\n';
    }
    if (!lp.bounds.empty()) {
        os << "Bounds\n";
        for (const auto& b : lp.bounds) os << ' ' << fmt17(b.lo) << " <= " << b.var << " <= " << fmt17(b.hi) << '\n';
    }
    if (!lp.binaries.empty()) {
        os << "Binaries\n";
        detail::write_names(os, lp.binaries);
    }
    if (!lp.generals.empty()) {
        os << "Generals\n";
        detail::write_names(os, lp.generals);
    }
    os << "End\n";
}

inline std::string export_lp(const Problem& pb)
{
    std::ostringstream os;
    os << "\\ workloads " << pb.wl().size() << ", dc " << to_string(pb.dc_kind) << ", fabric "
       << to_string(pb.fabric.kind) << '\n';
    write_lp(os, build_lp_model(pb));
    return os.str();
}

/**
 * Reads the subset of the format that write_lp() produces: one objective, named rows,
 * two-sided bounds, binary and general sections. Comments start with a backslash.
 */
inline LpModel read_lp(std::istream& is)
{
    // tokenize, dropping comments
    std::vector<std::string> tok;
    std::string line;
    while (std::getline(is, line)) {
        if (auto p = line.find('\\'); p != std::string::npos) line.erase(p);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) {
            // split a trailing colon off a row name
            if (t.size() > 1 && t.back() == ':') {
                tok.push_back(t.substr(0, t.size() - 1));
                tok.emplace_back(":");
            } else {
                tok.push_back(t);
            }
        }
    }
    auto lower = [](std::string s) {
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    };
    enum class Sec { None, Obj, Rows, Bounds, Bin, Gen, End };
    auto section = [&](std::size_t& i) -> std::optional<Sec> {
        const auto t = lower(tok[i]);
        if (t == "minimize" || t == "minimise" || t == "min") return Sec::Obj;
        if (t == "subject" && i + 1 < tok.size() && lower(tok[i + 1]) == "to") {
            ++i;
            return Sec::Rows;
        }
        if (t == "st" || t == "s.t.") return Sec::Rows;
        if (t == "bounds") return Sec::Bounds;
        if (t == "binaries" || t == "binary") return Sec::Bin;
        if (t == "generals" || t == "general") return Sec::Gen;
        if (t == "end") return Sec::End;
        return std::nullopt;
    };
    auto is_sense = [](const std::string& t) { return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">"; };

    LpModel lp;
    lp.objective_name.clear();
    Sec sec = Sec::None;
    std::size_t i = 0;
    // parse "[name :] terms", stopping at a sense token or a section keyword
    auto parse_expr = [&](std::string& name, LpTerms& terms) {
        if (i + 1 < tok.size() && tok[i + 1] == ":") {
            name = tok[i];
            i += 2;
        }
        double sign = 1.0;
        while (i < tok.size() && !is_sense(tok[i])) {
            std::size_t j = i;
            if (section(j)) break;
            if (i + 1 < tok.size() && tok[i + 1] == ":") break;
            const std::string& t = tok[i];
            if (t == "+") {
                ++i;
                continue;
            }
            if (t == "-") {
                sign = -sign;
                ++i;
                continue;
            }
            double coef = 1.0;
            std::string var = t;
            if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.') {
                coef = detail::parse_double(t);
                if (++i >= tok.size()) throw config_error("lp: coefficient without variable");
                var = tok[i];
            }
            if (coef != 0.0) terms.push_back({var, sign * coef});
            sign = 1.0;
            ++i;
        }
    };
    auto number = [&](const std::string& t) {
        const auto l = lower(t);
        if (l == "inf" || l == "+inf" || l == "infinity") return std::numeric_limits<double>::infinity();
        if (l == "-inf" || l == "-infinity") return -std::numeric_limits<double>::infinity();
        return detail::parse_double(t);
    };

    while (i < tok.size()) {
        if (auto s = section(i)) {
            sec = *s;
            ++i;
            if (sec == Sec::End) break;
            continue;
        }
        switch (sec) {
        case Sec::Obj:
            parse_expr(lp.objective_name, lp.objective);
            break;
        case Sec::Rows: {
            LpRow r;
            parse_expr(r.name, r.terms);
            if (i + 1 >= tok.size() || !is_sense(tok[i])) throw config_error("lp: row '" + r.name + "' lacks a sense");
            r.sense = tok[i][0] == '=' ? '=' : tok[i][0];
            r.rhs = number(tok[i + 1]);
            i += 2;
            lp.rows.push_back(std::move(r));
            break;
        }
        case Sec::Bounds: {
            if (i + 4 >= tok.size() || tok[i + 1] != "<=" || tok[i + 3] != "<=")
                throw config_error("lp: only 'lo <= var <= hi' bounds are supported");
            lp.bounds.push_back({tok[i + 2], number(tok[i]), number(tok[i + 4])});
            i += 5;
            break;
        }
        case Sec::Bin: lp.binaries.push_back(tok[i++]); break;
        case Sec::Gen: lp.generals.push_back(tok[i++]); break;
        default: throw config_error("lp: unexpected token '" + tok[i] + "'");
        }
    }
    if (sec != Sec::End) throw config_error("lp: missing End");
    if (lp.objective_name.empty()) lp.objective_name = "obj";
    return lp;
}

/// Variable values from a solution file: lines of "name value"; other lines are skipped.
inline std::map<std::string, double> read_lp_solution(std::istream& is)
{
    std::map<std::string, double> out;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string name, val;
        if (!(ls >> name >> val)) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(val, &pos);
            if (pos == val.size()) out[name] = v;
        } catch (const std::logic_error&) {
        }
    }
    return out;
}

/// Placement encoded by the WCL / WML values of a solution (value > 0.5 means chosen).
inline Placement placement_from_solution(const Problem& pb, const std::map<std::string, double>& sol)
{
    const int nw = static_cast<int>(pb.wl().size());
    std::vector<std::optional<int>> wcl(static_cast<std::size_t>(nw)), wml(static_cast<std::size_t>(nw));
    auto pick = [&](int w, int n, auto name, std::optional<int>& slot) {
        for (int j = 0; j < n; ++j) {
            auto it = sol.find(name(w, j));
            if (it == sol.end() || it->second <= 0.5) continue;
            if (slot) throw integrity_error("solution assigns workload " + std::to_string(w) + " twice");
            slot = j;
        }
    };
    for (int w = 0; w < nw; ++w) {
        pick(w, pb.layout.num_cpus(), lpvar::wcl, wcl[static_cast<std::size_t>(w)]);
        pick(w, pb.layout.num_mems(), lpvar::wml, wml[static_cast<std::size_t>(w)]);
    }
    return derive(pb, std::move(wcl), std::move(wml));
}

/// Objective value of a model at the given variable values (missing variables count as 0).
inline double evaluate_lp_objective(const LpModel& lp, const std::map<std::string, double>& sol)
{
    double v = 0.0;
    for (const auto& [name, c] : lp.objective) {
        auto it = sol.find(name);
        if (it != sol.end()) v += c * it->second;
    }
    return v;
}

} // namespace cdc
