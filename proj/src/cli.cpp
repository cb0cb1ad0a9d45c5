#include "kld/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "kld/construct.hpp"
#include "kld/errors.hpp"
#include "kld/hypergraph.hpp"
#include "kld/io.hpp"
#include "kld/search.hpp"
#include "kld/structure.hpp"

namespace kld {

namespace {

using json = nlohmann::json;

struct RunReport {
    explicit RunReport(std::string name = "") : command(std::move(name)) {}

    std::string command;
    json parameters = json::object();
    std::string outcome;
    std::vector<std::string> certificates;
    json details = json::object();
    double seconds = 0;

    json to_json() const {
        return {{"command", command},
                {"parameters", parameters},
                {"outcome", outcome},
                {"certificates", certificates},
                {"details", details},
                {"timings", {{"seconds", seconds}}}};
    }
};

int exit_code_for(const std::string& outcome) {
    if (outcome == "pass" || outcome == "found") return kExitPass;
    if (outcome == "fail" || outcome == "none") return kExitFail;
    if (outcome == "incomplete") return kExitIncomplete;
    return kExitUsage;
}

json tuples_json(const TypeList& types) {
    json a = json::array();
    for (const auto& x : types) a.push_back(x.coords);
    return a;
}

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

std::vector<int> parse_sizes(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) {
        try {
            out.push_back(std::stoi(part));
        } catch (const std::logic_error&) {
            throw ParameterError("bad part size '" + part + "'");
        }
    }
    return out;
}

int default_workers() {
    if (const char* env = std::getenv("KLD_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

struct Options {
    std::string report_path;

    std::string kind;
    int k = 0;
    int ell = 0;
    int d = 0;
    std::string out_path;

    std::string family_path;
    std::string graph_path;
    std::string cert_path;
    bool stable = false;

    std::string mode;
    std::uint64_t max_nodes = 0;
    double max_seconds = 0;
    std::string checkpoint;
    bool resume = false;
    int workers = 1;
    int split_depth = -1;
    std::vector<std::string> disabled;

    std::string sizes;
    int n = 0;
    std::string level;
    bool minus = false;
    std::size_t state_cap = 5000;
};

RunReport cmd_construct(const Options& o, std::ostream& out) {
    RunReport r{"construct"};
    r.parameters = {{"kind", o.kind}, {"k", o.k}, {"ell", o.ell}, {"d", o.d}};
    TypeFamily f;
    if (o.kind == "base") {
        if (o.d < 1) throw ParameterError("construct base needs --d");
        f = base_family(o.k, o.d, o.ell);
    } else if (o.kind == "hls") {
        f = hls_family(o.k, o.ell);
    } else if (o.kind == "local-replacement") {
        auto c = local_replacement_family(o.k, o.ell);
        f = c.family;
        r.details["problematic"] = tuples_json(c.plan.problematic);
    } else if (o.kind == "stable") {
        auto c = stable_construction(o.k, o.ell);
        f = c.family;
        r.details["alpha"] = c.alpha;
        r.details["forbidden"] = tuples_json(c.forbidden);
    } else {
        throw ParameterError("unknown construction '" + o.kind + "'");
    }
    r.details["tuples"] = tuples_json(f.types);
    r.details["size"] = f.types.size();
    if (o.out_path.empty()) {
        write_family(out, f);
    } else {
        save_family(o.out_path, f);
        r.certificates.push_back(o.out_path);
        out << "wrote " << f.types.size() << " tuples to " << o.out_path << "\n";
    }
    r.outcome = "pass";
    return r;
}

RunReport cmd_verify(const Options& o, std::ostream& out) {
    RunReport r{"verify"};
    r.parameters = {{"family", o.family_path}, {"stable", o.stable}};
    TypeFamily f = load_family(o.family_path);
    if (o.stable) {
        auto s = check_stability(f);
        r.outcome = s.pass ? "pass" : "fail";
        out << "stability: " << r.outcome << "\n";
        if (s.witness) {
            r.details["witness"] = tuples_json(*s.witness);
            out << "  component without a stable invariant:";
            for (const auto& x : *s.witness) out << ' ' << x.str();
            out << "\n";
        }
        return r;
    }
    auto v = verify_family(f);
    r.outcome = v.pass() ? "pass" : "fail";
    out << "P1: " << (v.p1 ? "pass" : "fail");
    if (v.p1_witness) out << " (uncovered " << v.p1_witness->str() << ")";
    out << "\nP2: " << (v.p2 ? "pass" : "fail");
    if (v.p2_witness) {
        out << " (component";
        for (const auto& x : *v.p2_witness) out << ' ' << x.str();
        out << ")";
    }
    out << "\n";
    r.details["p1"] = v.p1;
    r.details["p2"] = v.p2;
    if (v.p1_witness) r.details["p1_witness"] = v.p1_witness->coords;
    if (v.p2_witness) r.details["p2_witness"] = tuples_json(*v.p2_witness);
    json certs = json::array();
    for (const auto& c : v.certificates)
        certs.push_back({{"component", tuples_json(c.component)}, {"index_set", c.index_set}, {"value", c.value}});
    r.details["certificates"] = certs;
    return r;
}

RunReport cmd_search(const Options& o, std::ostream& out) {
    RunReport r{"search"};
    r.parameters = {{"mode", o.mode}, {"k", o.k}, {"ell", o.ell}, {"d", o.d}, {"workers", o.workers}};
    SearchResult res;
    if (o.mode == "brute") {
        res = brute_force_enumerate(o.k, o.ell, o.d);
    } else {
        SearchOptions so;
        so.budget.max_nodes = o.max_nodes;
        so.budget.max_seconds = o.max_seconds;
        so.checkpoint_path = o.checkpoint;
        so.resume = o.resume;
        so.workers = o.workers;
        so.split_depth = o.split_depth;
        for (const auto& rule : o.disabled) {
            if (rule == "p1") so.prune.p1 = false;
            else if (rule == "complete") so.prune.complete_components = false;
            else if (rule == "partial") so.prune.partial_components = false;
            else if (rule == "propagate") so.prune.propagate = false;
            else throw ParameterError("unknown pruning rule '" + rule + "'");
        }
        if (o.mode == "count") res = dfs_enumerate(o.k, o.ell, o.d, so);
        else if (o.mode == "exists") res = dfs_exists(o.k, o.ell, o.d, so);
        else throw ParameterError("unknown search mode '" + o.mode + "'");
    }
    r.details = {{"count", res.count},
                 {"status", to_string(res.status)},
                 {"convention", res.convention},
                 {"explored_nodes", res.explored_nodes},
                 {"tasks_total", res.tasks_total},
                 {"tasks_done", res.tasks_done}};
    r.seconds = res.elapsed_seconds;
    if (!res.complete()) {
        r.outcome = "incomplete";
        out << "incomplete: budget exhausted after " << res.explored_nodes << " nodes (" << res.tasks_done << " of "
            << res.tasks_total << " tasks done)\n";
        return r;
    }
    if (o.mode == "exists") {
        r.outcome = res.example ? "found" : "none";
        out << r.outcome << "\n";
        if (res.example) {
            r.details["example"] = tuples_json(res.example->types);
            if (!o.out_path.empty()) {
                save_family(o.out_path, *res.example);
                r.certificates.push_back(o.out_path);
            } else {
                write_family(out, *res.example);
            }
        }
    } else {
        r.outcome = res.count > 0 ? "found" : "none";
        out << "count " << res.count << " (convention " << res.convention << ")\n";
    }
    out << "nodes " << res.explored_nodes << ", " << res.elapsed_seconds << " s\n";
    return r;
}

RunReport cmd_blowup(const Options& o, std::ostream& out) {
    RunReport r{"blowup"};
    TypeFamily f = load_family(o.family_path);
    std::vector<int> sizes = !o.sizes.empty() ? parse_sizes(o.sizes) : nearly_equal_sizes(o.n, f.d);
    r.parameters = {{"family", o.family_path}, {"sizes", sizes}};
    Hypergraph h = blow_up(f, sizes);
    r.details = {{"n", h.n()}, {"k", h.k()}, {"edges", h.edge_count()}};
    if (o.out_path.empty()) {
        write_hypergraph(out, h);
    } else {
        save_hypergraph(o.out_path, h);
        r.certificates.push_back(o.out_path);
        out << "wrote " << h.edge_count() << " edges on " << h.n() << " vertices to " << o.out_path << "\n";
    }
    r.outcome = "pass";
    return r;
}

void emit_walk(RunReport& r, const Options& o, std::ostream& out, const WalkCertificate& w, int k) {
    r.details["sequence"] = w.sequence;
    r.details["kind"] = to_string(w.kind);
    if (w.missing_window) r.details["missing_window"] = *w.missing_window;
    if (o.cert_path.empty()) {
        write_walk(out, w, k);
    } else {
        save_walk(o.cert_path, w, k);
        r.certificates.push_back(o.cert_path);
    }
}

RunReport cmd_detect(const Options& o, std::ostream& out) {
    RunReport r{"detect"};
    if (o.family_path.empty() == o.graph_path.empty()) throw ParameterError("give exactly one of --family and --graph");
    std::string level = o.level.empty() ? (o.family_path.empty() ? "vertex" : "label") : o.level;
    r.parameters = {{"ell", o.ell}, {"level", level}, {"minus", o.minus}};
    std::optional<WalkCertificate> w;
    int k = 0;
    if (level == "label") {
        if (o.family_path.empty()) throw ParameterError("label level needs --family");
        TypeFamily f = load_family(o.family_path);
        r.parameters["family"] = o.family_path;
        k = f.k;
        w = o.minus ? has_type_cycle_minus(f, o.ell) : has_type_cycle(f, o.ell);
    } else if (level == "vertex") {
        Hypergraph h;
        if (!o.graph_path.empty()) {
            h = load_hypergraph(o.graph_path);
            r.parameters["graph"] = o.graph_path;
        } else {
            TypeFamily f = load_family(o.family_path);
            std::vector<int> sizes = o.sizes.empty() ? std::vector<int>(static_cast<size_t>(f.d), o.ell) : parse_sizes(o.sizes);
            h = blow_up(f, sizes);
            r.parameters["family"] = o.family_path;
            r.parameters["sizes"] = sizes;
        }
        k = h.k();
        w = o.minus ? has_hom_tight_cycle_minus(h, o.ell, o.state_cap) : has_hom_tight_cycle(h, o.ell, o.state_cap);
    } else {
        throw ParameterError("unknown level '" + level + "'");
    }
    r.outcome = w ? "found" : "none";
    out << r.outcome << "\n";
    if (w) emit_walk(r, o, out, *w, k);
    return r;
}

RunReport cmd_analyze(const Options& o, std::ostream& out) {
    RunReport r{"analyze"};
    r.parameters = {{"graph", o.graph_path}, {"ell", o.ell}};
    Hypergraph h = load_hypergraph(o.graph_path);
    auto p = find_structural_partition(h, o.ell);
    for (const auto& w : p.warnings) out << "warning: " << w << "\n";
    r.details["warnings"] = p.warnings;
    if (!p.certificate) {
        r.outcome = "none";
        r.details["failure_stage"] = p.failure_stage;
        out << "none: " << p.failure_stage << "\n";
        return r;
    }
    r.outcome = "found";
    r.details["B"] = p.certificate->b;
    json counts = json::object();
    for (const auto& [e, c] : p.certificate->per_edge_intersections) counts[std::to_string(c)] = counts.value(std::to_string(c), 0) + 1;
    r.details["intersection_histogram"] = counts;
    out << "B = {" << join(p.certificate->b) << "} (|B| = " << p.certificate->b.size() << ")\n";
    return r;
}

RunReport cmd_certify(const Options& o, std::ostream& out) {
    RunReport r{"certify"};
    if (o.family_path.empty() == o.graph_path.empty()) throw ParameterError("give exactly one of --family and --graph");
    r.parameters = {{"cert", o.cert_path}};
    WalkFile wf = load_walk(o.cert_path);
    int k = 0;
    WindowPredicate ok;
    TypeFamily f;
    Hypergraph h;
    if (!o.graph_path.empty()) {
        h = load_hypergraph(o.graph_path);
        r.parameters["graph"] = o.graph_path;
        k = h.k();
        ok = edge_window_predicate(h);
    } else {
        f = load_family(o.family_path);
        r.parameters["family"] = o.family_path;
        k = f.k;
        ok = label_window_predicate(f);
    }
    WalkCheck check;
    if (wf.walk.length(k) != wf.length)
        check = {false, "declared length " + std::to_string(wf.length) + " but the sequence gives " + std::to_string(wf.walk.length(k))};
    else
        check = validate_walk(wf.walk, k, ok);
    r.outcome = check ? "pass" : "fail";
    if (!check) r.details["reason"] = check.reason;
    out << r.outcome << (check ? "" : ": " + check.reason) << "\n";
    return r;
}

RunReport cmd_codegree(const Options& o, std::ostream& out) {
    RunReport r{"codegree"};
    CodegreeResult c;
    if (!o.graph_path.empty()) {
        r.parameters = {{"graph", o.graph_path}};
        c = min_codegree(load_hypergraph(o.graph_path));
    } else if (!o.family_path.empty()) {
        TypeFamily f = load_family(o.family_path);
        std::vector<int> sizes = !o.sizes.empty() ? parse_sizes(o.sizes) : nearly_equal_sizes(o.n, f.d);
        r.parameters = {{"family", o.family_path}, {"sizes", sizes}};
        c = blowup_min_codegree(f, sizes);
    } else {
        throw ParameterError("give --graph or --family");
    }
    r.details = {{"value", c.value}, {"witness", c.witness}};
    r.outcome = "pass";
    out << "min codegree " << c.value << " at {" << join(c.witness) << "}\n";
    return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construct, verify and search (k, ell; d)-families and tight-cycle certificates", "kld"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    o.workers = default_workers();
    app.add_option("--report", o.report_path, "Write a JSON run report to this path");

    auto* construct = app.add_subcommand("construct", "Build a family and write it as a family file");
    construct->add_option("kind", o.kind, "base, hls, local-replacement or stable")->required();
    construct->add_option("--k", o.k)->required();
    construct->add_option("--ell", o.ell);
    construct->add_option("--d", o.d);
    construct->add_option("--out", o.out_path);

    auto* verify = app.add_subcommand("verify", "Check P1 and P2 (or stability) for a family file");
    verify->add_option("family", o.family_path)->required();
    verify->add_flag("--stable", o.stable);

    auto* search = app.add_subcommand("search", "Count or find families by exhaustive search");
    search->add_option("mode", o.mode, "count, exists or brute")->required();
    search->add_option("--k", o.k)->required();
    search->add_option("--ell", o.ell)->required();
    search->add_option("--d", o.d)->default_val(3);
    search->add_option("--max-nodes", o.max_nodes);
    search->add_option("--max-seconds", o.max_seconds);
    search->add_option("--checkpoint", o.checkpoint);
    search->add_flag("--resume", o.resume);
    search->add_option("--workers", o.workers);
    search->add_option("--split-depth", o.split_depth);
    search->add_option("--disable", o.disabled, "Pruning rules to switch off: p1, complete, partial, propagate");
    search->add_option("--out", o.out_path);

    auto* blowup = app.add_subcommand("blowup", "Blow a family up into a hypergraph file");
    blowup->add_option("--family", o.family_path)->required();
    auto* sizes = blowup->add_option("--sizes", o.sizes, "Comma-separated part sizes");
    blowup->add_option("--n", o.n, "Total vertex count split as evenly as possible")->excludes(sizes);
    blowup->add_option("--out", o.out_path);

    auto* detect = app.add_subcommand("detect", "Look for a homomorphic tight cycle (minus an edge)");
    detect->add_option("--family", o.family_path);
    detect->add_option("--graph", o.graph_path);
    detect->add_option("--ell", o.ell)->required();
    detect->add_option("--level", o.level, "label or vertex");
    detect->add_option("--sizes", o.sizes);
    detect->add_flag("--minus", o.minus);
    detect->add_option("--state-cap", o.state_cap);
    detect->add_option("--cert", o.cert_path, "Write the certificate here");

    auto* analyze = app.add_subcommand("analyze", "Look for an odd vertex partition");
    analyze->add_option("--graph", o.graph_path)->required();
    analyze->add_option("--ell", o.ell);

    auto* certify = app.add_subcommand("certify", "Validate a walk file window by window");
    certify->add_option("--graph", o.graph_path);
    certify->add_option("--family", o.family_path);
    certify->add_option("--cert", o.cert_path)->required();

    auto* codegree = app.add_subcommand("codegree", "Minimum codegree of a hypergraph or blow-up");
    codegree->add_option("--graph", o.graph_path);
    codegree->add_option("--family", o.family_path);
    codegree->add_option("--sizes", o.sizes);
    codegree->add_option("--n", o.n);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    RunReport report;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (*construct) report = cmd_construct(o, out);
        else if (*verify) report = cmd_verify(o, out);
        else if (*search) report = cmd_search(o, out);
        else if (*blowup) report = cmd_blowup(o, out);
        else if (*detect) report = cmd_detect(o, out);
        else if (*analyze) report = cmd_analyze(o, out);
        else if (*certify) report = cmd_certify(o, out);
        else report = cmd_codegree(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        report.command = app.get_subcommands().front()->get_name();
        report.outcome = "error";
        report.details["message"] = e.what();
    }
    if (report.seconds == 0)
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.report_path.empty()) {
        std::ofstream rep(o.report_path);
        if (!rep) {
            err << "error: cannot write report " << o.report_path << "\n";
            return kExitUsage;
        }
        rep << report.to_json().dump(2) << "\n";
    }
    return exit_code_for(report.outcome);
}

}  // namespace kld
