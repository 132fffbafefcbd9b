#include "CLI11.hpp"
#include "json.hpp"

#include "handlecalc/report.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace handlecalc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

InstanceDocument load_instance(const std::string& path) {
    std::string text = read_text(path);
    try {
        return parse_instance(text);
    } catch (const Error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

/// cyclic:N | dihedral:N (order 2N) | binary_dihedral:N (order 4N) |
/// so4:N (central product of two binary dihedral groups, order 8N^2) |
/// tetrahedral | octahedral | icosahedral
GroupSpec parse_target_arg(const std::string& text) {
    auto bad = [&] {
        return ValidationError("unrecognized target \"" + text +
                               "\" (expected cyclic:N, dihedral:N, binary_dihedral:N, so4:N, "
                               "tetrahedral, octahedral, or icosahedral)");
    };
    if (text == "tetrahedral" || text == "octahedral" || text == "icosahedral")
        return GroupSpec::polyhedral(text);
    auto colon = text.find(':');
    if (colon == std::string::npos) throw bad();
    std::string family = text.substr(0, colon);
    std::string digits = text.substr(colon + 1);
    int n = 0;
    try {
        size_t used = 0;
        n = std::stoi(digits, &used);
        if (used != digits.size()) throw bad();
    } catch (const std::exception&) {
        throw bad();
    }
    if (n < 1) throw bad();
    if (family == "cyclic") return GroupSpec::cyclic(n);
    if (family == "dihedral") return GroupSpec::dihedral(n);
    if (family == "binary_dihedral") return GroupSpec::binary_dihedral(n);
    if (family == "so4")
        return GroupSpec::central_product(GroupSpec::binary_dihedral(n),
                                          GroupSpec::binary_dihedral(n));
    throw bad();
}

std::string dot_of_graph(const GraphOfGroups& g) {
    std::ostringstream out;
    out << "digraph gog {\n";
    for (const auto& [vid, v] : g.vertices())
        out << "  \"" << vid << "\" [label=\"" << vid << "\\n|G| = " << v.group->order()
            << "\"];\n";
    for (const auto& [eid, e] : g.edges())
        out << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\"" << eid
            << "\\n|G| = " << e.group->order() << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string dot_of_cover(const CosetGraph& c) {
    // the cosets of one graph vertex form a single orbit of the target
    // action, so coloring by block is coloring by orbit
    static const char* palette[] = {"#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3",
                                    "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3"};
    std::ostringstream out;
    out << "graph cover {\n  node [style=filled];\n";
    for (size_t b = 0; b < c.vblocks.size(); ++b)
        for (size_t i = 0; i < c.vblocks[b].reps.size(); ++i)
            out << "  \"" << c.vertex_label(c.vblocks[b].first + static_cast<long long>(i))
                << "\" [fillcolor=\"" << palette[b % 8] << "\"];\n";
    for (const auto& eb : c.eblocks)
        for (size_t i = 0; i < eb.reps.size(); ++i)
            out << "  \"" << c.vertex_label(eb.alpha_end[i]) << "\" -- \""
                << c.vertex_label(eb.omega_end[i]) << "\" [label=\""
                << c.edge_label(eb.first + static_cast<long long>(i)) << "\"];\n";
    out << "}\n";
    return out.str();
}

bool any_violated(const RunReport& r) {
    for (const BoundCertificate& c : r.certificates)
        for (const BoundInequality& q : c.inequalities)
            if (!q.holds) return true;
    return false;
}

void print_doc(const std::string& text) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
}

struct Cli {
    std::string format = "md";
    std::string caps;     // "vertices,edges"
    long long seed = 0;   // reserved: every computation here is deterministic
    bool seed_given = false;
    int rc = 0;

    Clock::time_point t0 = Clock::now();

    void emit(RunReport& r, const std::string& out_path = "") {
        r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        std::string text = emit_report(r, format);
        if (out_path.empty())
            std::cout << text;
        else
            write_text(out_path, text);
    }

    std::pair<int, int> caps_or(int v, int e) const {
        if (caps.empty()) return {v, e};
        auto comma = caps.find(',');
        try {
            size_t u1 = 0, u2 = 0;
            if (comma == std::string::npos) throw std::invalid_argument("");
            int cv = std::stoi(caps.substr(0, comma), &u1);
            std::string rest = caps.substr(comma + 1);
            int ce = std::stoi(rest, &u2);
            if (u1 != comma || u2 != rest.size() || cv < 1 || ce < 0)
                throw std::invalid_argument("");
            return {cv, ce};
        } catch (const std::exception&) {
            throw ValidationError("--caps expects \"vertices,edges\", got \"" + caps + "\"");
        }
    }
};

int cmd_chi(Cli& cli, const std::string& input) {
    InstanceDocument doc = load_instance(input);
    RunReport r;
    r.command = "chi";
    r.inputs.emplace_back("input", input);
    r.inputs.emplace_back("digest", instance_digest(doc));
    r.results.emplace_back("chi", doc.graph.euler_characteristic().str());
    if (doc.target) {
        long long order = doc.target->order();
        r.results.emplace_back("order", std::to_string(order));
        try {
            r.results.emplace_back("genus", std::to_string(doc.graph.genus_from_order(order)));
        } catch (const Error& e) {
            r.notes.push_back(e.what());
        }
    }
    cli.emit(r);
    return 0;
}

int cmd_genus(Cli& cli, const std::string& input, long long order) {
    InstanceDocument doc = load_instance(input);
    if (order == 0) {
        if (!doc.target)
            throw ValidationError("no --order given and the document carries no target group");
        order = doc.target->order();
    }
    RunReport r;
    r.command = "genus";
    r.inputs.emplace_back("input", input);
    r.inputs.emplace_back("digest", instance_digest(doc));
    r.inputs.emplace_back("order", std::to_string(order));
    r.results.emplace_back("chi", doc.graph.euler_characteristic().str());
    r.results.emplace_back("genus", std::to_string(doc.graph.genus_from_order(order)));
    cli.emit(r);
    return 0;
}

int cmd_normalize(Cli& cli, const std::string& input, const std::string& out_path,
                  const std::string& dot_path) {
    (void)cli;
    InstanceDocument doc = load_instance(input);
    GraphOfGroups reduced = doc.graph.reduce_to_normal_form();
    bool changed = reduced.vertices().size() != doc.graph.vertices().size();

    InstanceDocument out;
    out.schema_version = doc.schema_version;
    out.graph = reduced;
    for (const auto& [vid, v] : reduced.vertices()) {
        (void)v;
        out.vertex_specs[vid] = doc.vertex_specs.at(vid);
        if (auto it = doc.menus.find(vid); it != doc.menus.end()) out.menus[vid] = it->second;
    }
    for (const auto& [eid, e] : reduced.edges()) {
        (void)e;
        out.edge_specs[eid] = doc.edge_specs.at(eid);
    }
    out.notes = doc.notes;
    if (!changed) {
        out.target_spec = doc.target_spec;
        out.target = doc.target;
        out.vertex_images = doc.vertex_images;
        out.stable_letters = doc.stable_letters;
    } else if (doc.target_spec) {
        out.target_spec = doc.target_spec;
        out.target = doc.target;
        out.notes.push_back(
            "reduction collapsed vertices; surjection data dropped, re-run surject");
    }

    std::string text = serialize_instance(out);
    if (!dot_path.empty()) write_text(dot_path, dot_of_graph(reduced));
    if (out_path.empty())
        print_doc(text);
    else
        write_text(out_path, text);
    return 0;
}

int cmd_check(Cli& cli, const std::string& input) {
    InstanceDocument doc = load_instance(input);
    RunReport r;
    r.command = "check";
    r.inputs.emplace_back("input", input);
    r.inputs.emplace_back("digest", instance_digest(doc));
    bool ok = true;

    r.results.emplace_back("normal_form", doc.graph.in_normal_form() ? "true" : "false");

    So3EdgeReport so3 = check_so3_edge_groups(doc.graph);
    r.results.emplace_back("edge_groups", so3.ok ? "ok" : "violations");
    for (const std::string& v : so3.violations) r.notes.push_back(v);
    ok = ok && so3.ok;

    try {
        AdmissibilityReport ar = check_attachments(doc.graph, effective_menus(doc));
        r.results.emplace_back("attachments", ar.ok ? "ok" : "violations");
        for (const std::string& v : ar.violations) r.notes.push_back(v);
        for (const std::string& n : ar.notes) r.notes.push_back(n);
        ok = ok && ar.ok;
    } catch (const Error& e) {
        r.results.emplace_back("attachments", "unchecked");
        r.notes.push_back(e.what());
        ok = false;
    }

    if (doc.target) {
        try {
            Surjection s = surjection_from(doc);
            std::string why;
            bool verified = verify_surjection(s, &why);
            r.results.emplace_back("surjection", verified ? "verified" : "failed");
            if (!verified) {
                r.notes.push_back(why);
                ok = false;
            }
        } catch (const Error& e) {
            r.results.emplace_back("surjection", "incomplete");
            r.notes.push_back(e.what());
            ok = false;
        }
    } else {
        r.results.emplace_back("surjection", "absent");
    }

    r.results.emplace_back("ok", ok ? "true" : "false");
    cli.emit(r);
    return ok ? 0 : 1;
}

int cmd_surject(Cli& cli, const std::string& input, const std::string& target_arg,
                long long limit, bool first, const std::string& out_path) {
    InstanceDocument doc = load_instance(input);
    RunReport r;
    r.command = "surject";
    r.inputs.emplace_back("input", input);
    r.inputs.emplace_back("digest", instance_digest(doc));

    GroupSpec tspec;
    if (!target_arg.empty()) {
        tspec = parse_target_arg(target_arg);
        r.inputs.emplace_back("target", target_arg);
    } else if (doc.target_spec) {
        tspec = *doc.target_spec;
    } else {
        throw ValidationError("no --target given and the document carries no target group");
    }
    GroupPtr target = tspec.build();
    r.results.emplace_back("target_order", std::to_string(target->order()));

    SurjectionSearchResult res = find_surjections(doc.graph, target, first ? 1 : limit);
    r.results.emplace_back("found", std::to_string(res.found.size()));
    r.results.emplace_back("examined", std::to_string(res.examined));
    r.results.emplace_back("truncated", res.truncated ? "true" : "false");
    for (const std::string& w : res.warnings) r.notes.push_back(w);

    if (!res.found.empty() && !out_path.empty()) {
        const Surjection& s = res.found.front();
        InstanceDocument with = doc;
        with.target_spec = tspec;
        with.target = target;
        with.vertex_images.clear();
        with.stable_letters.clear();
        for (const auto& [vid, hom] : s.vertex_maps) with.vertex_images[vid] = hom.gen_images;
        for (const auto& [eid, letter] : s.stable_letters) with.stable_letters[eid] = letter;
        write_text(out_path, serialize_instance(with));
        r.results.emplace_back("out", out_path);
    }
    cli.emit(r);
    return res.found.empty() ? 1 : 0;
}

int cmd_cover(Cli& cli, const std::string& input, const std::string& target_arg,
              const std::string& dot_path) {
    InstanceDocument doc = load_instance(input);
    RunReport r;
    r.command = "cover";
    r.inputs.emplace_back("input", input);
    r.inputs.emplace_back("digest", instance_digest(doc));

    Surjection s;
    if (!target_arg.empty()) {
        GroupSpec tspec = parse_target_arg(target_arg);
        r.inputs.emplace_back("target", target_arg);
        GroupPtr target = tspec.build();
        SurjectionSearchResult res = find_surjections(doc.graph, target, 1);
        if (res.found.empty()) {
            r.results.emplace_back("surjection", "none");
            r.notes.push_back("no surjection onto order " + std::to_string(target->order()));
            cli.emit(r);
            return 1;
        }
        s = res.found.front();
        doc.target = target;
        doc.target_spec = tspec;
    } else {
        s = surjection_from(doc);
        std::string why;
        if (!verify_surjection(s, &why)) {
            r.results.emplace_back("surjection", "failed");
            r.notes.push_back(why);
            cli.emit(r);
            return 1;
        }
    }
    r.results.emplace_back("surjection", "verified");

    CosetGraph c = build_coset_graph(doc.graph, s);
    r.results.emplace_back("order", std::to_string(s.target->order()));
    r.results.emplace_back("cover_vertices", std::to_string(c.vertex_count));
    r.results.emplace_back("cover_edges", std::to_string(c.edge_count));
    r.results.emplace_back("cover_genus", std::to_string(genus_of_cover(c)));
    r.results.emplace_back("formula_genus",
                           std::to_string(doc.graph.genus_from_order(s.target->order())));

    FaithfulnessReport fr = is_faithful(doc.graph, s);
    r.results.emplace_back("faithful", fr.faithful ? "true" : "false");
    r.results.emplace_back("h1_faithful", fr.h1_faithful ? "true" : "false");
    r.results.emplace_back("h1_kernel_order", std::to_string(fr.h1_kernel.size()));
    r.results.emplace_back("image_in_h1_kernel", fr.image_in_h1_kernel ? "true" : "false");
    for (const std::string& n : fr.notes) r.notes.push_back(n);

    BoundCertificate cert = certify_bounds(doc.graph, s);
    cert.instance = instance_digest(doc);
    r.certificates.push_back(cert);
    r.rows.push_back(row_for_document(doc, cert));

    if (!dot_path.empty()) write_text(dot_path, dot_of_cover(c));
    cli.emit(r);
    return any_violated(r) ? 1 : 0;
}

int cmd_example(Cli& cli, bool cyclic, long long param, const std::string& out_path) {
    (void)cli;
    InstanceDocument doc = cyclic ? example_cyclic_family(param) : example_so4_family(param);
    std::string text = serialize_instance(doc);
    if (out_path.empty())
        print_doc(text);
    else
        write_text(out_path, text);
    return 0;
}

std::string resolve_checkpoint(const std::string& flag) {
    if (flag.empty() || flag.front() == '/') return flag;
    const char* dir = std::getenv("HANDLECALC_CHECKPOINT_DIR");
    if (dir && *dir) return std::string(dir) + "/" + flag;
    return flag;
}

int cmd_search(Cli& cli, long long genus, const std::string& klass, int max_vertices,
               int max_edges, long long scan_start, long long scan_floor,
               const std::string& checkpoint, const std::string& out_path) {
    SearchCaps caps;
    auto [cv, ce] = cli.caps_or(caps.max_vertices, caps.max_edges);
    caps.max_vertices = max_vertices > 0 ? max_vertices : cv;
    caps.max_edges = max_edges >= 0 ? max_edges : ce;
    caps.scan_start = scan_start;
    caps.scan_floor = scan_floor;
    caps.checkpoint_path = resolve_checkpoint(checkpoint);

    SearchReport s = search_max_order(genus, klass, caps);
    RunReport r = report_from_search(s);
    if (cli.seed_given)
        r.notes.push_back("--seed ignored: the sweep is deterministic");
    if (!out_path.empty()) {
        write_text(out_path, emit_report(r, "json"));
        r.results.emplace_back("out", out_path);
    }
    cli.emit(r);
    return 0;
}

int cmd_report(Cli& cli, const std::vector<std::string>& paths, const std::string& out_path) {
    std::vector<std::string> files;
    for (const std::string& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<std::string> batch;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    batch.push_back(entry.path().string());
            std::sort(batch.begin(), batch.end());
            files.insert(files.end(), batch.begin(), batch.end());
        } else {
            files.push_back(p);
        }
    }

    RunReport r;
    r.command = "report";
    for (const std::string& path : files) {
        std::string text = read_text(path);
        nlohmann::json probe;
        try {
            probe = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path + ": " + e.what());
        }
        if (probe.is_object() && probe.contains("command") && probe.contains("rows")) {
            RunReport sub = parse_run_report(text);
            r.inputs.emplace_back(path, "report:" + sub.command);
            for (ReportRow& row : sub.rows) r.rows.push_back(std::move(row));
            for (BoundCertificate& c : sub.certificates) r.certificates.push_back(std::move(c));
            for (std::string& n : sub.notes) r.notes.push_back(std::move(n));
            continue;
        }
        InstanceDocument doc;
        try {
            doc = parse_instance(text);
        } catch (const Error& e) {
            throw ValidationError(path + ": " + e.what());
        }
        r.inputs.emplace_back(path, instance_digest(doc));
        try {
            BoundCertificate cert = certify_document(doc);
            r.rows.push_back(row_for_document(doc, cert));
            r.certificates.push_back(std::move(cert));
        } catch (const Error& e) {
            r.notes.push_back(path + ": no certified row (" + e.what() + ")");
        }
    }
    r.results.emplace_back("inputs", std::to_string(files.size()));
    r.results.emplace_back("rows", std::to_string(r.rows.size()));
    long long violated = 0;
    for (const BoundCertificate& c : r.certificates)
        for (const BoundInequality& q : c.inequalities)
            if (!q.holds) ++violated;
    r.results.emplace_back("violated_inequalities", std::to_string(violated));
    cli.emit(r, out_path);
    return violated > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    CLI::App app{"finite group actions on closed handles, realized by graphs of finite groups"};
    app.require_subcommand(1);
    app.add_option("--format", cli.format, "report format on stdout")
        ->check(CLI::IsMember({"md", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--caps", cli.caps, "search caps as \"vertices,edges\"");
    app.add_option("--seed", cli.seed, "reserved: every computation here is deterministic");

    std::string input, target_arg, out_path, dot_path, checkpoint, klass;
    long long order = 0, limit = 10000, genus = 0, scan_start = 0, scan_floor = 1, param = 0;
    int max_vertices = -1, max_edges = -1;
    bool first = false;
    std::vector<std::string> paths;

    auto* chi = app.add_subcommand("chi", "exact Euler characteristic of an instance");
    chi->fallthrough();
    chi->add_option("input", input, "instance document, - for stdin")->required();
    chi->callback([&] { cli.rc = cmd_chi(cli, input); });

    auto* gen = app.add_subcommand("genus", "genus of the action of a group of a given order");
    gen->fallthrough();
    gen->add_option("input", input, "instance document, - for stdin")->required();
    gen->add_option("--order", order, "group order; default: the document's target");
    gen->callback([&] { cli.rc = cmd_genus(cli, input, order); });

    auto* norm = app.add_subcommand("normalize", "collapse trivial edges and re-emit");
    norm->fallthrough();
    norm->add_option("input", input, "instance document, - for stdin")->required();
    norm->add_option("--out", out_path, "write the document here instead of stdout");
    norm->add_option("--dot", dot_path, "write the reduced graph in DOT form");
    norm->callback([&] { cli.rc = cmd_normalize(cli, input, out_path, dot_path); });

    auto* check = app.add_subcommand("check", "admissibility and surjection checks; exit 1 on failure");
    check->fallthrough();
    check->add_option("input", input, "instance document, - for stdin")->required();
    check->callback([&] { cli.rc = cmd_check(cli, input); });

    auto* surject = app.add_subcommand("surject", "search for surjections onto the target");
    surject->fallthrough();
    surject->add_option("input", input, "instance document, - for stdin")->required();
    surject->add_option("--target", target_arg,
                        "cyclic:N, dihedral:N, binary_dihedral:N, so4:N, tetrahedral, "
                        "octahedral, icosahedral; default: the document's target");
    surject->add_option("--limit", limit, "stop after this many")->capture_default_str();
    surject->add_flag("--first", first, "stop at the first surjection");
    surject->add_option("--out", out_path, "write the document with the first surjection embedded");
    surject->callback([&] { cli.rc = cmd_surject(cli, input, target_arg, limit, first, out_path); });

    auto* cover = app.add_subcommand("cover", "coset graph, dual genus oracles, faithfulness");
    cover->fallthrough();
    cover->add_option("input", input, "instance document, - for stdin")->required();
    cover->add_option("--target", target_arg, "override target; uses the first surjection found");
    cover->add_option("--dot", dot_path, "write the coset graph in DOT form, one color per orbit");
    cover->callback([&] { cli.rc = cmd_cover(cli, input, target_arg, dot_path); });

    auto* example = app.add_subcommand("example", "emit a built-in family instance");
    example->require_subcommand(1);
    auto* exc = example->add_subcommand("cyclic", "three-vertex chain with cyclic target x(x+1)");
    exc->fallthrough();
    exc->add_option("--x", param, "odd multiple of 3")->required();
    exc->add_option("--out", out_path, "write the document here instead of stdout");
    exc->callback([&] { cli.rc = cmd_example(cli, true, param, out_path); });
    auto* exs = example->add_subcommand("so4", "single-edge central-product instance, order 8n^2");
    exs->fallthrough();
    exs->add_option("--n", param, "n >= 2")->required();
    exs->add_option("--out", out_path, "write the document here instead of stdout");
    exs->callback([&] { cli.rc = cmd_example(cli, false, param, out_path); });

    auto* search = app.add_subcommand("search", "descending sweep for the largest faithful order");
    search->fallthrough();
    search->add_option("--genus", genus, "genus of the handle")->required();
    search->add_option("--class", klass, "cyclic | any")
        ->required()
        ->check(CLI::IsMember({"cyclic", "any"}));
    search->add_option("--max-vertices", max_vertices, "default 4, or the --caps value");
    search->add_option("--max-edges", max_edges, "default 5, or the --caps value");
    search->add_option("--scan-start", scan_start, "0: twice the theorem bound");
    search->add_option("--scan-floor", scan_floor, "stop below this order")->capture_default_str();
    search->add_option("--checkpoint", checkpoint,
                       "resumable state file; relative paths land in HANDLECALC_CHECKPOINT_DIR");
    search->add_option("--out", out_path, "also write the full report as JSON");
    search->callback([&] {
        cli.seed_given = app.count("--seed") > 0;
        cli.rc = cmd_search(cli, genus, klass, max_vertices, max_edges, scan_start, scan_floor,
                            checkpoint, out_path);
    });

    auto* report = app.add_subcommand("report", "combined report over documents and directories");
    report->fallthrough();
    report->add_option("inputs", paths, "instance or report documents; directories take *.json")
        ->required();
    report->add_option("--out", out_path, "write here instead of stdout");
    report->callback([&] { cli.rc = cmd_report(cli, paths, out_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return cli.rc;
}
