#include "handlecalc/report.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace handlecalc {

namespace {

using Json = nlohmann::ordered_json;

Json cert_to_json(const BoundCertificate& c) {
    Json j;
    j["instance"] = c.instance;
    j["genus"] = c.genus;
    j["order"] = c.order;
    j["case"] = c.applicable_case;
    j["all_hold"] = c.all_hold;
    Json qs = Json::array();
    for (const BoundInequality& q : c.inequalities) {
        Json e;
        e["label"] = q.label;
        e["lhs"] = q.lhs.str();
        e["relation"] = q.relation;
        e["rhs"] = q.rhs.str();
        e["holds"] = q.holds;
        qs.push_back(std::move(e));
    }
    j["inequalities"] = std::move(qs);
    j["notes"] = c.notes;
    return j;
}

BoundCertificate cert_from_json(const Json& j) {
    BoundCertificate c;
    c.instance = j.at("instance").get<std::string>();
    c.genus = j.at("genus").get<long long>();
    c.order = j.at("order").get<long long>();
    c.applicable_case = j.at("case").get<std::string>();
    c.all_hold = j.at("all_hold").get<bool>();
    for (const Json& e : j.at("inequalities")) {
        BoundInequality q;
        q.label = e.at("label").get<std::string>();
        q.lhs = Rational::parse(e.at("lhs").get<std::string>());
        q.relation = e.at("relation").get<std::string>();
        q.rhs = Rational::parse(e.at("rhs").get<std::string>());
        q.holds = e.at("holds").get<bool>();
        c.inequalities.push_back(std::move(q));
    }
    for (const Json& n : j.at("notes")) c.notes.push_back(n.get<std::string>());
    return c;
}

std::string csv_rows(const RunReport& r) {
    std::ostringstream out;
    out << "genus,class,order,bound,ratio,faithful,witness-digest\n";
    for (const ReportRow& row : r.rows)
        out << row.genus << "," << row.klass << "," << row.order << "," << row.bound << ","
            << row.ratio.str() << "," << (row.faithful ? "true" : "false") << ","
            << row.digest << "\n";
    return out.str();
}

std::string markdown(const RunReport& r) {
    std::ostringstream out;
    out << "# " << r.command << " report\n\n";
    if (!r.inputs.empty()) {
        out << "## Inputs\n\n";
        for (const auto& [k, v] : r.inputs) out << "- " << k << ": " << v << "\n";
        out << "\n";
    }
    if (!r.results.empty()) {
        out << "## Results\n\n";
        for (const auto& [k, v] : r.results) out << "- " << k << ": " << v << "\n";
        out << "\n";
    }
    if (!r.rows.empty()) {
        out << "## Instances\n\n";
        out << "| genus | class | order | bound | ratio | faithful | witness-digest |\n";
        out << "|---|---|---|---|---|---|---|\n";
        for (const ReportRow& row : r.rows)
            out << "| " << row.genus << " | " << row.klass << " | " << row.order << " | "
                << row.bound << " | " << row.ratio.str() << " | "
                << (row.faithful ? "true" : "false") << " | " << row.digest << " |\n";
        out << "\n";
    }
    for (const BoundCertificate& c : r.certificates) {
        out << "## Certificate " << c.instance << "\n\n";
        out << "- genus " << c.genus << ", order " << c.order << ", case "
            << c.applicable_case << ", " << (c.all_hold ? "all inequalities hold" : "no verdict")
            << "\n\n";
        if (!c.inequalities.empty()) {
            out << "| inequality | lhs | rhs | holds |\n|---|---|---|---|\n";
            for (const BoundInequality& q : c.inequalities)
                out << "| " << q.label << " | " << q.lhs.str() << " " << q.relation << " | "
                    << q.rhs.str() << " | " << (q.holds ? "yes" : "NO") << " |\n";
            out << "\n";
        }
        for (const std::string& n : c.notes) out << "- " << n << "\n";
        if (!c.notes.empty()) out << "\n";
    }
    if (!r.notes.empty()) {
        out << "## Notes\n\n";
        for (const std::string& n : r.notes) out << "- " << n << "\n";
        out << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_seconds);
    out << "_wall time " << buf << " s_\n";
    return out.str();
}

}  // namespace

std::string emit_report(const RunReport& r, const std::string& format) {
    if (format == "csv") return csv_rows(r);
    if (format == "md") return markdown(r);
    if (format != "json")
        throw ValidationError("unknown report format \"" + format +
                              "\" (expected md, csv, or json)");
    Json j;
    j["command"] = r.command;
    Json in = Json::object();
    for (const auto& [k, v] : r.inputs) in[k] = v;
    j["inputs"] = std::move(in);
    Json res = Json::object();
    for (const auto& [k, v] : r.results) res[k] = v;
    j["results"] = std::move(res);
    Json rows = Json::array();
    for (const ReportRow& row : r.rows) {
        Json e;
        e["genus"] = row.genus;
        e["class"] = row.klass;
        e["order"] = row.order;
        e["bound"] = row.bound;
        e["ratio"] = row.ratio.str();
        e["faithful"] = row.faithful;
        e["witness_digest"] = row.digest;
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    Json certs = Json::array();
    for (const BoundCertificate& c : r.certificates) certs.push_back(cert_to_json(c));
    j["certificates"] = std::move(certs);
    j["notes"] = r.notes;
    j["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("report document is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("command") || !j.contains("rows"))
        throw ValidationError("report document must be an object with command and rows");
    RunReport r;
    try {
        r.command = j.at("command").get<std::string>();
        if (j.contains("inputs"))
            for (const auto& [k, v] : j.at("inputs").items())
                r.inputs.emplace_back(k, v.get<std::string>());
        if (j.contains("results"))
            for (const auto& [k, v] : j.at("results").items())
                r.results.emplace_back(k, v.get<std::string>());
        for (const Json& e : j.at("rows")) {
            ReportRow row;
            row.genus = e.at("genus").get<long long>();
            row.klass = e.at("class").get<std::string>();
            row.order = e.at("order").get<long long>();
            row.bound = e.at("bound").get<long long>();
            row.ratio = Rational::parse(e.at("ratio").get<std::string>());
            row.faithful = e.at("faithful").get<bool>();
            row.digest = e.at("witness_digest").get<std::string>();
            r.rows.push_back(std::move(row));
        }
        if (j.contains("certificates"))
            for (const Json& c : j.at("certificates")) r.certificates.push_back(cert_from_json(c));
        if (j.contains("notes"))
            for (const Json& n : j.at("notes")) r.notes.push_back(n.get<std::string>());
        if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("report document field error: ") + e.what());
    }
    return r;
}

ReportRow row_for_document(const InstanceDocument& doc, const BoundCertificate& cert) {
    ReportRow row;
    row.genus = cert.genus;
    row.order = cert.order;
    row.faithful = cert.applicable_case != "inapplicable";
    row.digest = cert.instance;

    bool so4_family = false;
    for (const std::string& n : doc.notes)
        so4_family = so4_family || n.rfind("single-edge central-product instance", 0) == 0;

    bool cyclic_target = false;
    if (doc.target)
        for (Elt a = 0; a < doc.target->order() && !cyclic_target; ++a)
            cyclic_target = doc.target->elt_order(a) == doc.target->order();

    if (so4_family) {
        row.klass = "any";
        row.bound = 2 * cert.genus * cert.genus;  // the family's sharp value
    } else if (cyclic_target) {
        row.klass = "cyclic";
        row.bound = 4 * (cert.genus - 1) * (cert.genus - 1);
    } else {
        row.klass = "any";
        row.bound = 24 * cert.genus * (cert.genus - 1);
    }
    row.ratio = Rational(row.order, row.bound);
    return row;
}

RunReport report_from_search(const SearchReport& s) {
    RunReport r;
    r.command = "search";
    r.inputs.emplace_back("genus", std::to_string(s.genus));
    r.inputs.emplace_back("class", s.klass);
    r.inputs.emplace_back("max_vertices", std::to_string(s.caps.max_vertices));
    r.inputs.emplace_back("max_edges", std::to_string(s.caps.max_edges));
    r.results.emplace_back("bound", std::to_string(s.bound));
    r.results.emplace_back("best_order", std::to_string(s.best_order));
    r.results.emplace_back("gap", std::to_string(s.bound - s.best_order));
    r.results.emplace_back("scanned_from", std::to_string(s.scanned_from));
    r.results.emplace_back("scanned_to", std::to_string(s.scanned_to));
    r.results.emplace_back("examined", std::to_string(s.examined));
    r.results.emplace_back("complete", s.complete ? "true" : "false");
    if (s.witness) r.results.emplace_back("witness_digest", instance_digest(*s.witness));
    for (const SearchFind& f : s.found) {
        ReportRow row;
        row.genus = s.genus;
        row.klass = s.klass;
        row.order = f.order;
        row.bound = s.bound;
        row.ratio = Rational(f.order, s.bound);
        row.faithful = true;  // only faithful instances are recorded as finds
        row.digest = f.digest;
        r.rows.push_back(std::move(row));
        r.certificates.push_back(f.certificate);
    }
    r.notes = s.notes;
    return r;
}

}  // namespace handlecalc
