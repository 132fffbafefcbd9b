#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "handlecalc/report.hpp"

using namespace handlecalc;

TEST_CASE("cyclic family row: order 12 against the quadratic bound 36") {
    InstanceDocument doc = example_cyclic_family(3);
    ReportRow row = row_for_document(doc, certify_document(doc));
    CHECK(row.genus == 4);
    CHECK(row.klass == "cyclic");
    CHECK(row.order == 12);
    CHECK(row.bound == 36);
    CHECK(row.ratio == Rational(1, 3));
    CHECK(row.ratio.str() == "1/3");
    CHECK(row.faithful);
    CHECK(row.digest == instance_digest(doc));
}

TEST_CASE("central-product family row measures against its sharp value") {
    InstanceDocument doc = example_so4_family(2);
    ReportRow row = row_for_document(doc, certify_document(doc));
    CHECK(row.genus == 4);
    CHECK(row.klass == "any");
    CHECK(row.order == 32);
    CHECK(row.bound == 32);  // 2g^2, attained
    CHECK(row.ratio == Rational(1));
    CHECK(row.faithful);
}

TEST_CASE("without the family provenance note the generic bound applies") {
    InstanceDocument doc = example_so4_family(2);
    doc.notes.clear();
    ReportRow row = row_for_document(doc, certify_document(doc));
    CHECK(row.klass == "any");  // target is not cyclic
    CHECK(row.bound == 24 * 4 * 3);
    CHECK(row.ratio == Rational(32, 288));
}

TEST_CASE("csv output is the fixed row table") {
    RunReport r;
    r.command = "report";
    r.rows.push_back(row_for_document(example_cyclic_family(3),
                                      certify_document(example_cyclic_family(3))));
    r.rows.push_back(row_for_document(example_so4_family(2),
                                      certify_document(example_so4_family(2))));
    std::string csv = emit_report(r, "csv");
    std::string digest3 = instance_digest(example_cyclic_family(3));
    std::string digest2 = instance_digest(example_so4_family(2));
    CHECK(csv == "genus,class,order,bound,ratio,faithful,witness-digest\n"
                 "4,cyclic,12,36,1/3,true," + digest3 + "\n"
                 "4,any,32,32,1,true," + digest2 + "\n");
    CHECK(emit_report(r, "csv") == csv);
}

TEST_CASE("json form round trips exactly") {
    RunReport r;
    r.command = "example";
    r.inputs.emplace_back("family", "cyclic");
    r.inputs.emplace_back("x", "3");
    r.results.emplace_back("chi", Rational(-18, 72).str());
    r.results.emplace_back("genus", "4");
    InstanceDocument doc = example_cyclic_family(3);
    r.rows.push_back(row_for_document(doc, certify_document(doc)));
    r.certificates.push_back(certify_document(doc));
    r.notes.push_back("demonstration document");
    r.wall_seconds = 0.25;

    std::string text = emit_report(r, "json");
    RunReport back = parse_run_report(text);
    CHECK(emit_report(back, "json") == text);

    CHECK(back.command == "example");
    REQUIRE(back.inputs.size() == 2);
    CHECK(back.inputs[0] == std::pair<std::string, std::string>("family", "cyclic"));
    CHECK(back.results[0].second == "-1/4");
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0].ratio == Rational(1, 3));
    REQUIRE(back.certificates.size() == 1);
    CHECK(back.certificates[0].applicable_case == certify_document(doc).applicable_case);
    CHECK(back.certificates[0].all_hold);
    CHECK(back.certificates[0].inequalities.size() ==
          certify_document(doc).inequalities.size());
    CHECK(back.wall_seconds == 0.25);
}

TEST_CASE("empty report is still a valid document in every format") {
    RunReport r;
    r.command = "search";
    r.results.emplace_back("best_order", "0");
    std::string json = emit_report(r, "json");
    RunReport back = parse_run_report(json);
    CHECK(back.rows.empty());
    CHECK(back.certificates.empty());
    CHECK(emit_report(back, "json") == json);
    CHECK(emit_report(r, "csv") == "genus,class,order,bound,ratio,faithful,witness-digest\n");
    CHECK(emit_report(r, "md").find("# search report") == 0);
}

TEST_CASE("markdown carries the row table and certificate verdicts") {
    InstanceDocument doc = example_so4_family(2);
    RunReport r;
    r.command = "report";
    r.rows.push_back(row_for_document(doc, certify_document(doc)));
    r.certificates.push_back(certify_document(doc));
    std::string md = emit_report(r, "md");
    CHECK(md.find("| genus | class | order | bound | ratio | faithful | witness-digest |") !=
          std::string::npos);
    CHECK(md.find("| 4 | any | 32 | 32 | 1 | true | ") != std::string::npos);
    CHECK(md.find("## Certificate " + instance_digest(doc)) != std::string::npos);
    CHECK(md.find("all inequalities hold") != std::string::npos);
    CHECK(md.find("| NO |") == std::string::npos);
    CHECK(emit_report(r, "md") == md);
}

TEST_CASE("search report carries bound, best order, and the gap") {
    SearchCaps caps;
    caps.scan_start = 6;
    caps.scan_floor = 6;
    SearchReport s = search_max_order(3, "cyclic", caps);
    REQUIRE(s.best_order == 6);

    RunReport r = report_from_search(s);
    CHECK(r.command == "search");
    auto result = [&](const std::string& key) -> std::string {
        for (const auto& [k, v] : r.results)
            if (k == key) return v;
        return "";
    };
    CHECK(result("bound") == "16");
    CHECK(result("best_order") == "6");
    CHECK(result("gap") == "10");
    CHECK(result("witness_digest") == instance_digest(*s.witness));
    REQUIRE(r.rows.size() == s.found.size());
    for (size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].order == 6);
        CHECK(r.rows[i].bound == 16);
        CHECK(r.rows[i].ratio == Rational(6, 16));
        CHECK(r.rows[i].faithful);
        CHECK(r.rows[i].digest == s.found[i].digest);
    }
    CHECK(r.certificates.size() == s.found.size());

    // the emitted document survives a round trip
    RunReport back = parse_run_report(emit_report(r, "json"));
    CHECK(emit_report(back, "json") == emit_report(r, "json"));
}

TEST_CASE("malformed report documents are rejected") {
    CHECK_THROWS_AS(parse_run_report("not json"), ValidationError);
    CHECK_THROWS_AS(parse_run_report("[1,2]"), ValidationError);
    CHECK_THROWS_AS(parse_run_report("{\"command\":\"x\"}"), ValidationError);
    CHECK_THROWS_AS(parse_run_report("{\"command\":\"x\",\"rows\":[{\"genus\":2}]}"),
                    ValidationError);
    RunReport r;
    CHECK_THROWS_AS(emit_report(r, "xml"), ValidationError);
}
