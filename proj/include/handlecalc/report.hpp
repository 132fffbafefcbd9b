#pragma once

#include "handlecalc/explorer.hpp"

#include <string>
#include <utility>
#include <vector>

namespace handlecalc {

/// One row of the fixed result table:
/// genus, class, order, bound, ratio, faithful, witness-digest.
struct ReportRow {
    long long genus = 0;
    std::string klass;
    long long order = 0;
    long long bound = 0;
    Rational ratio;  // order / bound, exact
    bool faithful = false;
    std::string digest;
};

/// Outcome of one executed command. Rationals are carried as exact "p/q"
/// strings in inputs/results; floats appear only in wall_seconds.
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> results;
    std::vector<ReportRow> rows;
    std::vector<BoundCertificate> certificates;
    std::vector<std::string> notes;
    double wall_seconds = 0;
};

/// Renders md, csv, or json. CSV carries the row table only (fixed header);
/// md and json carry the full report. Deterministic for a given report.
std::string emit_report(const RunReport& r, const std::string& format);

/// Inverse of the json rendering, for report files written by other runs.
RunReport parse_run_report(const std::string& text);

/// Row for a certified instance. The bound column: cyclic targets measure
/// against 4(g-1)^2, others against 24g(g-1); instances carrying the
/// central-product family provenance note measure against the sharp 2g^2.
ReportRow row_for_document(const InstanceDocument& doc, const BoundCertificate& cert);

/// Full report for a finished sweep: summary results, one row per find
/// (against the class bound), certificates, and the sweep notes.
RunReport report_from_search(const SearchReport& s);

}  // namespace handlecalc
