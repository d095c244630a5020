#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csd/outcome.hpp"
#include "csd/panel.hpp"
#include "csd/simulation.hpp"

namespace csd {

// One row of a test report. Numbers are serialized with 17 significant
// digits so every printed value re-parses to its in-memory double.
struct ReportRecord {
    std::string method;
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double alpha = 0.05;
    std::map<std::string, double> aux;
};

ReportRecord to_record(const TestOutcome& outcome);

// Long-format panel CSV with header unit,time,y,x1,...,x{p-1}; every
// (unit,time) pair exactly once and all units on the same time grid.
// An intercept column is prepended unless add_intercept is false.
PanelDataset load_panel_csv(const std::string& path, bool add_intercept = true);
PanelDataset load_panel_csv(std::istream& in, bool add_intercept = true);

// Inverse of load_panel_csv (drops the auto-prepended intercept column
// when had_intercept is true); used for round-trip checks.
void write_panel_csv(std::ostream& out, const PanelDataset& data, bool had_intercept = true);

// S_N, L_N, T_C on one dataset; comparators (LM_BP, LM_PUY, LM_FJLX, CD_P)
// appended when with_comparators is set. Errors are rethrown tagged with
// the failing method's name.
std::vector<ReportRecord> run_tests(const PanelDataset& data, double alpha, double nu,
                                    bool with_comparators = false);

// 17-significant-digit round-trippable formatting.
std::string format_double(double v);

void write_records_csv(std::ostream& out, const std::vector<ReportRecord>& records);
void write_records_json(std::ostream& out, const std::vector<ReportRecord>& records);
void write_report_csv(std::ostream& out, const McReport& report);
void write_report_json(std::ostream& out, const McReport& report);

// CLI entry point (subcommands: test, simulate, table, sweep).
// Returns 0 on success, 1 on computational errors, 2 on input errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csd
