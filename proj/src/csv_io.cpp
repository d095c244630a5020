#include "csd/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csd/combined_test.hpp"
#include "csd/comparators.hpp"
#include "csd/correlation.hpp"
#include "csd/errors.hpp"
#include "csd/max_test.hpp"
#include "csd/sum_test.hpp"

namespace csd {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ReportRecord to_record(const TestOutcome& outcome) {
    ReportRecord rec;
    rec.method = method_name(outcome.method);
    rec.statistic = outcome.statistic;
    rec.p_value = outcome.p_value;
    rec.reject = outcome.reject;
    rec.alpha = outcome.alpha;
    rec.aux = outcome.aux;
    return rec;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse " + what + " value '" + s + "'");
    }
}

}  // namespace

PanelDataset load_panel_csv(std::istream& in, bool add_intercept) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "unit" || header[1] != "time" || header[2] != "y")
        throw ParseError("line 1: expected header unit,time,y,x1,...");
    const int n_x = static_cast<int>(header.size()) - 3;
    for (int k = 0; k < n_x; ++k) {
        if (header[3 + k] != "x" + std::to_string(k + 1))
            throw ParseError("line 1: expected regressor column x" + std::to_string(k + 1));
    }

    struct Obs {
        double y;
        std::vector<double> x;
    };
    std::vector<std::string> unit_order;
    std::map<std::string, std::map<double, Obs>> units;
    std::set<double> times;

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != 3 + n_x)
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(3 + n_x) +
                             " fields, got " + std::to_string(fields.size()));
        const std::string& unit = fields[0];
        const double time = parse_number(fields[1], line_no, "time");
        Obs obs;
        obs.y = parse_number(fields[2], line_no, "y");
        obs.x.resize(n_x);
        for (int k = 0; k < n_x; ++k) obs.x[k] = parse_number(fields[3 + k], line_no, "regressor");

        if (units.find(unit) == units.end()) unit_order.push_back(unit);
        auto& series = units[unit];
        if (!series.emplace(time, std::move(obs)).second)
            throw DuplicateObservation("duplicate observation for unit " + unit + " at time " + format_double(time));
        times.insert(time);
    }

    if (unit_order.empty()) throw ParseError("no observations found");
    for (const std::string& unit : unit_order) {
        const auto& series = units.at(unit);
        for (double time : times) {
            if (series.find(time) == series.end())
                throw UnbalancedPanel("unit " + unit + " is missing time " + format_double(time));
        }
    }

    PanelDataset data;
    data.n_units = static_cast<int>(unit_order.size());
    data.n_periods = static_cast<int>(times.size());
    data.n_regressors = n_x + (add_intercept ? 1 : 0);
    if (data.n_regressors < 1) throw ParseError("no regressors: provide x columns or keep the intercept");
    data.y.resize(data.n_units, data.n_periods);
    data.x.resize(data.n_units);

    const std::vector<double> grid(times.begin(), times.end());
    for (int i = 0; i < data.n_units; ++i) {
        const auto& series = units.at(unit_order[i]);
        data.x[i].resize(data.n_periods, data.n_regressors);
        for (int s = 0; s < data.n_periods; ++s) {
            const Obs& obs = series.at(grid[s]);
            data.y(i, s) = obs.y;
            int col = 0;
            if (add_intercept) data.x[i](s, col++) = 1.0;
            for (int k = 0; k < n_x; ++k) data.x[i](s, col++) = obs.x[k];
        }
    }
    // Structural checks only; the N >= 3 requirement of the tests is
    // enforced when residuals are built, so small panels still load.
    if (data.n_periods <= data.n_regressors)
        throw InputError("panel has T = " + std::to_string(data.n_periods) + " periods but p = " +
                         std::to_string(data.n_regressors) + " regressors; need T > p");
    return data;
}

PanelDataset load_panel_csv(const std::string& path, bool add_intercept) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    return load_panel_csv(in, add_intercept);
}

void write_panel_csv(std::ostream& out, const PanelDataset& data, bool had_intercept) {
    const int first_x = had_intercept ? 1 : 0;
    const int n_x = data.n_regressors - first_x;
    out << "unit,time,y";
    for (int k = 0; k < n_x; ++k) out << ",x" << (k + 1);
    out << "\n";
    for (int i = 0; i < data.n_units; ++i) {
        for (int s = 0; s < data.n_periods; ++s) {
            out << (i + 1) << "," << (s + 1) << "," << format_double(data.y(i, s));
            for (int k = 0; k < n_x; ++k) out << "," << format_double(data.x[i](s, first_x + k));
            out << "\n";
        }
    }
}

std::vector<ReportRecord> run_tests(const PanelDataset& data, double alpha, double nu, bool with_comparators) {
    data.validate();
    const ResidualSet resids = build_residuals(data);
    const CorrMatrix corr = residual_correlations(resids);

    std::vector<ReportRecord> records;
    const auto run = [&](const char* name, auto&& fn) {
        try {
            records.push_back(to_record(fn()));
        } catch (const Error& e) {
            throw Error(std::string(name) + ": " + e.what());
        }
    };
    run("L_N", [&] { return max_test(resids, corr, alpha, nu); });
    run("S_N", [&] { return sum_test(resids, corr, alpha); });
    run("T_C", [&] {
        return combined_test(max_test(resids, corr, alpha, nu), sum_test(resids, corr, alpha), alpha);
    });
    if (with_comparators) {
        run("LM_BP", [&] { return lm_bp_test(corr, data.n_periods, alpha); });
        run("LM_PUY", [&] { return lm_puy_test(resids, corr, alpha); });
        run("LM_FJLX", [&] { return lm_fjlx_test(resids, corr, alpha); });
        run("CD_P", [&] { return cd_p_test(corr, data.n_periods, alpha); });
    }
    return records;
}

void write_records_csv(std::ostream& out, const std::vector<ReportRecord>& records) {
    out << "method,statistic,p_value,reject,alpha\n";
    for (const ReportRecord& r : records) {
        out << r.method << "," << format_double(r.statistic) << "," << format_double(r.p_value) << ","
            << (r.reject ? 1 : 0) << "," << format_double(r.alpha) << "\n";
    }
}

void write_records_json(std::ostream& out, const std::vector<ReportRecord>& records) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ReportRecord& r : records) {
        nlohmann::ordered_json item;
        item["method"] = r.method;
        item["statistic"] = r.statistic;
        item["p_value"] = r.p_value;
        item["reject"] = r.reject;
        item["alpha"] = r.alpha;
        item["aux"] = r.aux;
        doc.push_back(item);
    }
    out << doc.dump(2) << "\n";
}

void write_report_csv(std::ostream& out, const McReport& report) {
    out << "method,rejection_rate,mc_std_error,rejections,failures,reps\n";
    for (Method m : report.methods()) {
        out << method_name(m) << "," << format_double(report.rejection_rate(m)) << ","
            << format_double(report.mc_std_error(m)) << "," << report.rejections.at(m) << ","
            << report.failures.at(m) << "," << report.reps_completed << "\n";
    }
}

void write_report_json(std::ostream& out, const McReport& report) {
    nlohmann::ordered_json doc;
    doc["reps_completed"] = report.reps_completed;
    doc["psi_repairs"] = report.psi_repairs;
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (Method m : report.methods()) {
        nlohmann::ordered_json item;
        item["method"] = method_name(m);
        item["rejection_rate"] = report.rejection_rate(m);
        item["mc_std_error"] = report.mc_std_error(m);
        item["rejections"] = report.rejections.at(m);
        item["failures"] = report.failures.at(m);
        methods.push_back(item);
    }
    doc["methods"] = methods;
    out << doc.dump(2) << "\n";
}

}  // namespace csd
