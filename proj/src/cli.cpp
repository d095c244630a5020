#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csd/csv_io.hpp"
#include "csd/errors.hpp"
#include "csd/simulation.hpp"

namespace csd {

namespace {

ErrorProcess parse_process(const std::string& s) {
    if (s == "ar1") return ErrorProcess::AR1;
    if (s == "arma11") return ErrorProcess::ARMA11;
    throw InputError("unknown error process: " + s + " (expected ar1 or arma11)");
}

Innovation parse_innovation(const std::string& s) {
    if (s == "normal") return Innovation::Normal;
    if (s == "t6") return Innovation::T6;
    if (s == "chi5") return Innovation::Chi5;
    throw InputError("unknown innovation distribution: " + s + " (expected normal, t6 or chi5)");
}

void parse_alt(const std::string& s, McConfig& config) {
    if (s == "none") {
        config.alt = AltKind::None;
    } else if (s == "sma") {
        config.alt = AltKind::Sma;
    } else if (s == "sparse") {
        config.alt = AltKind::Sparse;
    } else if (s.rfind("density:", 0) == 0) {
        config.alt = AltKind::Density;
        try {
            config.density_k = std::stoi(s.substr(8));
        } catch (const std::exception&) {
            throw InputError("bad density level in --alt " + s);
        }
    } else {
        throw InputError("unknown alternative: " + s + " (expected none, sma, sparse or density:K)");
    }
}

void parse_table_cell(const std::string& cell, McConfig& config) {
    std::stringstream ss(cell);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("bad cell component '" + item + "' (expected key=value)");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "N")
            config.n_units = std::stoi(value);
        else if (key == "T")
            config.n_periods = std::stoi(value);
        else if (key == "p")
            config.n_regressors = std::stoi(value);
        else if (key == "dist")
            config.innovation = parse_innovation(value);
        else if (key == "proc")
            config.process = parse_process(value);
        else
            throw InputError("unknown cell key '" + key + "'");
    }
}

void emit_report(std::ostream& out, const McReport& report, const std::string& format) {
    if (format == "json")
        write_report_json(out, report);
    else
        write_report_csv(out, report);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-sectional independence tests for serially correlated panels"};
    app.require_subcommand(1);

    std::string format = "csv";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    // Let --format (and other global flags) appear after the subcommand name.
    app.fallthrough();

    // ---- test ----
    auto* test_cmd = app.add_subcommand("test", "Run the tests on a panel CSV");
    std::string input_path;
    double alpha = 0.05;
    double nu = 1.42;
    bool comparators = false;
    bool no_intercept = false;
    test_cmd->add_option("--input", input_path, "Panel CSV (unit,time,y,x1,...)")->required();
    test_cmd->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    test_cmd->add_option("--nu", nu, "Thresholding constant")->capture_default_str();
    test_cmd->add_flag("--comparators", comparators, "Also run LM_BP, LM_PUY, LM_FJLX, CD_P");
    test_cmd->add_flag("--no-intercept", no_intercept, "Do not prepend an intercept column");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo size/power run");
    McConfig config;
    std::string process_str = "ar1", dist_str = "normal", alt_str = "none";
    sim_cmd->set_config("--config", "", "Flat key=value config file (flags take precedence)");
    sim_cmd->add_option("--N", config.n_units, "Number of units")->capture_default_str();
    sim_cmd->add_option("--T", config.n_periods, "Number of periods")->capture_default_str();
    sim_cmd->add_option("--p", config.n_regressors, "Regressors incl. intercept")->capture_default_str();
    sim_cmd->add_option("--null", process_str, "Error process")->check(CLI::IsMember({"ar1", "arma11"}));
    sim_cmd->add_option("--dist", dist_str, "Innovation distribution")->check(CLI::IsMember({"normal", "t6", "chi5"}));
    sim_cmd->add_option("--alt", alt_str, "Alternative: none, sma, sparse or density:K");
    sim_cmd->add_option("--delta", config.delta, "SMA strength")->capture_default_str();
    sim_cmd->add_option("--reps", config.reps, "Replications")->capture_default_str();
    sim_cmd->add_option("--alpha", config.alpha, "Significance level")->capture_default_str();
    sim_cmd->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("--nu", config.nu, "Thresholding constant")->capture_default_str();
    sim_cmd->add_option("--threads", config.threads, "Worker threads (0 = default)")->capture_default_str();
    sim_cmd->add_flag("--fixed-design", config.fixed_design, "Hold coefficients/regressors fixed across reps");
    sim_cmd->add_flag("--extra-lm", config.run_extra_lm, "Also run LM_BP and LM_FJLX");

    // ---- table ----
    auto* table_cmd = app.add_subcommand("table", "Run one published-table cell");
    int table_no = 1;
    std::string cell = "N=100,T=200,p=3,dist=normal,proc=ar1";
    int table_reps = 1000;
    double table_alpha = 0.05;
    std::uint64_t table_seed = 0;
    int table_threads = 0;
    table_cmd->add_option("--table", table_no, "Table number: 1 size, 2 SMA power, 3 sparse power")->capture_default_str()
        ->check(CLI::Range(1, 3));
    table_cmd->add_option("--cell", cell, "Cell spec, e.g. N=100,T=200,p=3,dist=normal,proc=ar1")->capture_default_str();
    table_cmd->add_option("--reps", table_reps, "Replications")->capture_default_str();
    table_cmd->add_option("--alpha", table_alpha, "Significance level")->capture_default_str();
    table_cmd->add_option("--seed", table_seed, "RNG seed")->capture_default_str();
    table_cmd->add_option("--threads", table_threads, "Worker threads")->capture_default_str();

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Density sweep (plot-ready power curves)");
    McConfig sweep_config;
    sweep_config.reps = 300;
    int k_min = 2, k_max = 16, k_step = 1;
    std::string sweep_process = "ar1", sweep_dist = "normal";
    sweep_cmd->add_option("--N", sweep_config.n_units, "Number of units")->capture_default_str();
    sweep_cmd->add_option("--T", sweep_config.n_periods, "Number of periods")->capture_default_str();
    sweep_cmd->add_option("--p", sweep_config.n_regressors, "Regressors incl. intercept")->capture_default_str();
    sweep_cmd->add_option("--null", sweep_process, "Error process")->check(CLI::IsMember({"ar1", "arma11"}));
    sweep_cmd->add_option("--dist", sweep_dist, "Innovation distribution")
        ->check(CLI::IsMember({"normal", "t6", "chi5"}));
    sweep_cmd->add_option("--kmin", k_min, "Smallest density level")->capture_default_str();
    sweep_cmd->add_option("--kmax", k_max, "Largest density level")->capture_default_str();
    sweep_cmd->add_option("--kstep", k_step, "Density level step")->capture_default_str();
    sweep_cmd->add_option("--reps", sweep_config.reps, "Replications per level")->capture_default_str();
    sweep_cmd->add_option("--alpha", sweep_config.alpha, "Significance level")->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_config.seed, "RNG seed")->capture_default_str();
    sweep_cmd->add_option("--threads", sweep_config.threads, "Worker threads")->capture_default_str();

    std::vector<std::string> argv(args);
    std::reverse(argv.begin(), argv.end()); // CLI11 parses right-to-left
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (test_cmd->parsed()) {
            const PanelDataset data = load_panel_csv(input_path, !no_intercept);
            const std::vector<ReportRecord> records = run_tests(data, alpha, nu, comparators);
            if (format == "json")
                write_records_json(out, records);
            else
                write_records_csv(out, records);
        } else if (sim_cmd->parsed()) {
            config.process = parse_process(process_str);
            config.innovation = parse_innovation(dist_str);
            parse_alt(alt_str, config);
            emit_report(out, run_monte_carlo(config), format);
        } else if (table_cmd->parsed()) {
            McConfig tc;
            parse_table_cell(cell, tc);
            tc.reps = table_reps;
            tc.alpha = table_alpha;
            tc.seed = table_seed;
            tc.threads = table_threads;
            tc.alt = table_no == 1 ? AltKind::None : (table_no == 2 ? AltKind::Sma : AltKind::Sparse);
            emit_report(out, run_monte_carlo(tc), format);
        } else if (sweep_cmd->parsed()) {
            sweep_config.process = parse_process(sweep_process);
            sweep_config.innovation = parse_innovation(sweep_dist);
            sweep_config.alt = AltKind::Density;
            if (k_step < 1) throw InputError("--kstep must be >= 1");
            out << "k,method,rejection_rate,mc_std_error,reps\n";
            for (int k = k_min; k <= k_max; k += k_step) {
                McConfig level = sweep_config;
                level.density_k = k;
                const McReport report = run_monte_carlo(level);
                for (Method m : report.methods()) {
                    out << k << "," << method_name(m) << "," << format_double(report.rejection_rate(m)) << ","
                        << format_double(report.mc_std_error(m)) << "," << report.reps_completed << "\n";
                }
            }
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace csd
