#include "gei/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "gei/csv.hpp"
#include "gei/dependogram.hpp"
#include "gei/dgp.hpp"
#include "gei/errors.hpp"
#include "gei/inference.hpp"
#include "gei/model_json.hpp"
#include "gei/pit.hpp"
#include "gei/report_json.hpp"
#include "gei/study_io.hpp"

namespace gei::cli {
namespace {

constexpr std::size_t kMinObservations = 20;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

/// Column by header name, or by 1-based position when the text is a number.
std::size_t find_column(const CsvTable& table, const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it != table.header.end()) return static_cast<std::size_t>(it - table.header.begin());
    if (!name.empty() && std::all_of(name.begin(), name.end(), ::isdigit)) {
        const std::size_t k = std::stoul(name);
        if (k >= 1 && k <= table.header.size()) return k - 1;
    }
    throw DataError("no column '" + name + "' in the input");
}

std::vector<double> column_values(const CsvTable& table, std::size_t j) {
    const auto c = table.values.col(j);
    return {c.begin(), c.end()};
}

// ---------------------------------------------------------------------------------------------
// test

struct TestArgs {
    std::string data;
    std::string model;
    std::string columns;
    int m2 = 5;
    int m3 = 2;
    bool no_triples = false;
    std::size_t randomizations = 1;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::string stats;
    std::string report;
    std::string dependogram;
    std::string dependogram_csv;
    bool fail_on_reject = false;
};

void print_report(const StatisticReport& report, std::ostream& out) {
    out << "n = " << report.metadata.n << ", d = " << report.metadata.d << ", M2 = " << report.metadata.pair_max_lag
        << ", M3 = " << report.metadata.triple_max_lag << ", randomizations = " << report.metadata.randomizations
        << ", seed = " << report.metadata.seed << "\n";
    out << std::left << std::setw(10) << "statistic" << std::right << std::setw(14) << "value" << std::setw(12)
        << "reference" << std::setw(8) << "dof" << std::setw(12) << "p-value" << "\n";
    for (const auto& c : report.combined) {
        out << std::left << std::setw(10) << c.name << std::right << std::setw(14) << std::setprecision(6) << c.value
            << std::setw(12) << c.reference << std::setw(8);
        if (c.reference == "chi2") out << c.dof;
        else out << "-";
        out << std::setw(12) << std::setprecision(4) << c.p_value << (c.p_value < report.metadata.alpha ? "  *" : "")
            << "\n";
    }
}

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
    const CsvTable table = read_csv_file(a.data);
    std::vector<std::size_t> cols;
    if (a.columns.empty()) {
        for (std::size_t j = 0; j < table.header.size(); ++j) cols.push_back(j);
    } else {
        for (const auto& name : split_list(a.columns)) cols.push_back(find_column(table, name));
    }
    const std::size_t n = table.values.rows();
    if (n < kMinObservations) {
        throw DataError(a.data + ": " + std::to_string(n) + " observations, at least " +
                        std::to_string(kMinObservations) + " are required");
    }

    std::vector<ColumnModel> models(cols.size());
    if (!a.model.empty()) {
        models = model_config_from_json(read_file(a.model));
        if (models.size() != cols.size()) {
            throw DataError(a.model + ": " + std::to_string(models.size()) + " column models for " +
                            std::to_string(cols.size()) + " data columns");
        }
    }

    Matrix values(n, cols.size());
    std::vector<std::string> labels;
    std::vector<std::vector<ConditionalLaw>> laws;
    std::vector<std::string> notes;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::string& label = table.header[cols[k]];
        labels.push_back(label);
        const std::vector<double> x = column_values(table, cols[k]);
        std::copy(x.begin(), x.end(), values.col(k).begin());
        const ColumnModel& m = models[k];
        try {
            switch (m.mode) {
                case ColumnModel::Mode::raw:
                    for (std::size_t t = 0; t < n; ++t) {
                        if (!(x[t] >= 0.0 && x[t] <= 1.0)) {
                            throw DataError("row " + std::to_string(t + 1) + ": raw generalized errors must lie in [0, 1]");
                        }
                    }
                    laws.emplace_back(n, UniformLaw{});
                    break;
                case ColumnModel::Mode::spec: laws.push_back(conditional_trace(*m.spec, x)); break;
                case ColumnModel::Mode::fit: {
                    const FitResult fit = fit_model(m.fit, x);
                    err << "column " << label << ": fitted " << m.fit.kind << ", log-likelihood "
                        << fit.log_likelihood_trace.back() << " after " << fit.iterations << " iterations\n";
                    for (const auto& w : fit.warnings) notes.push_back("column " + label + ": " + w);
                    if (!fit.converged) notes.push_back("column " + label + ": fit did not converge");
                    laws.push_back(conditional_trace(fit.spec, x));
                    break;
                }
            }
        } catch (const Error& e) {
            throw DataError("column " + label + ": " + e.what());
        }
    }

    const SeriesPanel series(std::move(values), labels);
    const ConditionalTrace trace(std::move(laws));
    const auto panel = randomized_pit(series, trace, {a.randomizations, a.seed});

    TestOptions options;
    options.pair_max_lag = a.m2;
    options.triple_max_lag = a.m3;
    options.include_triples = !a.no_triples;
    options.alpha = a.alpha;
    if (!a.stats.empty()) {
        options.statistics.clear();
        for (const auto& s : split_list(a.stats)) {
            const auto f = statistic_family_from_string(s);
            if (std::find(options.statistics.begin(), options.statistics.end(), f) == options.statistics.end())
                options.statistics.push_back(f);
        }
    }
    StatisticReport report = evaluate(panel, options);
    report.warnings.insert(report.warnings.end(), notes.begin(), notes.end());

    print_report(report, out);
    for (const auto& w : report.warnings) err << "warning: " << w << "\n";

    if (!a.report.empty()) write_file(a.report, report_to_json(report));
    if (!a.dependogram.empty() || !a.dependogram_csv.empty()) {
        const Dependogram dg = make_dependogram(report, a.alpha);
        if (!a.dependogram.empty()) write_file(a.dependogram, dependogram_svg(dg));
        std::string csv_path = a.dependogram_csv;
        if (csv_path.empty()) csv_path = std::filesystem::path(a.dependogram).replace_extension(".csv").string();
        write_file(csv_path, dependogram_csv(dg));
    }
    return a.fail_on_reject && report.rejects() ? kExitReject : kExitOk;
}

// ---------------------------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string spec;
    std::string out_dir;
    std::size_t threads = 0;
    std::size_t replicates = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    StudyFile file = load_study_file(a.spec);
    if (a.replicates > 0) {
        for (auto& s : file.studies) s.replicates = a.replicates;
    }
    std::vector<McStudyResult> results;
    for (const auto& s : file.studies) {
        results.push_back(run_study(s, a.threads));
        const auto& r = results.back();
        out << r.spec.name << ": " << r.completed << " replicates in " << std::fixed << std::setprecision(1)
            << r.runtime_seconds << " s" << std::defaultfloat << "\n";
        for (const auto& row : r.rejection) {
            out << "  " << std::left << std::setw(6) << row.statistic << std::right << std::fixed
                << std::setprecision(1) << std::setw(7) << row.percent << " %" << std::defaultfloat << "\n";
        }
        for (const auto& q : r.quantiles) {
            out << "  " << std::left << std::setw(6) << q.statistic << std::right << " M=" << std::setw(4)
                << q.averaging << " q" << q.level * 100.0 << " = " << std::setprecision(6) << q.value << "\n";
        }
        for (const auto& m : r.failure_messages) err << "warning: " << r.spec.name << ": " << m << "\n";
    }
    for (const auto& path : write_study_outputs(a.out_dir, file, results)) err << "wrote " << path << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// fit

struct FitArgs {
    std::string data;
    std::string column;
    FitRequest request;
    std::string out_path;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
    const CsvTable table = read_csv_file(a.data);
    const std::size_t j = a.column.empty() ? 0 : find_column(table, a.column);
    if (table.values.rows() < kMinObservations) {
        throw DataError(a.data + ": at least " + std::to_string(kMinObservations) + " observations are required");
    }
    const FitResult fit = fit_model(a.request, column_values(table, j));
    const std::string doc = model_to_json(fit.spec);
    if (a.out_path.empty()) out << doc << "\n";
    else write_file(a.out_path, doc + "\n");
    err << a.request.kind << " on column " << table.header[j] << ": log-likelihood " << std::setprecision(10)
        << fit.log_likelihood_trace.back() << ", " << fit.iterations << " iterations"
        << (fit.converged ? "" : " (not converged)") << "\n";
    for (const auto& w : fit.warnings) err << "warning: " << w << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string dgp = "dgp2";
    std::string copula = "independence";
    double tau = 0.0;
    std::string margin = "normal";
    std::size_t n = 300;
    int lag_shift = 0;
    std::uint64_t seed = 1;
    std::size_t replicate = 0;
    std::string out_path;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream&) {
    McStudySpec s;
    s.dgp = dgp_from_string(a.dgp);
    s.copula.family = copula_family_from_string(a.copula);
    s.copula.kendall_tau = a.tau;
    s.copula.dimension = s.dgp == Dgp::dgp3 || s.copula.family == CopulaFamily::romano_siegel ? 3 : 2;
    if (a.margin == "normal") s.margin = BaseFamily::normal;
    else if (a.margin == "exponential") s.margin = BaseFamily::centered_exponential;
    else if (a.margin == "pareto") s.margin = BaseFamily::centered_pareto6;
    else throw InvalidArgument("unknown margin '" + a.margin + "'");
    s.n = a.n;
    s.lag_shift = a.lag_shift;
    s.seed = a.seed;
    const DgpSample sample = generate_dgp(s, a.replicate);

    std::ostringstream csv;
    const std::size_t d = sample.series.d();
    for (std::size_t j = 0; j < d; ++j) csv << (j ? "," : "") << "x" << j + 1;
    csv << "\n";
    for (std::size_t t = 0; t < sample.series.n(); ++t) {
        for (std::size_t j = 0; j < d; ++j) csv << (j ? "," : "") << csv_number(sample.series.values()(t, j));
        csv << "\n";
    }
    if (a.out_path.empty()) out << csv.str();
    else write_file(a.out_path, csv.str());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Independence tests for multivariate time series via generalized errors", "gei"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gei 0.3.0");

    TestArgs ta;
    auto* test = app.add_subcommand("test", "Test independence of the series in a CSV file");
    test->add_option("data", ta.data, "CSV file, header row, one column per series")->required();
    test->add_option("--model", ta.model, "JSON column-model configuration (default: columns are raw errors)");
    test->add_option("--columns", ta.columns, "Comma-separated column names or 1-based positions");
    test->add_option("--m2", ta.m2, "Maximum lag for pairs")->capture_default_str()->check(CLI::NonNegativeNumber);
    test->add_option("--m3", ta.m3, "Maximum lag for triples")->capture_default_str()->check(CLI::NonNegativeNumber);
    test->add_flag("--no-triples", ta.no_triples, "Only use sets of two series");
    test->add_option("--randomizations,-M", ta.randomizations, "Randomized PIT draws averaged")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    test->add_option("--seed", ta.seed, "Seed of the randomization")->capture_default_str();
    test->add_option("--alpha", ta.alpha, "Level of the test")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    test->add_option("--stats", ta.stats, "Statistic families: cvm,pearson,spearman,vdw,savage or W,H,H_S,...");
    test->add_option("--report", ta.report, "Write the JSON report here");
    test->add_option("--dependogram", ta.dependogram, "Write the dependogram SVG here (and a CSV next to it)");
    test->add_option("--dependogram-csv", ta.dependogram_csv, "Write the dependogram CSV here");
    test->add_flag("--fail-on-reject", ta.fail_on_reject, "Exit with status 2 when a combined test rejects");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Run a Monte-Carlo study described by a TOML or JSON file");
    sim->add_option("spec", sa.spec, "Study file (.toml or .json)")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", sa.out_dir, "Output directory")->required();
    sim->add_option("--threads", sa.threads, "Worker threads (0: GEI_THREADS or all cores)");
    sim->add_option("--replicates", sa.replicates, "Override every study's replicate count");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit a model to one column and write its JSON spec");
    fit->add_option("data", fa.data, "CSV file")->required();
    fit->add_option("--column", fa.column, "Column name or 1-based position (default: first)");
    fit->add_option("--kind", fa.request.kind, "gaussian_hmm, poisson_hmm or ingarch")
        ->capture_default_str()
        ->check(CLI::IsMember({"gaussian_hmm", "poisson_hmm", "ingarch"}));
    fit->add_option("--regimes,-J", fa.request.regimes, "HMM regimes")->capture_default_str()->check(CLI::PositiveNumber);
    fit->add_option("--order", fa.request.order, "HMM autoregressive order")->capture_default_str()->check(CLI::NonNegativeNumber);
    fit->add_flag("--zero-inflated", fa.request.zero_inflated, "Gaussian HMM regime 1 is a point mass at zero");
    fit->add_option("--p", fa.request.p, "INGARCH lagged-intensity order")->capture_default_str()->check(CLI::NonNegativeNumber);
    fit->add_option("--q", fa.request.q, "INGARCH lagged-count order")->capture_default_str()->check(CLI::PositiveNumber);
    fit->add_option("--out", fa.out_path, "Model JSON output (default: stdout)");

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Write one sample of a simulation DGP as CSV");
    gen->add_option("--dgp", ga.dgp, "dgp1, dgp2, dgp3 or iid_uniform")->capture_default_str();
    gen->add_option("--copula", ga.copula, "independence, gaussian, frank, clayton, tentmap, romano_siegel")
        ->capture_default_str();
    gen->add_option("--tau", ga.tau, "Kendall's tau of the copula")->capture_default_str();
    gen->add_option("--margin", ga.margin, "dgp1 innovations: normal, exponential or pareto")->capture_default_str();
    gen->add_option("-n", ga.n, "Sample size")->capture_default_str();
    gen->add_option("--lag-shift", ga.lag_shift, "Pair u_t with v_{t+shift}")->capture_default_str();
    gen->add_option("--seed", ga.seed, "Seed")->capture_default_str();
    gen->add_option("--replicate", ga.replicate, "Replicate index under the seed")->capture_default_str();
    gen->add_option("--out", ga.out_path, "CSV output (default: stdout)");

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    if (argv.empty()) argv.push_back("gei");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (test->parsed()) return cmd_test(ta, out, err);
        if (sim->parsed()) return cmd_simulate(sa, out, err);
        if (fit->parsed()) return cmd_fit(fa, out, err);
        if (gen->parsed()) return cmd_generate(ga, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace gei::cli
