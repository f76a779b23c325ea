// Command-line front end. Every number printed here comes from a library
// call; the only work done in this file is flag plumbing and formatting.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebci/baselines.hpp"
#include "ebci/csvio.hpp"
#include "ebci/errors.hpp"
#include "ebci/intervals.hpp"
#include "ebci/simharness.hpp"

namespace {

using ebci::BadInput;
namespace csvio = ebci::csvio;
namespace intervals = ebci::intervals;
namespace baselines = ebci::baselines;
namespace sim = ebci::sim;

intervals::Side parse_side(const std::string& s)
{
    if (s == "two") return intervals::Side::two_sided;
    if (s == "upper") return intervals::Side::upper;
    if (s == "lower") return intervals::Side::lower;
    throw BadInput("--side must be two, upper or lower");
}

intervals::BoundaryMode parse_boundary(const std::string& s)
{
    if (s == "auto") return intervals::BoundaryMode::automatic;
    if (s == "interior") return intervals::BoundaryMode::interior;
    if (s == "left") return intervals::BoundaryMode::left;
    if (s == "right") return intervals::BoundaryMode::right;
    throw BadInput("--boundary must be auto, interior, left or right");
}

std::vector<double> numeric_column(const csvio::CsvTable& t, const std::string& name)
{
    const std::size_t col = t.column(name);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        try {
            out.push_back(csvio::parse_double(t.rows[r][col]));
        } catch (const BadInput& e) {
            // data row r is physical line r+2 (header is line 1)
            throw BadInput("column '" + name + "', line " + std::to_string(r + 2) +
                           ": " + e.what());
        }
    }
    return out;
}

std::string side_name(intervals::Side s)
{
    switch (s) {
        case intervals::Side::two_sided: return "two_sided";
        case intervals::Side::upper: return "upper";
        case intervals::Side::lower: return "lower";
    }
    return "?";
}

void print_interval(const intervals::IntervalResult& r, const std::string& format)
{
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

    if (format == "json") {
        nlohmann::json j;
        j["center"] = r.center;
        j["lower"] = r.lower;  // non-finite endpoints serialize as null
        j["upper"] = r.upper;
        j["radius"] = r.radius;
        j["h"] = r.h;
        j["t"] = r.t;
        j["proxy"] = r.proxy;
        j["order"] = r.order;
        j["alpha"] = r.alpha;
        j["side"] = side_name(r.side);
        j["mode"] = r.mode == intervals::Mode::fixed_eta ? "fixed-eta" : "eta-free";
        j["boundary"] = r.boundary;
        j["n"] = r.n;
        if (r.eta) j["eta"] = *r.eta;
        if (r.d_n) j["d_n"] = *r.d_n;
        j["warnings"] = r.warnings;
        std::cout << j.dump(2) << "\n";
        return;
    }

    csvio::CsvTable t;
    t.header = {"center", "lower", "upper", "radius", "h", "t", "proxy",
                "order", "alpha", "side", "mode", "boundary", "n"};
    t.rows.push_back({csvio::format_double(r.center), csvio::format_double(r.lower),
                      csvio::format_double(r.upper), csvio::format_double(r.radius),
                      csvio::format_double(r.h), csvio::format_double(r.t),
                      csvio::format_double(r.proxy), std::to_string(r.order),
                      csvio::format_double(r.alpha), side_name(r.side),
                      r.mode == intervals::Mode::fixed_eta ? "fixed-eta" : "eta-free",
                      r.boundary ? "1" : "0", std::to_string(r.n)});
    std::cout << csvio::emit_csv(t);
}

// shared flag block of the regress and density subcommands
struct PointFlags {
    std::string input;
    std::string x_col = "x";
    double x0 = 0.0;
    int order = 3;
    double alpha = 0.05;
    std::string mode = "eta-free";
    std::optional<double> eta;
    std::string side = "two";
    std::string boundary = "auto";
    double tau = 0.001;
    bool loglog = false;
    bool split = false;
    std::string format = "json";
};

void add_point_flags(CLI::App* cmd, PointFlags* f, bool density)
{
    cmd->add_option("--input", f->input, "input CSV with a header row")->required();
    cmd->add_option("--x-col", f->x_col, "covariate column name")
        ->capture_default_str();
    cmd->add_option("--x0", f->x0, "evaluation point")->required();
    cmd->add_option("--order", f->order,
                    density ? "kernel moment order S" : "local polynomial order S")
        ->capture_default_str();
    cmd->add_option("--alpha", f->alpha, "miscoverage level")->capture_default_str();
    cmd->add_option("--mode", f->mode, "eta-free or fixed-eta")
        ->capture_default_str()
        ->check(CLI::IsMember({"eta-free", "fixed-eta"}));
    cmd->add_option("--eta", f->eta, "bias budget constant (fixed-eta mode)");
    cmd->add_option("--side", f->side, "two, upper or lower")->capture_default_str();
    cmd->add_option("--boundary", f->boundary, "auto, interior, left or right")
        ->capture_default_str();
    cmd->add_option("--tau", f->tau, "exponent of the eta-free growth factor n^tau")
        ->capture_default_str();
    cmd->add_flag("--loglog", f->loglog,
                  "use log(n)loglog(n) for the eta-free growth factor instead of n^tau");
    cmd->add_flag("--split", f->split,
                  "calibrate two-sided eta-free interior intervals at alpha/2 "
                  "instead of the unified alpha");
    cmd->add_option("--out", f->format, "output format: json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
}

intervals::EtaFreePolicy policy_of(const PointFlags& f)
{
    intervals::EtaFreePolicy p;
    p.kind = f.loglog ? intervals::EtaFreePolicy::Kind::loglog
                      : intervals::EtaFreePolicy::Kind::power;
    p.tau = f.tau;
    return p;
}

void require_eta(const PointFlags& f)
{
    if (f.mode == "fixed-eta" && !f.eta)
        throw BadInput("--mode fixed-eta requires --eta");
}

void run_regress(const PointFlags& f, const std::string& y_col)
{
    require_eta(f);
    const auto table = csvio::parse_csv(csvio::read_file(f.input));
    ebci::lpreg::Sample s;
    s.xs = numeric_column(table, f.x_col);
    s.ys = numeric_column(table, y_col);

    const auto side = parse_side(f.side);
    const auto bmode = parse_boundary(f.boundary);
    const ebci::kernels::KernelSpec kernel{ebci::kernels::Family::epanechnikov,
                                           ebci::kernels::Support::interior};

    intervals::IntervalResult r;
    if (f.mode == "fixed-eta") {
        r = intervals::ebci_regression_fixed_eta(s, f.x0, f.order, f.alpha, *f.eta,
                                                 side, bmode, kernel);
    } else {
        r = intervals::ebci_regression_eta_free(s, f.x0, f.order, f.alpha, side,
                                                policy_of(f), bmode, kernel, !f.split);
    }
    print_interval(r, f.format);
}

void run_density(const PointFlags& f)
{
    require_eta(f);
    const auto table = csvio::parse_csv(csvio::read_file(f.input));
    const auto xs = numeric_column(table, f.x_col);

    const auto side = parse_side(f.side);
    const auto bmode = parse_boundary(f.boundary);
    const ebci::kernels::KernelSpec kernel{ebci::kernels::Family::epanechnikov,
                                           ebci::kernels::Support::interior};

    intervals::IntervalResult r;
    if (f.mode == "fixed-eta") {
        r = intervals::ebci_density_fixed_eta(xs, f.x0, f.order, f.alpha, *f.eta, side,
                                              bmode, kernel);
    } else {
        r = intervals::ebci_density_eta_free(xs, f.x0, f.order, f.alpha, side,
                                             policy_of(f), bmode, kernel);
    }
    print_interval(r, f.format);
}

struct SimulateFlags {
    std::string config;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::string out;        // results CSV path; empty = stdout
    std::string markdown;   // optional markdown table path
    std::string plots;      // optional plot directory
    std::string reference;  // optional published-numbers CSV to join
};

void run_simulate(const SimulateFlags& f)
{
    auto configs = sim::parse_sim_configs(csvio::read_file(f.config));
    for (auto& c : configs) {
        if (f.reps) c.replications = *f.reps;
        if (f.seed) c.seed = *f.seed;
    }

    std::vector<sim::SimSummary> rows;
    rows.reserve(configs.size());
    for (const auto& c : configs) {
        rows.push_back(sim::run_mc(c));
        std::cerr << sim::summary_line(rows.back()) << "\n";
    }

    std::string csv;
    if (!f.reference.empty()) {
        const auto refs = sim::parse_reference_csv(csvio::read_file(f.reference));
        csv = sim::emit_results_csv_joined(rows, refs);
    } else {
        csv = sim::emit_results_csv(rows);
    }

    if (f.out.empty()) std::cout << csv;
    else csvio::write_file(f.out, csv);

    if (!f.markdown.empty())
        csvio::write_file(f.markdown, sim::emit_results_markdown(rows));

    if (!f.plots.empty()) {
        const auto stem = std::filesystem::path(f.config).stem().string();
        for (const auto& p : sim::emit_plot(rows, f.plots, stem))
            std::cerr << "wrote " << p << "\n";
    }
}

struct RadiiFlags {
    std::vector<double> alphas{0.05};
    double eta = 1.0;
    double cv = 1.0;
    std::size_t n = 1000;
    int order = 3;
    std::string format = "csv";
};

void run_radii(const RadiiFlags& f)
{
    const auto rows =
        baselines::radius_equivalence_report(f.eta, f.cv, f.n, f.order, f.alphas);

    csvio::CsvTable t;
    t.header = {"alpha",    "order",    "eta",     "cv",        "n",
                "eb_two",   "flci_two", "eb_one",  "flci_one",  "ratio_two",
                "ratio_one"};
    for (const auto& r : rows) {
        t.rows.push_back({csvio::format_double(r.alpha), std::to_string(f.order),
                          csvio::format_double(f.eta), csvio::format_double(f.cv),
                          std::to_string(f.n), csvio::format_double(r.eb_two),
                          csvio::format_double(r.flci_two),
                          csvio::format_double(r.eb_one),
                          csvio::format_double(r.flci_one),
                          csvio::format_double(r.ratio_two),
                          csvio::format_double(r.ratio_one)});
    }

    if (f.format == "csv") {
        std::cout << csvio::emit_csv(t);
        return;
    }
    std::cout << "| " << t.header[0];
    for (std::size_t i = 1; i < t.header.size(); ++i) std::cout << " | " << t.header[i];
    std::cout << " |\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) std::cout << "---:|";
    std::cout << "\n";
    for (const auto& row : t.rows) {
        std::cout << "| " << row[0];
        for (std::size_t i = 1; i < row.size(); ++i) std::cout << " | " << row[i];
        std::cout << " |\n";
    }
}

struct RatesFlags {
    std::vector<int> ps{1, 2, 3};
    std::string format = "csv";
};

void run_rates(const RatesFlags& f)
{
    const auto rows = baselines::rate_table(f.ps);

    csvio::CsvTable t;
    t.header = {"p",          "setting",     "estimand", "parity",
                "rbc_length", "rbc_ce",      "ebci_length", "ebci_ce",
                "ebci_ce_exponential"};
    for (const auto& r : rows) {
        const char* setting =
            r.setting == baselines::RateEntry::Setting::interior ? "interior"
                                                                 : "boundary";
        const char* estimand =
            r.estimand == baselines::RateEntry::Estimand::regression ? "regression"
                                                                     : "density";
        const char* parity = r.parity == baselines::RateEntry::Parity::odd ? "odd"
                             : r.parity == baselines::RateEntry::Parity::even
                                 ? "even"
                                 : "";
        t.rows.push_back({std::to_string(r.p), setting, estimand, parity,
                          r.rbc_length.str(), r.rbc_coverage_error.str(),
                          r.ebci_length.str(), r.ebci_coverage_error.str(),
                          r.ebci_ce_exponential ? "1" : "0"});
    }

    if (f.format == "csv") {
        std::cout << csvio::emit_csv(t);
        return;
    }
    std::cout << "| " << t.header[0];
    for (std::size_t i = 1; i < t.header.size(); ++i) std::cout << " | " << t.header[i];
    std::cout << " |\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) std::cout << "---:|";
    std::cout << "\n";
    for (const auto& row : t.rows) {
        std::cout << "| " << row[0];
        for (std::size_t i = 1; i < row.size(); ++i) std::cout << " | " << row[i];
        std::cout << " |\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "empirical Bernstein confidence intervals for local polynomial "
        "regression and density estimation"};
    app.require_subcommand(1);

    PointFlags rf;
    std::string y_col = "y";
    auto* regress = app.add_subcommand(
        "regress", "pointwise confidence interval for a regression function");
    add_point_flags(regress, &rf, false);
    regress->add_option("--y-col", y_col, "outcome column name")
        ->capture_default_str();
    regress->callback([&] { run_regress(rf, y_col); });

    PointFlags df;
    df.order = 2;
    auto* density = app.add_subcommand(
        "density", "pointwise confidence interval for a density");
    add_point_flags(density, &df, true);
    density->callback([&] { run_density(df); });

    SimulateFlags sf;
    auto* simulate =
        app.add_subcommand("simulate", "Monte Carlo coverage/width study");
    simulate->add_option("--config", sf.config, "JSON run list")->required();
    simulate->add_option("--reps", sf.reps, "override replication budget");
    simulate->add_option("--seed", sf.seed, "override RNG seed");
    simulate->add_option("--out", sf.out, "results CSV path (default stdout)");
    simulate->add_option("--markdown", sf.markdown, "also write a markdown table");
    simulate->add_option("--plots", sf.plots,
                         "directory for plot data and SVG panels");
    simulate->add_option("--reference", sf.reference,
                         "published-numbers CSV joined into the results");
    simulate->callback([&] { run_simulate(sf); });

    RadiiFlags radf;
    auto* radii = app.add_subcommand(
        "radii", "oracle radius comparison against the bias-aware benchmark");
    radii->add_option("--alpha", radf.alphas, "miscoverage levels")
        ->capture_default_str();
    radii->add_option("--eta", radf.eta, "bias budget constant")
        ->capture_default_str();
    radii->add_option("--cv", radf.cv, "variance constant")->capture_default_str();
    radii->add_option("--n", radf.n, "sample size")->capture_default_str();
    radii->add_option("--order", radf.order, "smoothness order S")
        ->capture_default_str();
    radii->add_option("--format", radf.format, "csv or markdown")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "markdown"}));
    radii->callback([&] { run_radii(radf); });

    RatesFlags ratf;
    auto* rates = app.add_subcommand(
        "rates", "length and coverage-error exponent table");
    rates->add_option("--p", ratf.ps, "competing polynomial orders")
        ->capture_default_str();
    rates->add_option("--format", ratf.format, "csv or markdown")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "markdown"}));
    rates->callback([&] { run_rates(ratf); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ebci::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
