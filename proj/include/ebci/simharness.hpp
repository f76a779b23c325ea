#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ebci/dgp.hpp"
#include "ebci/intervals.hpp"
#include "ebci/kernels.hpp"
#include "ebci/lpreg.hpp"

namespace ebci::sim {

enum class Dgp { cusp, ccf, uniform_density };
enum class Method { ebci_eta_free, ebci_fixed_eta, snc, flci_oracle };

// One Monte Carlo cell: a DGP, an evaluation point, a method, and the
// replication budget. Serialized as snake_case JSON.
struct SimConfig {
    Dgp dgp = Dgp::cusp;
    double delta = 1.0;  // cusp bump exponent; ignored elsewhere
    ErrorKind errors = ErrorKind::normal;
    Region region = Region::interior;
    double x0 = 0.0;
    std::size_t n = 1000;
    int order = 3;
    double alpha = 0.05;
    Method method = Method::ebci_eta_free;
    intervals::Side side = intervals::Side::two_sided;
    double eta = 1.0;  // fixed-eta and oracle methods
    intervals::EtaFreePolicy policy;
    bool unified_calibration = true;  // eta-free interior two-sided
    int snc_order = 1;
    std::size_t replications = 2000;
    std::uint64_t seed = 20240901;

    void validate() const;
};

// JSON round trip; parse_sim_configs accepts {"runs": [...]} or a bare
// array or a single object.
std::string to_json(const SimConfig& c);
std::vector<SimConfig> parse_sim_configs(std::string_view json_text);

struct SimSummary {
    SimConfig config;
    double theta0 = 0.0;      // true value at x0
    double coverage = 0.0;    // share of successful replications covering theta0
    double mean_width = 0.0;  // two-sided: upper - lower; one-sided: finite gap
    double mean_bias = 0.0;   // center - theta0
    double mean_h = 0.0;      // point-estimate bandwidth
    std::size_t replications_done = 0;  // successes
    std::size_t failures = 0;           // replications that threw
    bool valid = false;                 // failures within 1% of the budget
};

// Run one cell. Replications are distributed over a worker pool (capped by
// the EBCI_THREADS environment variable when set); each replication draws
// from its own counter-keyed stream and the reduction is a deterministic
// ordered pass, so thread count never changes the numbers.
SimSummary run_mc(const SimConfig& c);

// Test hook: same machinery, caller-supplied regression sampler and truth.
SimSummary run_mc_regression(const SimConfig& c,
                             const std::function<lpreg::Sample(RngStream&)>& gen,
                             double theta0);

// CSV with the fixed column set
// dgp,x0,delta,n,method,side,alpha,h,coverage,width,bias,B
// (delta empty for non-cusp rows). RFC 4180, LF endings.
std::string emit_results_csv(std::span<const SimSummary> rows);

// Markdown tables grouped by (dgp, delta) with n ascending inside each.
std::string emit_results_markdown(std::span<const SimSummary> rows);

// Plot sidecars: <stem>.txt (plain-text series: n, coverage, width per
// method/delta group) always, plus <stem>_coverage.svg and <stem>_width.svg
// line charts. Returns the paths written.
std::vector<std::string> emit_plot(std::span<const SimSummary> rows,
                                   const std::string& out_dir,
                                   const std::string& stem);

// External reference results (published comparison numbers) keyed like our
// rows; join attaches ref_coverage / ref_width columns to matching cells.
struct ReferenceRow {
    std::string dgp;
    double x0 = 0.0;
    double delta = 0.0;  // NaN when absent
    std::size_t n = 0;
    double coverage = 0.0;
    double width = 0.0;
};

std::vector<ReferenceRow> parse_reference_csv(std::string_view text);
std::string emit_results_csv_joined(std::span<const SimSummary> rows,
                                    std::span<const ReferenceRow> refs);

// Human-oriented one-line digest for logs.
std::string summary_line(const SimSummary& s);

}  // namespace ebci::sim
