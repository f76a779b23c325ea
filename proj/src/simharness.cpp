#include "ebci/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ebci/baselines.hpp"
#include "ebci/csvio.hpp"
#include "ebci/errors.hpp"
#include "ebci/quadrature.hpp"

namespace ebci::sim {

namespace {

using nlohmann::json;

const kernels::KernelSpec kEpan{kernels::Family::epanechnikov,
                                kernels::Support::interior};

// ---- enum <-> string ------------------------------------------------------

std::string dgp_str(Dgp d)
{
    switch (d) {
        case Dgp::cusp: return "cusp";
        case Dgp::ccf: return "ccf";
        case Dgp::uniform_density: return "uniform_density";
    }
    throw NumericError("unreachable dgp");
}

Dgp dgp_from(const std::string& s)
{
    if (s == "cusp") return Dgp::cusp;
    if (s == "ccf") return Dgp::ccf;
    if (s == "uniform_density") return Dgp::uniform_density;
    throw BadInput("unknown dgp '" + s + "'");
}

std::string method_str(Method m)
{
    switch (m) {
        case Method::ebci_eta_free: return "ebci_eta_free";
        case Method::ebci_fixed_eta: return "ebci_fixed_eta";
        case Method::snc: return "snc";
        case Method::flci_oracle: return "flci_oracle";
    }
    throw NumericError("unreachable method");
}

Method method_from(const std::string& s)
{
    if (s == "ebci_eta_free") return Method::ebci_eta_free;
    if (s == "ebci_fixed_eta") return Method::ebci_fixed_eta;
    if (s == "snc") return Method::snc;
    if (s == "flci_oracle") return Method::flci_oracle;
    throw BadInput("unknown method '" + s + "'");
}

std::string side_str(intervals::Side s)
{
    switch (s) {
        case intervals::Side::two_sided: return "two_sided";
        case intervals::Side::upper: return "upper";
        case intervals::Side::lower: return "lower";
    }
    throw NumericError("unreachable side");
}

intervals::Side side_from(const std::string& s)
{
    if (s == "two_sided") return intervals::Side::two_sided;
    if (s == "upper") return intervals::Side::upper;
    if (s == "lower") return intervals::Side::lower;
    throw BadInput("unknown side '" + s + "'");
}

std::string errors_str(ErrorKind e)
{
    return e == ErrorKind::normal ? "normal" : "skewed_gamma";
}

ErrorKind errors_from(const std::string& s)
{
    if (s == "normal") return ErrorKind::normal;
    if (s == "skewed_gamma") return ErrorKind::skewed_gamma;
    throw BadInput("unknown error kind '" + s + "'");
}

std::string region_str(Region r)
{
    return r == Region::interior ? "interior" : "boundary";
}

Region region_from(const std::string& s)
{
    if (s == "interior") return Region::interior;
    if (s == "boundary") return Region::boundary;
    throw BadInput("unknown region '" + s + "'");
}

// ---- config plumbing ------------------------------------------------------

bool is_density(Dgp d) { return d == Dgp::uniform_density; }

// Covariate support of the design, used to decide which edge a boundary
// evaluation point belongs to. The ccf design is always two-sided.
std::pair<double, double> design_support(const SimConfig& c)
{
    if (c.dgp == Dgp::ccf) return {-1.0, 1.0};
    return c.region == Region::interior ? std::pair{-1.0, 1.0} : std::pair{0.0, 1.0};
}

intervals::BoundaryMode boundary_mode(const SimConfig& c)
{
    if (c.region == Region::interior) return intervals::BoundaryMode::interior;
    const auto [lo, hi] = design_support(c);
    return std::abs(c.x0 - lo) <= std::abs(c.x0 - hi) ? intervals::BoundaryMode::left
                                                      : intervals::BoundaryMode::right;
}

bool at_boundary(const SimConfig& c) { return c.region == Region::boundary; }

}  // namespace

void SimConfig::validate() const
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadInput("alpha must lie in (0, 1)");
    if (order < 1) throw BadInput("order must be at least 1");
    if (n < 4) throw BadInput("sample size must be at least 4");
    if (replications < 1) throw BadInput("replications must be positive");
    if (!std::isfinite(x0)) throw BadInput("x0 must be finite");
    if (dgp == Dgp::cusp && !(delta > 0.0))
        throw BadInput("cusp delta must be positive");
    if ((method == Method::ebci_fixed_eta || method == Method::flci_oracle) &&
        !(eta > 0.0))
        throw BadInput("eta must be positive for bias-budget methods");
    if (method == Method::snc && is_density(dgp))
        throw BadInput("the snc baseline is defined for regression runs only");
    if (method == Method::snc && snc_order < 1)
        throw BadInput("snc_order must be at least 1");
    const auto [lo, hi] = design_support(*this);
    if (x0 < lo || x0 > hi)
        throw BadInput("x0 lies outside the design support");
}

std::string to_json(const SimConfig& c)
{
    json j;
    j["dgp"] = dgp_str(c.dgp);
    if (c.dgp == Dgp::cusp) j["delta"] = c.delta;
    j["errors"] = errors_str(c.errors);
    j["region"] = region_str(c.region);
    j["x0"] = c.x0;
    j["n"] = c.n;
    j["order"] = c.order;
    j["alpha"] = c.alpha;
    j["method"] = method_str(c.method);
    j["side"] = side_str(c.side);
    if (c.method == Method::ebci_fixed_eta || c.method == Method::flci_oracle)
        j["eta"] = c.eta;
    j["d_n_kind"] =
        c.policy.kind == intervals::EtaFreePolicy::Kind::power ? "power" : "loglog";
    j["tau"] = c.policy.tau;
    j["unified_calibration"] = c.unified_calibration;
    if (c.method == Method::snc) j["snc_order"] = c.snc_order;
    j["replications"] = c.replications;
    j["seed"] = c.seed;
    return j.dump(2);
}

namespace {

SimConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw BadInput("each run must be a JSON object");
    SimConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "dgp") c.dgp = dgp_from(val.get<std::string>());
        else if (key == "delta") c.delta = val.get<double>();
        else if (key == "errors") c.errors = errors_from(val.get<std::string>());
        else if (key == "region") c.region = region_from(val.get<std::string>());
        else if (key == "x0") c.x0 = val.get<double>();
        else if (key == "n") c.n = val.get<std::size_t>();
        else if (key == "order") c.order = val.get<int>();
        else if (key == "alpha") c.alpha = val.get<double>();
        else if (key == "method") c.method = method_from(val.get<std::string>());
        else if (key == "side") c.side = side_from(val.get<std::string>());
        else if (key == "eta") c.eta = val.get<double>();
        else if (key == "d_n_kind") {
            const auto s = val.get<std::string>();
            if (s == "power") c.policy.kind = intervals::EtaFreePolicy::Kind::power;
            else if (s == "loglog") c.policy.kind = intervals::EtaFreePolicy::Kind::loglog;
            else throw BadInput("unknown d_n_kind '" + s + "'");
        }
        else if (key == "tau") c.policy.tau = val.get<double>();
        else if (key == "unified_calibration") c.unified_calibration = val.get<bool>();
        else if (key == "snc_order") c.snc_order = val.get<int>();
        else if (key == "replications") c.replications = val.get<std::size_t>();
        else if (key == "seed") c.seed = val.get<std::uint64_t>();
        else throw BadInput("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

}  // namespace

std::vector<SimConfig> parse_sim_configs(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw BadInput(std::string("config is not valid JSON: ") + e.what());
    }

    const json* runs = &j;
    if (j.is_object() && j.contains("runs")) runs = &j.at("runs");

    std::vector<SimConfig> out;
    if (runs->is_array()) {
        for (const auto& item : *runs) out.push_back(config_from_json(item));
    } else {
        out.push_back(config_from_json(*runs));
    }
    if (out.empty()) throw BadInput("config contains no runs");
    return out;
}

namespace {

// ---- per-replication work -------------------------------------------------

struct RepOutcome {
    bool ok = false;
    bool cover = false;
    double width = 0.0;
    double bias = 0.0;
    double h = 0.0;
};

double finite_width(const intervals::IntervalResult& r)
{
    switch (r.side) {
        case intervals::Side::two_sided: return r.upper - r.lower;
        case intervals::Side::upper: return r.upper - r.center;
        case intervals::Side::lower: return r.center - r.lower;
    }
    throw NumericError("unreachable side");
}

bool covers(const intervals::IntervalResult& r, double theta0)
{
    return theta0 >= r.lower && theta0 <= r.upper;
}

// Constants for the infeasible benchmark: the limiting variance factor of
// the estimator at this cell.
double true_variance_constant(const SimConfig& c)
{
    const auto support =
        at_boundary(c) ? kernels::Support::boundary : kernels::Support::interior;
    kernels::KernelSpec spec = kEpan;
    spec.support = support;

    if (is_density(c.dgp)) {
        const auto ki = kernels::density_kernel(spec, c.order);
        const double l2 = quadrature::integrate([&](double u) { return ki(u) * ki(u); },
                                                spec.lo(), spec.hi());
        return uniform_density_value(c.region) * l2;
    }

    const auto l = kernels::equivalent_kernel(spec, c.order);
    const double l2 = quadrature::integrate([&](double u) { return l(u) * l(u); },
                                            spec.lo(), spec.hi());
    // unit error variance over the design density at x0
    const double f = c.region == Region::interior || c.dgp == Dgp::ccf ? 0.5 : 1.0;
    return l2 / f;
}

lpreg::Sample draw_regression(const SimConfig& c, RngStream& rng)
{
    if (c.dgp == Dgp::cusp) {
        CuspParams p;
        p.delta = c.delta;
        p.errors = c.errors;
        p.region = c.region;
        return gen_cusp(p, c.n, rng);
    }
    return gen_ccf(c.n, rng);
}

void reflect_sample(double x0, lpreg::Sample* s)
{
    for (double& x : s->xs) x = 2.0 * x0 - x;
}

RepOutcome one_regression_rep(const SimConfig& c, double theta0, double flci_cv,
                              const lpreg::Sample& data)
{
    const auto bmode = boundary_mode(c);
    RepOutcome out;

    switch (c.method) {
        case Method::ebci_eta_free: {
            const auto r = intervals::ebci_regression_eta_free(
                data, c.x0, c.order, c.alpha, c.side, c.policy, bmode, kEpan,
                c.unified_calibration);
            out = {true, covers(r, theta0), finite_width(r), r.center - theta0, r.h};
            break;
        }
        case Method::ebci_fixed_eta: {
            const auto r = intervals::ebci_regression_fixed_eta(
                data, c.x0, c.order, c.alpha, c.eta, c.side, bmode, kEpan);
            out = {true, covers(r, theta0), finite_width(r), r.center - theta0, r.h};
            break;
        }
        case Method::snc: {
            // conventional z-interval at the rate bandwidth of the order
            // under study, with a plug-in sandwich standard error
            lpreg::Sample work = data;
            if (bmode == intervals::BoundaryMode::right) reflect_sample(c.x0, &work);
            const double h = std::pow(static_cast<double>(c.n),
                                      -1.0 / (2.0 * c.order + 1.0));
            const auto fit = lpreg::local_fit(work, c.x0, h, c.snc_order, kEpan);
            double se2 = 0.0;
            for (std::size_t i = 0; i < work.size(); ++i) {
                const double w = fit.weights.weights[i];
                if (w == 0.0) continue;
                const double r = work.ys[i] - fit.predict(work.xs[i]);
                se2 += w * w * r * r;
            }
            const double se = std::sqrt(se2);
            const double z = baselines::normal_quantile(
                c.side == intervals::Side::two_sided ? 1.0 - c.alpha / 2.0
                                                     : 1.0 - c.alpha);
            const double center = fit.value();
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (c.side != intervals::Side::upper) lo = center - z * se;
            if (c.side != intervals::Side::lower) hi = center + z * se;
            out.ok = true;
            out.cover = theta0 >= lo && theta0 <= hi;
            out.width = c.side == intervals::Side::two_sided ? 2.0 * z * se : z * se;
            out.bias = center - theta0;
            out.h = h;
            break;
        }
        case Method::flci_oracle: {
            const auto fside = c.side == intervals::Side::two_sided
                                   ? baselines::IntervalSide::two_sided
                                   : (c.side == intervals::Side::upper
                                          ? baselines::IntervalSide::upper
                                          : baselines::IntervalSide::lower);
            const auto opt = baselines::flci_optimized_radius(c.eta, flci_cv, c.n,
                                                              c.order, c.alpha, fside);
            lpreg::Sample work = data;
            if (bmode == intervals::BoundaryMode::right) reflect_sample(c.x0, &work);
            const double center = lpreg::lp_fit(work, c.x0, opt.h_star, c.order, kEpan);
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (c.side != intervals::Side::upper) lo = center - opt.radius;
            if (c.side != intervals::Side::lower) hi = center + opt.radius;
            out.ok = true;
            out.cover = theta0 >= lo && theta0 <= hi;
            out.width =
                c.side == intervals::Side::two_sided ? 2.0 * opt.radius : opt.radius;
            out.bias = center - theta0;
            out.h = opt.h_star;
            break;
        }
    }
    return out;
}

RepOutcome one_density_rep(const SimConfig& c, double theta0, double flci_cv,
                           const std::vector<double>& xs)
{
    const auto bmode = boundary_mode(c);
    RepOutcome out;

    switch (c.method) {
        case Method::ebci_eta_free: {
            const auto r = intervals::ebci_density_eta_free(xs, c.x0, c.order, c.alpha,
                                                            c.side, c.policy, bmode,
                                                            kEpan);
            out = {true, covers(r, theta0), finite_width(r), r.center - theta0, r.h};
            break;
        }
        case Method::ebci_fixed_eta: {
            const auto r = intervals::ebci_density_fixed_eta(xs, c.x0, c.order, c.alpha,
                                                             c.eta, c.side, bmode,
                                                             kEpan);
            out = {true, covers(r, theta0), finite_width(r), r.center - theta0, r.h};
            break;
        }
        case Method::flci_oracle: {
            const auto fside = c.side == intervals::Side::two_sided
                                   ? baselines::IntervalSide::two_sided
                                   : (c.side == intervals::Side::upper
                                          ? baselines::IntervalSide::upper
                                          : baselines::IntervalSide::lower);
            const auto opt = baselines::flci_optimized_radius(c.eta, flci_cv, c.n,
                                                              c.order, c.alpha, fside);
            kernels::KernelSpec spec = kEpan;
            spec.support = at_boundary(c) ? kernels::Support::boundary
                                          : kernels::Support::interior;
            const auto ki = kernels::density_kernel(spec, c.order);
            std::vector<double> work;
            const std::vector<double>* data = &xs;
            if (bmode == intervals::BoundaryMode::right) {
                work.resize(xs.size());
                for (std::size_t i = 0; i < xs.size(); ++i) work[i] = 2.0 * c.x0 - xs[i];
                data = &work;
            }
            const double center = intervals::kde(*data, c.x0, opt.h_star, ki);
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (c.side != intervals::Side::upper) lo = center - opt.radius;
            if (c.side != intervals::Side::lower) hi = center + opt.radius;
            out.ok = true;
            out.cover = theta0 >= lo && theta0 <= hi;
            out.width =
                c.side == intervals::Side::two_sided ? 2.0 * opt.radius : opt.radius;
            out.bias = center - theta0;
            out.h = opt.h_star;
            break;
        }
        case Method::snc:
            throw BadInput("the snc baseline is defined for regression runs only");
    }
    return out;
}

std::size_t worker_count(std::size_t replications)
{
    std::size_t t = std::thread::hardware_concurrency();
    if (t == 0) t = 1;
    if (const char* env = std::getenv("EBCI_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) t = static_cast<std::size_t>(v);
    }
    return std::min(t, replications);
}

SimSummary reduce(const SimConfig& c, double theta0,
                  const std::vector<RepOutcome>& reps)
{
    SimSummary s;
    s.config = c;
    s.theta0 = theta0;
    double cov = 0.0, width = 0.0, bias = 0.0, h = 0.0;
    for (const auto& r : reps) {  // fixed order: independent of thread count
        if (!r.ok) {
            ++s.failures;
            continue;
        }
        ++s.replications_done;
        cov += r.cover ? 1.0 : 0.0;
        width += r.width;
        bias += r.bias;
        h += r.h;
    }
    if (s.replications_done > 0) {
        const auto done = static_cast<double>(s.replications_done);
        s.coverage = cov / done;
        s.mean_width = width / done;
        s.mean_bias = bias / done;
        s.mean_h = h / done;
    }
    s.valid = s.failures * 100 <= c.replications;
    return s;
}

template <typename RepFn>
SimSummary run_pool(const SimConfig& c, double theta0, const RepFn& one_rep)
{
    std::vector<RepOutcome> reps(c.replications);
    const std::size_t workers = worker_count(c.replications);
    std::atomic<std::size_t> next{0};

    const auto body = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= c.replications) break;
            RngStream rng = RngStream::child(c.seed, r);
            try {
                reps[r] = one_rep(rng);
            } catch (const Error&) {
                reps[r].ok = false;
            }
        }
    };

    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    return reduce(c, theta0, reps);
}

}  // namespace

SimSummary run_mc(const SimConfig& c)
{
    c.validate();
    const double flci_cv =
        c.method == Method::flci_oracle ? true_variance_constant(c) : 0.0;

    if (is_density(c.dgp)) {
        const double theta0 = uniform_density_value(c.region);
        return run_pool(c, theta0, [&](RngStream& rng) {
            const auto xs = gen_uniform_density(c.region, c.n, rng);
            return one_density_rep(c, theta0, flci_cv, xs);
        });
    }

    const double theta0 =
        c.dgp == Dgp::cusp ? cusp_mean(c.x0, c.delta) : ccf_mean(c.x0);
    return run_pool(c, theta0, [&](RngStream& rng) {
        const auto data = draw_regression(c, rng);
        return one_regression_rep(c, theta0, flci_cv, data);
    });
}

SimSummary run_mc_regression(const SimConfig& c,
                             const std::function<lpreg::Sample(RngStream&)>& gen,
                             double theta0)
{
    c.validate();
    if (is_density(c.dgp))
        throw BadInput("custom-sampler runs are regression runs");
    const double flci_cv =
        c.method == Method::flci_oracle ? true_variance_constant(c) : 0.0;
    return run_pool(c, theta0, [&](RngStream& rng) {
        const auto data = gen(rng);
        return one_regression_rep(c, theta0, flci_cv, data);
    });
}

// ---- emitters --------------------------------------------------------------

namespace {

std::string delta_field(const SimConfig& c)
{
    return c.dgp == Dgp::cusp ? csvio::format_double(c.delta) : std::string{};
}

std::vector<std::string> result_row(const SimSummary& s)
{
    const auto& c = s.config;
    return {dgp_str(c.dgp),
            csvio::format_double(c.x0),
            delta_field(c),
            std::to_string(c.n),
            method_str(c.method),
            side_str(c.side),
            csvio::format_double(c.alpha),
            csvio::format_double(s.mean_h),
            csvio::format_double(s.coverage),
            csvio::format_double(s.mean_width),
            csvio::format_double(s.mean_bias),
            std::to_string(c.replications)};
}

const std::vector<std::string> kResultHeader{
    "dgp", "x0", "delta", "n", "method", "side",
    "alpha", "h", "coverage", "width", "bias", "B"};

}  // namespace

std::string emit_results_csv(std::span<const SimSummary> rows)
{
    csvio::CsvTable t;
    t.header = kResultHeader;
    for (const auto& s : rows) t.rows.push_back(result_row(s));
    return csvio::emit_csv(t);
}

namespace {

std::string fixed(double x, int places)
{
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(places);
    ss << x;
    return ss.str();
}

}  // namespace

std::string emit_results_markdown(std::span<const SimSummary> rows)
{
    // group key: (dgp, delta); rows inside ordered by n, then method/side/x0
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) idx[i] = i;
    const auto group_of = [&](std::size_t i) {
        const auto& c = rows[i].config;
        return std::tuple(dgp_str(c.dgp), c.dgp == Dgp::cusp ? c.delta : 0.0);
    };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto ga = group_of(a), gb = group_of(b);
        if (ga != gb) return ga < gb;
        const auto& ca = rows[a].config;
        const auto& cb = rows[b].config;
        return std::tuple(ca.n, ca.x0, method_str(ca.method), side_str(ca.side)) <
               std::tuple(cb.n, cb.x0, method_str(cb.method), side_str(cb.side));
    });

    std::string out;
    std::tuple<std::string, double> open_group{"", -1.0};
    bool first = true;
    for (const std::size_t i : idx) {
        const auto& s = rows[i];
        const auto& c = s.config;
        const auto g = group_of(i);
        if (first || g != open_group) {
            if (!first) out += "\n";
            out += "## " + std::get<0>(g);
            if (c.dgp == Dgp::cusp)
                out += " (delta = " + csvio::format_double(c.delta) + ")";
            out += "\n\n";
            out += "| x0 | n | method | side | alpha | h | coverage | width | bias | B "
                   "| failures |\n";
            out += "|---:|---:|:---|:---|---:|---:|---:|---:|---:|---:|---:|\n";
            open_group = g;
            first = false;
        }
        out += "| " + csvio::format_double(c.x0) + " | " + std::to_string(c.n) + " | " +
               method_str(c.method) + " | " + side_str(c.side) + " | " +
               csvio::format_double(c.alpha) + " | " + fixed(s.mean_h, 4) + " | " +
               fixed(s.coverage, 3) + " | " + fixed(s.mean_width, 3) + " | " +
               fixed(s.mean_bias, 4) + " | " + std::to_string(c.replications) + " | " +
               std::to_string(s.failures) + " |\n";
    }
    return out;
}

namespace {

// series key for plots: everything but n
struct SeriesKey {
    std::string label;
    bool operator<(const SeriesKey& o) const { return label < o.label; }
};

SeriesKey series_of(const SimSummary& s)
{
    const auto& c = s.config;
    std::string lab = dgp_str(c.dgp);
    if (c.dgp == Dgp::cusp) lab += " delta=" + csvio::format_double(c.delta);
    lab += " x0=" + csvio::format_double(c.x0);
    lab += " " + method_str(c.method);
    lab += " " + side_str(c.side);
    lab += " alpha=" + csvio::format_double(c.alpha);
    return {lab};
}

struct SeriesPoint {
    double n;
    double coverage;
    double width;
};

std::string render_svg(const std::map<SeriesKey, std::vector<SeriesPoint>>& series,
                       bool coverage_panel, double nominal)
{
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double w = 720, h = 440, ml = 60, mr = 220, mt = 20, mb = 50;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [key, pts] : series) {
        for (const auto& p : pts) {
            const double y = coverage_panel ? p.coverage : p.width;
            xmin = std::min(xmin, p.n);
            xmax = std::max(xmax, p.n);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (coverage_panel) {
        ymin = std::min(ymin, nominal);
        ymax = std::max(ymax, 1.0);
    } else {
        ymin = std::min(ymin, 0.0);
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;

    const auto sx = [&](double n) {
        return ml + (std::log(n) - std::log(xmin)) / (std::log(xmax) - std::log(xmin)) *
                        (w - ml - mr);
    };
    const auto sy = [&](double y) {
        return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
        << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\">n (log scale)</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (mt + h - mb) / 2
        << ")\">" << (coverage_panel ? "coverage" : "mean width") << "</text>\n";
    // y ticks
    for (int k = 0; k <= 4; ++k) {
        const double y = ymin + (ymax - ymin) * k / 4.0;
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(y) << "\" x2=\"" << ml
            << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\">" << fixed(y, 3) << "</text>\n";
    }
    if (coverage_panel) {
        svg << "<line x1=\"" << ml << "\" y1=\"" << sy(nominal) << "\" x2=\"" << w - mr
            << "\" y2=\"" << sy(nominal)
            << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<text x=\"" << w - mr + 6 << "\" y=\"" << sy(nominal) + 4
            << "\" fill=\"#555555\">nominal " << fixed(nominal, 3) << "</text>\n";
    }

    int color = 0;
    double legend_y = mt + 10;
    for (const auto& [key, pts] : series) {
        const char* col = kColors[color % 8];
        std::ostringstream path;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double y = coverage_panel ? pts[i].coverage : pts[i].width;
            path << (i == 0 ? "M" : "L") << sx(pts[i].n) << " " << sy(y) << " ";
            svg << "<circle cx=\"" << sx(pts[i].n) << "\" cy=\"" << sy(y)
                << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        }
        svg << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << col
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << w - mr + 6 << "\" y=\"" << legend_y << "\" fill=\"" << col
            << "\">" << key.label << "</text>\n";
        legend_y += 16;
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::vector<std::string> emit_plot(std::span<const SimSummary> rows,
                                   const std::string& out_dir, const std::string& stem)
{
    if (rows.empty()) throw BadInput("nothing to plot");
    std::filesystem::create_directories(out_dir);

    std::map<SeriesKey, std::vector<SeriesPoint>> series;
    double nominal = 1.0 - rows.front().config.alpha;
    for (const auto& s : rows) {
        series[series_of(s)].push_back(
            {static_cast<double>(s.config.n), s.coverage, s.mean_width});
    }
    for (auto& [key, pts] : series)
        std::sort(pts.begin(), pts.end(),
                  [](const SeriesPoint& a, const SeriesPoint& b) { return a.n < b.n; });

    std::string sidecar = "# coverage and mean width against sample size\n";
    sidecar += "# nominal coverage: " + csvio::format_double(nominal) + "\n";
    for (const auto& [key, pts] : series) {
        sidecar += "\n# series: " + key.label + "\n";
        sidecar += "# columns: n coverage width\n";
        for (const auto& p : pts) {
            sidecar += csvio::format_double(p.n) + " " + csvio::format_double(p.coverage) +
                       " " + csvio::format_double(p.width) + "\n";
        }
    }

    const auto base = std::filesystem::path(out_dir) / stem;
    std::vector<std::string> written;
    written.push_back(base.string() + ".txt");
    csvio::write_file(written.back(), sidecar);
    written.push_back(base.string() + "_coverage.svg");
    csvio::write_file(written.back(), render_svg(series, true, nominal));
    written.push_back(base.string() + "_width.svg");
    csvio::write_file(written.back(), render_svg(series, false, nominal));
    return written;
}

std::vector<ReferenceRow> parse_reference_csv(std::string_view text)
{
    const auto t = csvio::parse_csv(text);
    const std::size_t c_dgp = t.column("dgp");
    const std::size_t c_x0 = t.column("x0");
    const std::size_t c_n = t.column("n");
    const std::size_t c_cov = t.column("coverage");
    const std::size_t c_w = t.column("width");
    // delta column optional
    std::size_t c_delta = t.header.size();
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == "delta") c_delta = i;

    std::vector<ReferenceRow> out;
    for (const auto& row : t.rows) {
        ReferenceRow r;
        r.dgp = row[c_dgp];
        r.x0 = csvio::parse_double(row[c_x0]);
        r.n = static_cast<std::size_t>(csvio::parse_double(row[c_n]));
        r.coverage = csvio::parse_double(row[c_cov]);
        r.width = csvio::parse_double(row[c_w]);
        r.delta = std::numeric_limits<double>::quiet_NaN();
        if (c_delta < t.header.size() && !row[c_delta].empty())
            r.delta = csvio::parse_double(row[c_delta]);
        out.push_back(r);
    }
    return out;
}

std::string emit_results_csv_joined(std::span<const SimSummary> rows,
                                    std::span<const ReferenceRow> refs)
{
    csvio::CsvTable t;
    t.header = kResultHeader;
    t.header.push_back("ref_coverage");
    t.header.push_back("ref_width");

    for (const auto& s : rows) {
        auto row = result_row(s);
        const auto& c = s.config;
        const bool has_delta = c.dgp == Dgp::cusp;
        const ReferenceRow* hit = nullptr;
        for (const auto& r : refs) {
            if (r.dgp != dgp_str(c.dgp)) continue;
            if (r.n != c.n) continue;
            if (std::abs(r.x0 - c.x0) > 1e-9) continue;
            const bool ref_has_delta = !std::isnan(r.delta);
            if (has_delta != ref_has_delta) continue;
            if (has_delta && std::abs(r.delta - c.delta) > 1e-9) continue;
            hit = &r;
            break;
        }
        row.push_back(hit ? csvio::format_double(hit->coverage) : std::string{});
        row.push_back(hit ? csvio::format_double(hit->width) : std::string{});
        t.rows.push_back(std::move(row));
    }
    return csvio::emit_csv(t);
}

std::string summary_line(const SimSummary& s)
{
    const auto& c = s.config;
    std::string out = dgp_str(c.dgp);
    if (c.dgp == Dgp::cusp) out += " delta=" + csvio::format_double(c.delta);
    out += " x0=" + csvio::format_double(c.x0);
    out += " n=" + std::to_string(c.n);
    out += " " + method_str(c.method) + " " + side_str(c.side);
    out += " alpha=" + csvio::format_double(c.alpha);
    out += ": coverage " + fixed(s.coverage, 3);
    out += ", width " + fixed(s.mean_width, 3);
    out += ", bias " + fixed(s.mean_bias, 4);
    out += ", h " + fixed(s.mean_h, 4);
    out += " (" + std::to_string(s.replications_done) + "/" +
           std::to_string(c.replications) + " reps";
    if (s.failures > 0) out += ", " + std::to_string(s.failures) + " failed";
    if (!s.valid) out += ", RUN INVALID";
    out += ")";
    return out;
}

}  // namespace ebci::sim
