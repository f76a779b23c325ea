#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "ebci/csvio.hpp"
#include "ebci/errors.hpp"
#include "ebci/simharness.hpp"

using namespace ebci;
using namespace ebci::sim;

namespace {

SimConfig quirky_config()
{
    SimConfig c;
    c.dgp = Dgp::cusp;
    c.delta = 0.25;
    c.errors = ErrorKind::skewed_gamma;
    c.region = Region::boundary;
    c.x0 = 0.0;
    c.n = 321;
    c.order = 2;
    c.alpha = 0.1;
    c.method = Method::ebci_fixed_eta;
    c.side = intervals::Side::upper;
    c.eta = 3.5;
    c.policy.kind = intervals::EtaFreePolicy::Kind::loglog;
    c.policy.tau = 0.002;
    c.unified_calibration = false;
    c.replications = 7;
    c.seed = 99;
    return c;
}

}  // namespace

TEST_CASE("config json round trip preserves every field")
{
    const SimConfig c = quirky_config();
    const auto parsed = parse_sim_configs(to_json(c));
    REQUIRE(parsed.size() == 1);
    const SimConfig& p = parsed[0];
    CHECK(p.dgp == c.dgp);
    CHECK(p.delta == c.delta);
    CHECK(p.errors == c.errors);
    CHECK(p.region == c.region);
    CHECK(p.x0 == c.x0);
    CHECK(p.n == c.n);
    CHECK(p.order == c.order);
    CHECK(p.alpha == c.alpha);
    CHECK(p.method == c.method);
    CHECK(p.side == c.side);
    CHECK(p.eta == c.eta);
    CHECK(p.policy.kind == c.policy.kind);
    CHECK(p.policy.tau == c.policy.tau);
    CHECK(p.unified_calibration == c.unified_calibration);
    CHECK(p.replications == c.replications);
    CHECK(p.seed == c.seed);
}

TEST_CASE("config parser accepts the three container shapes")
{
    const std::string one = R"({"dgp": "ccf", "x0": 0.6, "n": 50})";
    const auto a = parse_sim_configs(one);
    REQUIRE(a.size() == 1);
    CHECK(a[0].dgp == Dgp::ccf);
    CHECK(a[0].x0 == 0.6);
    CHECK(a[0].n == 50);
    CHECK(a[0].order == 3);  // defaults survive partial configs

    const auto b = parse_sim_configs("[" + one + "," + one + "]");
    CHECK(b.size() == 2);

    const auto c = parse_sim_configs(R"({"runs": [)" + one + "]}");
    CHECK(c.size() == 1);
}

TEST_CASE("config parser rejects junk")
{
    CHECK_THROWS_AS(parse_sim_configs("not json"), BadInput);
    CHECK_THROWS_AS(parse_sim_configs(R"({"dgp": "cusp", "typo_key": 1})"), BadInput);
    CHECK_THROWS_AS(parse_sim_configs(R"({"dgp": "waves"})"), BadInput);
    CHECK_THROWS_AS(parse_sim_configs(R"({"runs": []})"), BadInput);
    CHECK_THROWS_AS(parse_sim_configs(R"({"alpha": 1.5})"), BadInput);
    CHECK_THROWS_AS(parse_sim_configs(R"({"dgp": "uniform_density", "method": "snc"})"),
                    BadInput);
    // boundary cusp design lives on [0,1]
    CHECK_THROWS_AS(parse_sim_configs(R"({"region": "boundary", "x0": -0.5})"),
                    BadInput);
}

TEST_CASE("thread count never changes the numbers")
{
    SimConfig c;
    c.dgp = Dgp::cusp;
    c.n = 120;
    c.replications = 40;
    c.seed = 7;

    ::setenv("EBCI_THREADS", "1", 1);
    const auto serial = run_mc(c);
    ::setenv("EBCI_THREADS", "3", 1);
    const auto pooled = run_mc(c);
    ::unsetenv("EBCI_THREADS");

    CHECK(serial.coverage == pooled.coverage);
    CHECK(serial.mean_width == pooled.mean_width);
    CHECK(serial.mean_bias == pooled.mean_bias);
    CHECK(serial.mean_h == pooled.mean_h);
    CHECK(serial.failures == pooled.failures);
}

TEST_CASE("pure noise: z-interval hits nominal, budget-free interval stays above")
{
    // flat truth, so the conventional interval has no bias to swallow
    const auto noise = [](RngStream& rng) {
        lpreg::Sample s;
        for (int i = 0; i < 200; ++i) {
            s.xs.push_back(2.0 * rng.uniform01() - 1.0);
            s.ys.push_back(rng.normal());
        }
        return s;
    };

    SimConfig c;
    c.n = 200;
    c.replications = 300;
    c.seed = 11;

    c.method = Method::snc;
    const auto z = run_mc_regression(c, noise, 0.0);
    CHECK(z.valid);
    CHECK(z.coverage > 0.90);
    CHECK(z.coverage < 0.99);

    c.method = Method::ebci_eta_free;
    const auto eb = run_mc_regression(c, noise, 0.0);
    CHECK(eb.valid);
    CHECK(eb.coverage >= 0.93);
    CHECK(eb.mean_width > z.mean_width);  // concentration radius pays for validity
}

TEST_CASE("oracle benchmark covers on pure noise")
{
    const auto noise = [](RngStream& rng) {
        lpreg::Sample s;
        for (int i = 0; i < 200; ++i) {
            s.xs.push_back(2.0 * rng.uniform01() - 1.0);
            s.ys.push_back(rng.normal());
        }
        return s;
    };
    SimConfig c;
    c.n = 200;
    c.replications = 150;
    c.seed = 13;
    c.method = Method::flci_oracle;
    c.eta = 1.0;
    const auto s = run_mc_regression(c, noise, 0.0);
    CHECK(s.valid);
    CHECK(s.coverage >= 0.90);  // bias budget is slack here
}

TEST_CASE("cusp cell smoke run")
{
    SimConfig c;
    c.dgp = Dgp::cusp;
    c.delta = 1.0;
    c.n = 400;
    c.replications = 120;
    c.seed = 5;

    const auto s = run_mc(c);
    CHECK(s.valid);
    CHECK(s.failures == 0);
    CHECK(s.replications_done == 120);
    CHECK(s.theta0 == doctest::Approx(1.0).epsilon(1e-12));  // cusp mean at 0
    CHECK(s.coverage >= 0.85);
    // budget-free bandwidth is deterministic: n^{-1/(2S+1)}
    CHECK(s.mean_h == doctest::Approx(std::pow(400.0, -1.0 / 7.0)).epsilon(1e-12));
}

namespace {

SimSummary fake_summary(Dgp dgp, std::size_t n, double coverage, double width)
{
    SimSummary s;
    s.config.dgp = dgp;
    s.config.delta = 1.0;
    s.config.x0 = dgp == Dgp::ccf ? 0.6 : 0.0;
    s.config.n = n;
    s.config.replications = 500;
    s.theta0 = 1.0;
    s.coverage = coverage;
    s.mean_width = width;
    s.mean_bias = -0.002;
    s.mean_h = 0.37;
    s.replications_done = 500;
    s.valid = true;
    return s;
}

}  // namespace

TEST_CASE("results csv has the fixed column set and blank delta off the cusp")
{
    const std::vector<SimSummary> rows{fake_summary(Dgp::cusp, 1000, 0.953, 0.335),
                                       fake_summary(Dgp::ccf, 250, 0.948, 0.41)};
    const auto text = emit_results_csv(rows);
    const auto t = csvio::parse_csv(text);
    REQUIRE(t.header.size() == 12);
    CHECK(t.header[0] == "dgp");
    CHECK(t.header[2] == "delta");
    CHECK(t.header[8] == "coverage");
    CHECK(t.header[11] == "B");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][2] == "1");  // cusp keeps its delta
    CHECK(t.rows[1][2] == "");   // ccf has none
    CHECK(t.rows[1][0] == "ccf");
    CHECK(csvio::parse_double(t.rows[0][8]) == doctest::Approx(0.953));
}

TEST_CASE("markdown emitter groups by dgp and delta")
{
    std::vector<SimSummary> rows{fake_summary(Dgp::cusp, 1000, 0.95, 0.3),
                                 fake_summary(Dgp::cusp, 100, 0.94, 0.8),
                                 fake_summary(Dgp::ccf, 250, 0.95, 0.4)};
    rows[1].config.delta = 0.01;
    const auto md = emit_results_markdown(rows);
    CHECK(md.find("## cusp (delta = 0.01)") != std::string::npos);
    CHECK(md.find("## cusp (delta = 1)") != std::string::npos);
    CHECK(md.find("## ccf") != std::string::npos);
    CHECK(md.find("| x0 | n | method |") != std::string::npos);
    // groups sorted, so the small delta table comes first
    CHECK(md.find("delta = 0.01") < md.find("delta = 1)"));
}

TEST_CASE("plot emitter writes a text series and two svg panels")
{
    const std::vector<SimSummary> rows{fake_summary(Dgp::cusp, 100, 0.94, 0.8),
                                       fake_summary(Dgp::cusp, 1000, 0.95, 0.3)};
    const auto dir =
        (std::filesystem::temp_directory_path() / "ebci_plot_test").string();
    const auto files = emit_plot(rows, dir, "smoke");
    REQUIRE(files.size() == 3);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));

    const auto sidecar = csvio::read_file(files[0]);
    CHECK(sidecar.find("# series: cusp delta=1") != std::string::npos);
    CHECK(sidecar.find("100 0.94 0.8") != std::string::npos);
    CHECK(sidecar.find("1000 0.95 0.3") != std::string::npos);

    const auto svg = csvio::read_file(files[1]);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("nominal") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(csvio::read_file(files[2]).find("mean width") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reference join matches on dgp, x0, delta and n")
{
    const std::vector<SimSummary> rows{fake_summary(Dgp::cusp, 1000, 0.953, 0.335),
                                       fake_summary(Dgp::cusp, 123, 0.9, 0.9)};
    const auto refs = parse_reference_csv(
        "dgp,x0,delta,n,coverage,width\n"
        "cusp,0,1,1000,0.951,0.298\n"
        "cusp,0,0.01,123,0.8,0.8\n");
    REQUIRE(refs.size() == 2);
    CHECK(refs[0].delta == 1.0);

    const auto joined = csvio::parse_csv(emit_results_csv_joined(rows, refs));
    REQUIRE(joined.header.size() == 14);
    CHECK(joined.header[12] == "ref_coverage");
    CHECK(joined.rows[0][12] == "0.951");
    CHECK(joined.rows[0][13] == "0.298");
    CHECK(joined.rows[1][12] == "");  // delta mismatch blocks the join
    CHECK(joined.rows[1][13] == "");
}

TEST_CASE("reference csv tolerates a missing delta column")
{
    const auto refs = parse_reference_csv(
        "dgp,x0,n,coverage,width\n"
        "ccf,0.6,2000,0.96,0.25\n");
    REQUIRE(refs.size() == 1);
    CHECK(std::isnan(refs[0].delta));
    CHECK(refs[0].n == 2000);
}

TEST_CASE("summary line carries the cell identity and the outcome")
{
    auto s = fake_summary(Dgp::cusp, 1000, 0.953, 0.335);
    const auto line = summary_line(s);
    CHECK(line.find("cusp delta=1") != std::string::npos);
    CHECK(line.find("n=1000") != std::string::npos);
    CHECK(line.find("coverage 0.953") != std::string::npos);
    CHECK(line.find("500/500 reps") != std::string::npos);
    CHECK(line.find("failed") == std::string::npos);

    s.failures = 30;
    s.valid = false;
    const auto bad = summary_line(s);
    CHECK(bad.find("30 failed") != std::string::npos);
    CHECK(bad.find("RUN INVALID") != std::string::npos);
}
