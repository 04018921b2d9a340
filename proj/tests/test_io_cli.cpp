#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "trendband/bands.hpp"
#include "trendband/cli.hpp"
#include "trendband/covariance.hpp"
#include "trendband/errors.hpp"
#include "trendband/estimators.hpp"
#include "trendband/gp.hpp"
#include "trendband/grid.hpp"
#include "trendband/io.hpp"

using namespace trendband;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "trendband_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    const auto path = scratch_file(name);
    std::ofstream out(path);
    out << content;
    return path.string();
}

FunctionalSample demo_sample(std::uint64_t seed, std::size_t n, std::size_t p) {
    const DesignGrid grid = DesignGrid::equispaced(p, 1.0);
    GaussianSampler rng(seed);
    Matrix data(n, p);
    for (auto& v : data.values()) v = rng.normal();
    return FunctionalSample(std::move(data), grid);
}

}  // namespace

TEST_CASE("format_double is shortest and round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 2.5, -1.0 / 7.0, 0.0}) {
        const std::string text = format_double(v);
        CHECK(std::stod(text) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("read_sample parses the documented layout") {
    std::istringstream in("t,0.1,0.5,0.9\n1,2,3\n3,4,5\n");
    const FunctionalSample sample = read_sample(in);
    CHECK(sample.curve_count() == 2);
    CHECK(sample.point_count() == 3);
    CHECK(sample.grid().points() == std::vector<double>{0.1, 0.5, 0.9});
    CHECK(sample.grid().horizon() == 0.9);  // defaults to the last design point
    CHECK(cross_sectional_means(sample) == std::vector<double>{2.0, 3.0, 4.0});
}

TEST_CASE("comment lines set the horizon and are otherwise skipped") {
    std::istringstream in("# synthetic demo\n# T=1.25\n\nt,0.1,0.5\n1,2\n");
    const FunctionalSample sample = read_sample(in);
    CHECK(sample.grid().horizon() == 1.25);
    CHECK(sample.curve_count() == 1);
}

TEST_CASE("malformed sample files fail with the offending line") {
    auto expect_parse_error = [](const std::string& text, long line) {
        std::istringstream in(text);
        try {
            read_sample(in);
            FAIL_CHECK("expected a parse failure for: " << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
            CHECK(std::string(e.what()).find("(line " + std::to_string(line) + ")") !=
                  std::string::npos);
        }
    };
    expect_parse_error("t,0.5,0.2,0.9\n1,2,3\n", 1);      // unordered grid
    expect_parse_error("t,0.1,0.5\n1,2,3\n", 2);          // ragged row
    expect_parse_error("t,0.1,0.5\n1,abc\n", 2);          // non-numeric field
    expect_parse_error("t,0.1,0.5\n1,inf\n", 2);          // non-finite field
    expect_parse_error("1,2,3\n", 1);                     // missing 't' header
    expect_parse_error("t,0.1,0.5\n", 1);                 // no observation rows
    expect_parse_error("t,0.1\n1\n", 1);                  // single-point grid
    expect_parse_error("# T=0.5\nt,0.1,0.9\n1,2\n", 2);   // point beyond horizon

    std::istringstream empty("");
    CHECK_THROWS_AS(read_sample(empty), ParseError);
    CHECK_THROWS_AS(read_sample(std::string("/no/such/dir/sample.csv")), ValidationError);
}

TEST_CASE("samples survive write/read cycles bit for bit") {
    GaussianSampler rng(606);
    for (std::size_t round = 0; round < 100; ++round) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6.0);
        const std::size_t p = 2 + static_cast<std::size_t>(rng.uniform() * 24.0);
        const double horizon = (round % 3 == 0) ? 2.5 : 1.0;
        std::vector<double> pts(p);
        for (auto& t : pts) t = rng.uniform() * horizon;
        std::sort(pts.begin(), pts.end());
        const DesignGrid grid(pts, horizon);
        Matrix data(n, p);
        const double scale = std::pow(10.0, static_cast<double>(round % 7) - 3.0);
        for (auto& v : data.values()) v = scale * rng.normal();
        const FunctionalSample sample(std::move(data), grid);

        std::ostringstream first;
        write_sample(sample, first);
        std::istringstream back(first.str());
        const FunctionalSample again = read_sample(back);

        CHECK(again.grid().points() == sample.grid().points());
        CHECK(again.grid().horizon() == sample.grid().horizon());
        CHECK(again.data().values() == sample.data().values());

        std::ostringstream second;
        write_sample(again, second);
        CHECK(second.str() == first.str());
    }
}

TEST_CASE("bands survive write/read cycles bit for bit") {
    const FunctionalSample sample = demo_sample(17, 6, 40);
    EstimatorConfig config;
    config.bandwidth = 0.2;
    const auto eval = default_eval_grid(1.0, 33);
    const TrendEstimate fit = estimate_trend(sample, config, eval);
    const VarianceEstimate variance = estimate_pointwise_variance(sample, config, eval);

    for (BandKind kind : {BandKind::simultaneous, BandKind::pointwise}) {
        const ConfidenceBand band = kind == BandKind::simultaneous
                                        ? simultaneous_band(fit, variance, 0.1)
                                        : pointwise_band(fit, variance, 0.1);
        BandMetadata meta;
        meta.gamma = 0.1;
        meta.method = "loclin";
        meta.bandwidth = 0.2;
        meta.kernel = "epanechnikov";

        std::ostringstream first;
        write_band(band, meta, first);
        std::istringstream back(first.str());
        BandMetadata meta_back;
        const ConfidenceBand again = read_band(back, &meta_back);

        CHECK(again.eval_grid == band.eval_grid);
        CHECK(again.center == band.center);
        CHECK(again.lower == band.lower);
        CHECK(again.upper == band.upper);
        CHECK(again.level == band.level);
        CHECK(again.n == band.n);
        CHECK(again.kind == band.kind);
        CHECK(meta_back.gamma == meta.gamma);
        CHECK(meta_back.method == meta.method);
        CHECK(meta_back.bandwidth == meta.bandwidth);
        CHECK(meta_back.kernel == meta.kernel);

        std::ostringstream second;
        write_band(again, meta_back, second);
        CHECK(second.str() == first.str());
    }
}

TEST_CASE("malformed band files are rejected") {
    auto reject = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_band(in), ParseError);
    };
    reject("");                                           // no header at all
    reject("t,center,lower,upper\n0,1,0,2\n");            // missing metadata line
    reject("# not json\nt,center,lower,upper\n0,1,0,2\n");
    reject("# {\"gamma\":0.1}\nt,center,lower,upper\n0,1,0,2\n");  // incomplete metadata
}

TEST_CASE("trend output lists the metadata line and one row per point") {
    const FunctionalSample sample = demo_sample(3, 2, 20);
    EstimatorConfig config;
    config.bandwidth = 0.25;
    const auto eval = default_eval_grid(1.0, 11);
    const TrendEstimate fit = estimate_trend(sample, config, eval);
    std::ostringstream out;
    write_trend(fit, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line.substr(0, 3) == "# {");
    std::getline(lines, line);
    CHECK(line == "t,estimate");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == eval.size());
}

TEST_CASE("sup-deviation dumps are one row per replication") {
    CoverageReport report;
    report.sup_deviations = {0.25, 0.5, 0.125};
    std::ostringstream out;
    write_sup_deviations(report, out);
    CHECK(out.str() == "replication,sup_deviation\n0,0.25\n1,0.5\n2,0.125\n");
}

TEST_CASE("cli estimates a trend from a sample file") {
    const auto path = scratch_file("estimate_in.csv").string();
    write_sample(demo_sample(21, 4, 30), path);
    const auto result = run({"estimate", path, "--method", "loclin", "--bandwidth", "0.2",
                             "--eval-points", "21"});
    CHECK(result.code == 0);
    CHECK(result.err.empty());
    std::istringstream lines(result.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line.substr(0, 3) == "# {");
    std::getline(lines, line);
    CHECK(line == "t,estimate");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 21);
}

TEST_CASE("cli bands are ordered and match the in-memory pipeline exactly") {
    const auto path = scratch_file("band_in.csv").string();
    write_sample(demo_sample(33, 8, 40), path);
    const auto result = run({"band", path, "--method", "loclin", "--bandwidth", "0.2",
                             "--gamma", "0.1", "--eval-points", "31"});
    REQUIRE(result.code == 0);
    std::istringstream back(result.out);
    const ConfidenceBand cli_band = read_band(back);

    const FunctionalSample sample = read_sample(path);
    EstimatorConfig config;
    config.method = TrendMethod::local_linear;
    config.bandwidth = 0.2;
    const auto eval = default_eval_grid(sample.grid().horizon(), 31);
    const TrendEstimate fit = estimate_trend(sample, config, eval);
    const VarianceEstimate variance = estimate_pointwise_variance(sample, config, eval);
    const ConfidenceBand direct = simultaneous_band(fit, variance, 0.1);

    CHECK(cli_band.eval_grid == direct.eval_grid);
    CHECK(cli_band.center == direct.center);
    CHECK(cli_band.lower == direct.lower);
    CHECK(cli_band.upper == direct.upper);
    for (std::size_t k = 0; k < cli_band.center.size(); ++k) {
        CHECK(cli_band.lower[k] <= cli_band.center[k]);
        CHECK(cli_band.center[k] <= cli_band.upper[k]);
    }
}

TEST_CASE("cli simulate is reproducible and feeds back into the reader") {
    const std::vector<std::string> args = {"simulate", "--model", "ou:1:0.5",  "--mean",
                                           "sine",     "--noise", "iid",       "--sigma",
                                           "0.25",     "--n",     "4",         "--p",
                                           "12",       "--seed",  "9"};
    const auto first = run(args);
    const auto second = run(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);

    std::istringstream in(first.out);
    const FunctionalSample sample = read_sample(in);
    CHECK(sample.curve_count() == 4);
    CHECK(sample.point_count() == 12);
    CHECK(sample.grid().horizon() == 1.0);
}

TEST_CASE("cli coverage emits a json report echoing the configuration") {
    const auto deviations = scratch_file("coverage_devs.csv").string();
    const auto result =
        run({"coverage", "--n", "8", "--p", "20", "--reps", "5", "--seed", "3", "--bandwidth",
             "0.2", "--eval-points", "21", "--gamma", "0.1", "--deviations", deviations});
    REQUIRE(result.code == 0);
    const auto report = nlohmann::json::parse(result.out);
    CHECK(report.at("experiment") == "coverage");
    CHECK(report.at("setup").at("n") == 8);
    CHECK(report.at("setup").at("p") == 20);
    CHECK(report.at("setup").at("seed") == 3);
    CHECK(report.at("gamma") == 0.1);
    const double coverage = report.at("simultaneous_coverage").get<double>();
    CHECK(coverage >= 0.0);
    CHECK(coverage <= 1.0);
    CHECK(report.at("sup_deviations").size() == 5);

    std::ifstream devs(deviations);
    std::string line;
    std::getline(devs, line);
    CHECK(line == "replication,sup_deviation");
    std::size_t rows = 0;
    while (std::getline(devs, line)) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("cli normality and rate-check reports parse as json") {
    const auto normality = run({"normality", "--n", "10", "--p", "20", "--reps", "8", "--seed",
                                "2", "--bandwidth", "0.2", "--sigma", "0.1"});
    REQUIRE(normality.code == 0);
    const auto nj = nlohmann::json::parse(normality.out);
    CHECK(nj.at("experiment") == "normality");
    CHECK(nj.at("setup").at("replications") == 8);

    const auto rates = run({"rate-check", "--n", "6", "--p-list", "15,30", "--reps", "10",
                            "--seed", "2", "--bandwidth", "0.2", "--sigma", "0.1"});
    REQUIRE(rates.code == 0);
    const auto rj = nlohmann::json::parse(rates.out);
    CHECK(rj.at("experiment") == "rate_check");
    CHECK(rj.at("p_list") == nlohmann::json::array({15, 30}));
    CHECK(rj.at("nph_predicted_ratio") == 2.0);
}

TEST_CASE("cli failure modes use distinct exit codes") {
    CHECK(run({"unknown-subcommand"}).code == 1);
    CHECK(run({"estimate"}).code == 1);                       // missing input
    CHECK(run({"estimate", "/no/such/file.csv"}).code == 1);  // unreadable input
    CHECK(run({}).code == 1);

    const auto path = scratch_file("errors_in.csv").string();
    write_sample(demo_sample(55, 3, 10), path);
    const auto bad_h = run({"estimate", path, "--bandwidth", "-0.5"});
    CHECK(bad_h.code == 1);
    CHECK(!bad_h.err.empty());
    const auto bad_gamma = run({"band", path, "--gamma", "1.5", "--bandwidth", "0.3"});
    CHECK(bad_gamma.code == 1);

    // Numeric degeneracy inside the computation exits with 2.
    const auto degenerate = run({"estimate", path, "--bandwidth", "0.0001"});
    CHECK(degenerate.code == 2);
    CHECK(degenerate.err.find("t=") != std::string::npos);

    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("estimate") != std::string::npos);
    CHECK(help.out.find("band") != std::string::npos);
}

TEST_CASE("cli warns about strongly non-uniform designs") {
    const std::string csv = "# T=1\nt,0.48,0.5,0.52\n1,2,3\n2,3,4\n";
    const auto path = write_scratch("skewed_grid.csv", csv);
    const auto result = run({"estimate", path, "--method", "clark", "--bandwidth", "0.8",
                             "--eval-points", "11"});
    CHECK(result.code == 0);
    CHECK(result.err.find("warning") != std::string::npos);
}
