#include "trendband/cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <string_view>
#include <system_error>
#include <vector>

#include "CLI11.hpp"

#include "trendband/bands.hpp"
#include "trendband/covariance.hpp"
#include "trendband/errors.hpp"
#include "trendband/estimators.hpp"
#include "trendband/experiments.hpp"
#include "trendband/gp.hpp"
#include "trendband/io.hpp"

namespace trendband {

namespace {

double to_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("invalid number '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

/// "auto" or a positive number.
std::optional<double> parse_bandwidth(const std::string& text) {
    if (text == "auto") return std::nullopt;
    return to_double(text);
}

/// kind[:scale[:range]] with kinds brownian | bridge | ou | sqexp.
CovarianceFunction parse_covariance(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() > 3)
        throw ValidationError("model spec '" + spec + "' has too many fields");
    const std::string_view kind = parts[0];
    const double scale = parts.size() > 1 ? to_double(parts[1]) : 1.0;
    const double range = parts.size() > 2 ? to_double(parts[2]) : 0.5;
    if (kind == "brownian") return CovarianceFunction::brownian(scale);
    if (kind == "bridge" || kind == "brownian_bridge")
        return CovarianceFunction::brownian_bridge(scale);
    if (kind == "ou" || kind == "ornstein_uhlenbeck")
        return CovarianceFunction::ornstein_uhlenbeck(scale, range);
    if (kind == "sqexp" || kind == "squared_exponential")
        return CovarianceFunction::squared_exponential(scale, range);
    throw ValidationError("unknown model kind '" + std::string(kind) + "'");
}

/// zero | sine | quadratic[:a:b:c].
MeanFunction parse_mean(const std::string& spec) {
    const auto parts = split(spec, ':');
    const std::string_view kind = parts[0];
    if (kind == "zero" || kind == "sine") {
        if (parts.size() > 1)
            throw ValidationError("mean '" + std::string(kind) + "' takes no coefficients");
        return kind == "zero" ? MeanFunction::zero() : MeanFunction::sine();
    }
    if (kind == "quadratic" || kind == "quad") {
        if (parts.size() != 1 && parts.size() != 4)
            throw ValidationError("quadratic mean needs coefficients a:b:c");
        if (parts.size() == 1) return MeanFunction::quadratic(0.0, 0.0, 0.0);
        return MeanFunction::quadratic(to_double(parts[1]), to_double(parts[2]),
                                       to_double(parts[3]));
    }
    throw ValidationError("unknown mean kind '" + std::string(kind) + "'");
}

/// iid | ar1:rho, with the marginal standard deviation given separately.
NoiseModel parse_noise(const std::string& spec, double sigma) {
    const auto parts = split(spec, ':');
    if (parts[0] == "iid") {
        if (parts.size() > 1) throw ValidationError("noise 'iid' takes no parameter");
        if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be non-negative");
        return NoiseModel::iid(sigma);
    }
    if (parts[0] == "ar1") {
        if (parts.size() != 2) throw ValidationError("noise 'ar1' needs a lag-1 correlation");
        return NoiseModel::ar1(sigma, to_double(parts[1]));
    }
    throw ValidationError("unknown noise kind '" + std::string(parts[0]) + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> sizes;
    for (const auto part : split(text, ',')) {
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || value == 0)
            throw ValidationError("invalid grid size '" + std::string(part) + "'");
        sizes.push_back(value);
    }
    return sizes;
}

template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw ValidationError("cannot open '" + path + "' for writing");
    write(file);
}

struct Options {
    std::string input;
    std::string out;
    std::string deviations;
    std::string method = "loclin";
    std::string kernel = "epanechnikov";
    std::string bandwidth = "auto";
    std::size_t eval_points = 401;
    double gamma = 0.05;
    std::string kind = "simultaneous";
    std::string model = "ou";
    std::string mean = "zero";
    std::string noise = "iid";
    double sigma = 0.0;
    double horizon = 1.0;
    std::size_t n = 100;
    std::size_t p = 100;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    double t0 = 0.5;
    std::string p_list = "25,50,100";
};

void add_estimator_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--method", opt.method, "Trend estimator: clark | loclin");
    cmd->add_option("--kernel", opt.kernel,
                    "Kernel: epanechnikov | triangular | biweight");
    cmd->add_option("--bandwidth", opt.bandwidth, "Bandwidth h, or 'auto'");
}

void add_model_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--model", opt.model,
                    "Process covariance: brownian|bridge|ou|sqexp[:scale[:range]]");
    cmd->add_option("--mean", opt.mean, "True trend: zero | sine | quadratic[:a:b:c]");
    cmd->add_option("--noise", opt.noise, "Measurement error: iid | ar1:rho");
    cmd->add_option("--sigma", opt.sigma, "Measurement error standard deviation");
    cmd->add_option("--horizon", opt.horizon, "Domain endpoint T");
    cmd->add_option("--n", opt.n, "Curves per sample");
    cmd->add_option("--p", opt.p, "Design points per curve");
    cmd->add_option("--seed", opt.seed, "Random seed");
}

EstimatorConfig estimator_config(const Options& opt) {
    EstimatorConfig config;
    config.method = method_from_name(opt.method);
    config.kernel = kernel_from_name(opt.kernel);
    config.bandwidth = parse_bandwidth(opt.bandwidth);
    return config;
}

GPModel gp_model(const Options& opt) {
    return GPModel(parse_mean(opt.mean), parse_covariance(opt.model), opt.horizon);
}

FunctionalSample read_sample_with_diagnostics(const std::string& path, std::ostream& err) {
    FunctionalSample sample = read_sample(path);
    const MeshReport mesh = validate_grid(sample.grid());
    if (mesh.ratio_warning)
        err << "warning: grid is far from quasi-uniform (max gap / min interior gap = "
            << mesh.quasi_uniform_ratio << ")\n";
    return sample;
}

void run_estimate(const Options& opt, std::ostream& fallback, std::ostream& err) {
    const FunctionalSample sample = read_sample_with_diagnostics(opt.input, err);
    const EstimatorConfig config = estimator_config(opt);
    const auto eval = default_eval_grid(sample.grid().horizon(), opt.eval_points);
    const TrendEstimate trend = estimate_trend(sample, config, eval);
    with_output(opt.out, fallback, [&](std::ostream& out) { write_trend(trend, out); });
}

void run_band(const Options& opt, std::ostream& fallback, std::ostream& err) {
    const FunctionalSample sample = read_sample_with_diagnostics(opt.input, err);
    const EstimatorConfig config = estimator_config(opt);
    const auto eval = default_eval_grid(sample.grid().horizon(), opt.eval_points);
    const TrendEstimate trend = estimate_trend(sample, config, eval);
    const VarianceEstimate variance = estimate_pointwise_variance(sample, config, eval);
    ConfidenceBand band;
    if (opt.kind == "simultaneous")
        band = simultaneous_band(trend, variance, opt.gamma);
    else if (opt.kind == "pointwise")
        band = pointwise_band(trend, variance, opt.gamma);
    else
        throw ValidationError("unknown band kind '" + opt.kind + "'");
    const BandMetadata meta{opt.gamma, method_name(config.method), trend.bandwidth,
                            kernel_name(config.kernel)};
    with_output(opt.out, fallback, [&](std::ostream& out) { write_band(band, meta, out); });
}

void run_simulate(const Options& opt, std::ostream& fallback) {
    const GPModel model = gp_model(opt);
    const NoiseModel noise = parse_noise(opt.noise, opt.sigma);
    const DesignGrid grid = DesignGrid::equispaced(opt.p, opt.horizon);
    Matrix paths = sample_gp(model, grid, opt.n, derive_seed(opt.seed, 0));
    Matrix data = add_noise(paths, noise, derive_seed(opt.seed, 1));
    const FunctionalSample sample(std::move(data), grid);
    with_output(opt.out, fallback, [&](std::ostream& out) { write_sample(sample, out); });
}

void run_coverage(const Options& opt, std::ostream& fallback) {
    const CoverageReport report =
        coverage_experiment(gp_model(opt), parse_noise(opt.noise, opt.sigma), opt.n, opt.p,
                            estimator_config(opt), opt.gamma, opt.reps, opt.seed,
                            opt.eval_points);
    with_output(opt.out, fallback, [&](std::ostream& out) { out << to_json(report); });
    if (!opt.deviations.empty())
        with_output(opt.deviations, fallback,
                    [&](std::ostream& out) { write_sup_deviations(report, out); });
}

void run_normality(const Options& opt, std::ostream& fallback) {
    const NormalityReport report =
        normality_diagnostic(gp_model(opt), parse_noise(opt.noise, opt.sigma), opt.n, opt.p,
                             estimator_config(opt), opt.t0, opt.reps, opt.seed);
    with_output(opt.out, fallback, [&](std::ostream& out) { out << to_json(report); });
}

void run_rate_check(const Options& opt, std::ostream& fallback) {
    const RateCheckReport report =
        rate_check(gp_model(opt), parse_noise(opt.noise, opt.sigma), opt.n,
                   parse_size_list(opt.p_list), estimator_config(opt), opt.t0, opt.reps,
                   opt.seed);
    with_output(opt.out, fallback, [&](std::ostream& out) { out << to_json(report); });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trend curves and simultaneous confidence bands for repeated noisy curves"};
    app.require_subcommand(1);
    Options opt;

    auto* estimate = app.add_subcommand("estimate", "Estimate the trend from a sample CSV");
    estimate->add_option("input", opt.input, "Sample CSV path")->required();
    add_estimator_options(estimate, opt);
    estimate->add_option("--eval-points", opt.eval_points, "Evaluation grid size");
    estimate->add_option("--out", opt.out, "Output path (default: stdout)");

    auto* band = app.add_subcommand("band", "Estimate the trend with a confidence band");
    band->add_option("input", opt.input, "Sample CSV path")->required();
    add_estimator_options(band, opt);
    band->add_option("--eval-points", opt.eval_points, "Evaluation grid size");
    band->add_option("--gamma", opt.gamma, "Miscoverage level in (0, 1)");
    band->add_option("--kind", opt.kind, "Band kind: simultaneous | pointwise");
    band->add_option("--out", opt.out, "Output path (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Draw noisy Gaussian-process curves");
    add_model_options(simulate, opt);
    simulate->add_option("--out", opt.out, "Output path (default: stdout)");

    auto* coverage = app.add_subcommand("coverage", "Monte Carlo band coverage experiment");
    add_model_options(coverage, opt);
    add_estimator_options(coverage, opt);
    coverage->add_option("--gamma", opt.gamma, "Miscoverage level in (0, 1)");
    coverage->add_option("--reps", opt.reps, "Replications");
    coverage->add_option("--eval-points", opt.eval_points, "Evaluation grid size");
    coverage->add_option("--deviations", opt.deviations,
                         "Also write per-replication sup deviations to this CSV");
    coverage->add_option("--out", opt.out, "Report path (default: stdout)");

    auto* normality = app.add_subcommand(
        "normality", "Compare sqrt(n)-scaled estimation error with its Gaussian limit");
    add_model_options(normality, opt);
    add_estimator_options(normality, opt);
    normality->add_option("--t0", opt.t0, "Evaluation point");
    normality->add_option("--reps", opt.reps, "Replications");
    normality->add_option("--out", opt.out, "Report path (default: stdout)");

    auto* rate = app.add_subcommand(
        "rate-check", "Estimator variance across grid sizes at fixed n and bandwidth");
    add_model_options(rate, opt);
    add_estimator_options(rate, opt);
    rate->add_option("--t0", opt.t0, "Evaluation point");
    rate->add_option("--p-list", opt.p_list, "Comma-separated grid sizes");
    rate->add_option("--reps", opt.reps, "Replications");
    rate->add_option("--out", opt.out, "Report path (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(estimate)) run_estimate(opt, out, err);
        else if (app.got_subcommand(band)) run_band(opt, out, err);
        else if (app.got_subcommand(simulate)) run_simulate(opt, out);
        else if (app.got_subcommand(coverage)) run_coverage(opt, out);
        else if (app.got_subcommand(normality)) run_normality(opt, out);
        else if (app.got_subcommand(rate)) run_rate_check(opt, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace trendband
