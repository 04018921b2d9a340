#include "trendband/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <system_error>
#include <utility>

#include "json.hpp"

#include "trendband/errors.hpp"

namespace trendband {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line) {
    const std::string_view body = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(value))
        throw ParseError("invalid number '" + std::string(token) + "'", line);
    return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

/// Reads the next content line, skipping blanks; returns false on EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) return true;
    }
    return false;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    return out;
}

std::string band_kind_name(BandKind kind) {
    return kind == BandKind::simultaneous ? "simultaneous" : "pointwise";
}

BandKind band_kind_from_name(std::string_view name, std::size_t line) {
    if (name == "simultaneous") return BandKind::simultaneous;
    if (name == "pointwise") return BandKind::pointwise;
    throw ParseError("unknown band kind '" + std::string(name) + "'", line);
}

ordered_json json_of(const MeanFunction& mean) {
    ordered_json j{{"kind", mean_kind_name(mean.kind)}};
    if (mean.kind == MeanKind::quadratic) {
        j["a"] = mean.a;
        j["b"] = mean.b;
        j["c"] = mean.c;
    }
    return j;
}

ordered_json json_of(const CovarianceFunction& cov) {
    ordered_json j{{"kind", cov_kind_name(cov.kind)}, {"scale", cov.scale}};
    if (cov.kind == CovKind::ornstein_uhlenbeck || cov.kind == CovKind::squared_exponential)
        j["range"] = cov.range;
    return j;
}

ordered_json json_of(const NoiseModel& noise) {
    ordered_json j{{"kind", noise.kind == NoiseModel::Kind::iid ? "iid" : "ar1"},
                   {"sigma", noise.sigma}};
    if (noise.kind == NoiseModel::Kind::ar1) j["ar_coeff"] = noise.ar_coeff;
    return j;
}

ordered_json json_of(const EstimatorConfig& config) {
    ordered_json j{{"method", method_name(config.method)},
                   {"kernel", kernel_name(config.kernel)}};
    if (config.bandwidth)
        j["bandwidth"] = *config.bandwidth;
    else
        j["bandwidth"] = "auto";
    return j;
}

ordered_json json_of(const SimulationSetup& setup) {
    return ordered_json{{"model", ordered_json{{"mean", json_of(setup.model.mean)},
                                               {"covariance", json_of(setup.model.covariance)},
                                               {"horizon", setup.model.horizon}}},
                        {"noise", json_of(setup.noise)},
                        {"n", setup.n},
                        {"p", setup.p},
                        {"estimator", json_of(setup.estimator)},
                        {"bandwidth", setup.bandwidth},
                        {"replications", setup.replications},
                        {"seed", setup.seed}};
}

}  // namespace

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

FunctionalSample read_sample(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<double> horizon;
    std::vector<double> grid;
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t header_line = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '#') {
            const std::string_view body = trim(content.substr(1));
            if (body.substr(0, 2) == "T=") horizon = parse_double(body.substr(2), lineno);
            continue;
        }
        const auto fields = split_csv(content);
        if (!have_header) {
            if (trim(fields.front()) != "t")
                throw ParseError("header row must start with 't'", lineno);
            if (fields.size() < 3)
                throw ParseError("header needs at least two grid points", lineno);
            for (std::size_t k = 1; k < fields.size(); ++k)
                grid.push_back(parse_double(fields[k], lineno));
            have_header = true;
            header_line = lineno;
            continue;
        }
        if (fields.size() != grid.size())
            throw ParseError("expected " + std::to_string(grid.size()) + " values, found " +
                                 std::to_string(fields.size()),
                             lineno);
        for (const auto field : fields) values.push_back(parse_double(field, lineno));
        ++rows;
    }
    if (!have_header) throw ParseError("missing header row", lineno == 0 ? 1 : lineno);
    if (rows == 0) throw ParseError("no observation rows after the header", lineno);

    const std::size_t p = grid.size();
    const double T = horizon.value_or(grid.back());
    try {
        return FunctionalSample(Matrix(rows, p, std::move(values)),
                                DesignGrid(std::move(grid), T));
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        // A malformed grid is a property of the header row.
        throw ParseError(e.what(), header_line);
    }
}

FunctionalSample read_sample(const std::string& path) {
    auto in = open_input(path);
    return read_sample(in);
}

void write_sample(const FunctionalSample& sample, std::ostream& out) {
    out << "# T=" << format_double(sample.grid().horizon()) << "\n";
    out << "t";
    for (double t : sample.grid().points()) out << ',' << format_double(t);
    out << "\n";
    for (std::size_t i = 0; i < sample.curve_count(); ++i) {
        const auto row = sample.data().row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << format_double(row[j]);
        }
        out << "\n";
    }
}

void write_sample(const FunctionalSample& sample, const std::string& path) {
    auto out = open_output(path);
    write_sample(sample, out);
}

void write_band(const ConfidenceBand& band, const BandMetadata& meta, std::ostream& out) {
    const ordered_json header{{"gamma", meta.gamma},     {"n", band.n},
                              {"method", meta.method},   {"h", meta.bandwidth},
                              {"kernel", meta.kernel},   {"kind", band_kind_name(band.kind)}};
    out << "# " << header.dump() << "\n";
    out << "t,center,lower,upper\n";
    for (std::size_t k = 0; k < band.eval_grid.size(); ++k)
        out << format_double(band.eval_grid[k]) << ',' << format_double(band.center[k]) << ','
            << format_double(band.lower[k]) << ',' << format_double(band.upper[k]) << "\n";
}

void write_band(const ConfidenceBand& band, const BandMetadata& meta, const std::string& path) {
    auto out = open_output(path);
    write_band(band, meta, out);
}

ConfidenceBand read_band(std::istream& in, BandMetadata* meta) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno) || trim(line).front() != '#')
        throw ParseError("missing '#' metadata line", lineno == 0 ? 1 : lineno);

    ConfidenceBand band;
    const std::string_view body = trim(std::string_view(line).substr(line.find('#') + 1));
    try {
        const auto header = ordered_json::parse(body);
        const double gamma = header.at("gamma").get<double>();
        band.level = 1.0 - gamma;
        band.n = header.at("n").get<std::size_t>();
        band.kind = band_kind_from_name(header.at("kind").get<std::string>(), lineno);
        if (meta) {
            meta->gamma = gamma;
            meta->method = header.at("method").get<std::string>();
            meta->bandwidth = header.at("h").get<double>();
            meta->kernel = header.at("kernel").get<std::string>();
        }
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("invalid metadata: ") + e.what(), lineno);
    }

    if (!next_line(in, line, lineno) || trim(line) != "t,center,lower,upper")
        throw ParseError("expected 't,center,lower,upper' header", lineno == 0 ? 1 : lineno);

    while (next_line(in, line, lineno)) {
        const auto fields = split_csv(trim(line));
        if (fields.size() != 4) throw ParseError("expected 4 values per row", lineno);
        band.eval_grid.push_back(parse_double(fields[0], lineno));
        band.center.push_back(parse_double(fields[1], lineno));
        band.lower.push_back(parse_double(fields[2], lineno));
        band.upper.push_back(parse_double(fields[3], lineno));
    }
    if (band.eval_grid.empty()) throw ParseError("band has no rows", lineno);
    return band;
}

ConfidenceBand read_band(const std::string& path, BandMetadata* meta) {
    auto in = open_input(path);
    return read_band(in, meta);
}

void write_trend(const TrendEstimate& trend, std::ostream& out) {
    const ordered_json header{{"method", method_name(trend.config.method)},
                              {"h", trend.bandwidth},
                              {"kernel", kernel_name(trend.config.kernel)},
                              {"n", trend.n}};
    out << "# " << header.dump() << "\n";
    out << "t,estimate\n";
    for (std::size_t k = 0; k < trend.eval_grid.size(); ++k)
        out << format_double(trend.eval_grid[k]) << ',' << format_double(trend.values[k]) << "\n";
}

void write_trend(const TrendEstimate& trend, const std::string& path) {
    auto out = open_output(path);
    write_trend(trend, out);
}

std::string to_json(const CoverageReport& report) {
    ordered_json j{{"experiment", "coverage"},
                   {"setup", json_of(report.setup)},
                   {"gamma", report.gamma},
                   {"eval_points", report.eval_points},
                   {"simultaneous_coverage", report.simultaneous_coverage},
                   {"pointwise_band_sup_coverage", report.pointwise_band_sup_coverage},
                   {"pointwise_band_mean_coverage", report.pointwise_band_mean_coverage},
                   {"mean_halfwidth", report.mean_halfwidth},
                   {"sup_deviation_mean", report.sup_deviation_mean},
                   {"sup_deviation_max", report.sup_deviation_max},
                   {"sup_deviations", report.sup_deviations}};
    return j.dump(2) + "\n";
}

std::string to_json(const NormalityReport& report) {
    ordered_json j{{"experiment", "normality"},
                   {"setup", json_of(report.setup)},
                   {"t0", report.t0},
                   {"model_variance", report.model_variance},
                   {"empirical_variance", report.empirical_variance},
                   {"variance_ratio", report.variance_ratio},
                   {"skewness", report.skewness},
                   {"excess_kurtosis", report.excess_kurtosis},
                   {"ks_distance", report.ks_distance}};
    return j.dump(2) + "\n";
}

std::string to_json(const RateCheckReport& report) {
    ordered_json j{{"experiment", "rate_check"},
                   {"setup", json_of(report.setup)},
                   {"t0", report.t0},
                   {"p_list", report.p_list},
                   {"variances", report.variances},
                   {"max_min_ratio", report.max_min_ratio},
                   {"nph_predicted_ratio", report.nph_predicted_ratio}};
    return j.dump(2) + "\n";
}

void write_sup_deviations(const CoverageReport& report, std::ostream& out) {
    out << "replication,sup_deviation\n";
    for (std::size_t r = 0; r < report.sup_deviations.size(); ++r)
        out << r << ',' << format_double(report.sup_deviations[r]) << "\n";
}

}  // namespace trendband
