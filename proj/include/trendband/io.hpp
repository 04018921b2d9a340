#ifndef TRENDBAND_IO_HPP
#define TRENDBAND_IO_HPP

#include <iosfwd>
#include <string>

#include "trendband/bands.hpp"
#include "trendband/experiments.hpp"
#include "trendband/grid.hpp"

namespace trendband {

/// Shortest decimal representation that parses back to the identical double.
std::string format_double(double value);

// Sample CSV: optional '# T=...' comment lines, then a header row
// "t,<t_1>,...,<t_p>" with the grid strictly increasing, then one row of p
// observations per curve. The horizon defaults to t_p when no comment sets it.

FunctionalSample read_sample(std::istream& in);
FunctionalSample read_sample(const std::string& path);
void write_sample(const FunctionalSample& sample, std::ostream& out);
void write_sample(const FunctionalSample& sample, const std::string& path);

// Band CSV: one '#'-prefixed JSON header line carrying gamma, n, method, h,
// kernel and kind, then "t,center,lower,upper" rows.

struct BandMetadata {
    double gamma = 0.0;
    std::string method;
    double bandwidth = 0.0;
    std::string kernel;
};

void write_band(const ConfidenceBand& band, const BandMetadata& meta, std::ostream& out);
void write_band(const ConfidenceBand& band, const BandMetadata& meta, const std::string& path);
ConfidenceBand read_band(std::istream& in, BandMetadata* meta = nullptr);
ConfidenceBand read_band(const std::string& path, BandMetadata* meta = nullptr);

void write_trend(const TrendEstimate& trend, std::ostream& out);
void write_trend(const TrendEstimate& trend, const std::string& path);

// Reports as JSON with stable field order; identical reports serialize to
// identical bytes.

std::string to_json(const CoverageReport& report);
std::string to_json(const NormalityReport& report);
std::string to_json(const RateCheckReport& report);

/// Per-replication sup-deviation dump, "replication,sup_deviation" rows.
void write_sup_deviations(const CoverageReport& report, std::ostream& out);

}  // namespace trendband

#endif
