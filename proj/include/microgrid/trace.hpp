#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "microgrid/spaces.hpp"
#include "microgrid/types.hpp"

namespace microgrid {

// One hourly record. `hour` counts hours since 1970-01-01T00:00:00.
struct TraceRecord {
    std::int64_t hour = 0;
    Exogenous exog;
};

// Time-ordered exogenous observations at fixed hourly spacing.
struct ExogenousTrace {
    std::vector<TraceRecord> records;
    bool discretized = false;
    std::string source;
    double price_scale = 1.0;

    std::size_t size() const { return records.size(); }
    const Exogenous& exog(std::size_t t) const { return records[t].exog; }

    ExogenousTrace slice(std::size_t start, std::size_t count) const;
};

std::string format_hour(std::int64_t hour);           // ISO-8601, e.g. 2018-03-01T06:00:00
std::int64_t parse_hour(const std::string& stamp);    // throws std::invalid_argument

// Reads the CSV schema `timestamp,demand_kwh,pv_kwh,price_per_kwh`. Throws
// ParseError with the offending row/column and GapError on missing hours.
ExogenousTrace load_trace(const std::string& path);

void save_trace(const ExogenousTrace& trace, const std::string& path);

// Multiplies every price by factor (> 0); the factor is recorded in the
// trace metadata. Applied to raw traces before discretization.
ExogenousTrace scale_prices(ExogenousTrace trace, double factor);

// Snaps every record onto the observation grid.
ExogenousTrace discretize_trace(const ExogenousTrace& trace, const StateSpace& space);

// Bin sets the synthetic generator draws from.
struct SynthBins {
    std::vector<double> pv{0, 10, 20, 30};
    std::vector<double> demand{40, 50, 60, 70, 80, 90, 100, 110};
    std::vector<double> price{70, 130, 140};
};

// Reproducible synthetic trace over the given bins with a fixed diurnal
// template: PV only in daylight hours, demand and price peaking during the
// day. A structural stand-in for metered data, not a statistical model of it.
ExogenousTrace synth_trace(std::uint64_t seed, std::size_t hours,
                           const SynthBins& bins = {},
                           std::int64_t start_hour = 422184);  // 2018-03-01T00:00:00

}  // namespace microgrid
