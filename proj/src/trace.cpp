#include "microgrid/trace.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "microgrid/errors.hpp"

namespace microgrid {

namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

std::string format_hour(std::int64_t hour) {
    std::int64_t day = hour / 24;
    int hod = static_cast<int>(hour % 24);
    if (hod < 0) {
        hod += 24;
        --day;
    }
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00:00", y, m, d, hod);
    return buf;
}

std::int64_t parse_hour(const std::string& stamp) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n =
        std::sscanf(stamp.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n < 6 || (sep != 'T' && sep != ' '))
        throw std::invalid_argument("timestamp not in ISO-8601 form: " + stamp);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23)
        throw std::invalid_argument("timestamp field out of range: " + stamp);
    if (mi != 0 || s != 0)
        throw std::invalid_argument("timestamp not on an hour boundary: " + stamp);
    return days_from_civil(y, mo, d) * 24 + h;
}

ExogenousTrace ExogenousTrace::slice(std::size_t start, std::size_t count) const {
    ExogenousTrace out;
    out.discretized = discretized;
    out.source = source;
    out.price_scale = price_scale;
    out.records.assign(records.begin() + static_cast<std::ptrdiff_t>(start),
                       records.begin() + static_cast<std::ptrdiff_t>(start + count));
    return out;
}

ExogenousTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file " + path);

    ExogenousTrace trace;
    trace.source = path;

    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1, 1);
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,demand_kwh,pv_kwh,price_per_kwh")
        throw ParseError("unexpected header '" + line + "'", 1, 1);

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::array<std::string, 4> fields;
        std::size_t column = 0;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            if (column >= 4) throw ParseError("too many fields", row, column + 1);
            fields[column++] = field;
        }
        if (column != 4) throw ParseError("expected 4 fields", row, column);

        TraceRecord record;
        try {
            record.hour = parse_hour(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), row, 1);
        }
        auto parse_value = [&](const std::string& text, std::size_t col) {
            try {
                std::size_t used = 0;
                const double v = std::stod(text, &used);
                while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
                    ++used;
                if (used != text.size()) throw std::invalid_argument("trailing characters");
                return v;
            } catch (const std::exception&) {
                throw ParseError("invalid number '" + text + "'", row, col);
            }
        };
        record.exog.demand = parse_value(fields[1], 2);
        record.exog.pv = parse_value(fields[2], 3);
        record.exog.price = parse_value(fields[3], 4);
        if (record.exog.demand < 0) throw ParseError("negative demand", row, 2);
        if (record.exog.pv < 0) throw ParseError("negative pv", row, 3);
        if (record.exog.price < 0) throw ParseError("negative price", row, 4);

        if (!trace.records.empty()) {
            const std::int64_t prev = trace.records.back().hour;
            if (record.hour != prev + 1)
                throw GapError("trace gap between " + format_hour(prev) + " and " +
                               format_hour(record.hour));
        }
        trace.records.push_back(record);
    }
    return trace;
}

void save_trace(const ExogenousTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "timestamp,demand_kwh,pv_kwh,price_per_kwh\n";
    char buf[160];
    for (const auto& record : trace.records) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n",
                      format_hour(record.hour).c_str(), record.exog.demand,
                      record.exog.pv, record.exog.price);
        out << buf;
    }
}

ExogenousTrace scale_prices(ExogenousTrace trace, double factor) {
    if (factor <= 0.0) throw std::invalid_argument("price scale factor must be positive");
    for (auto& record : trace.records) record.exog.price *= factor;
    trace.price_scale *= factor;
    return trace;
}

ExogenousTrace discretize_trace(const ExogenousTrace& trace, const StateSpace& space) {
    ExogenousTrace out = trace;
    for (auto& record : out.records)
        record.exog = discretize_observation(record.exog, space);
    out.discretized = true;
    return out;
}

namespace {

// Weights over bin positions concentrated around mu in [0, 1].
std::vector<double> position_weights(std::size_t n, double mu, double sigma) {
    std::vector<double> w(n, 1.0);
    if (n == 1) return w;
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = static_cast<double>(i) / static_cast<double>(n - 1);
        const double z = (pos - mu) / sigma;
        w[i] = std::exp(-0.5 * z * z);
    }
    return w;
}

double draw_bin(const std::vector<double>& bins, double mu, double sigma,
                std::mt19937_64& rng) {
    const auto weights = position_weights(bins.size(), mu, sigma);
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    return bins[dist(rng)];
}

}  // namespace

ExogenousTrace synth_trace(std::uint64_t seed, std::size_t hours, const SynthBins& bins,
                           std::int64_t start_hour) {
    if (bins.pv.empty() || bins.demand.empty() || bins.price.empty())
        throw InvalidBins("synthetic generator needs non-empty bins");

    ExogenousTrace trace;
    trace.discretized = true;
    trace.source = "synthetic(seed=" + std::to_string(seed) + ")";
    std::mt19937_64 rng(seed);

    for (std::size_t t = 0; t < hours; ++t) {
        TraceRecord record;
        record.hour = start_hour + static_cast<std::int64_t>(t);
        const int h = static_cast<int>(((record.hour % 24) + 24) % 24);

        // solar output only between 07:00 and 17:00, peaking at midday
        if (h >= 7 && h <= 17) {
            const double mu = std::sin(std::numbers::pi * (h - 7) / 10.0);
            record.exog.pv = draw_bin(bins.pv, mu, 0.22, rng);
        } else {
            record.exog.pv = bins.pv.front();
        }

        double demand_mu;
        if (h < 7 || h >= 22) demand_mu = 0.15;
        else if (h <= 8) demand_mu = 0.45;
        else if (h <= 17) demand_mu = 0.8;
        else demand_mu = 0.55;
        record.exog.demand = draw_bin(bins.demand, demand_mu, 0.22, rng);

        double price_mu, price_sigma;
        if (h <= 6 || h >= 23) {
            price_mu = 0.0;
            price_sigma = 0.12;
        } else if (h <= 8) {
            price_mu = 0.55;
            price_sigma = 0.3;
        } else if (h <= 20) {
            price_mu = 0.95;
            price_sigma = 0.25;
        } else {
            price_mu = 0.5;
            price_sigma = 0.3;
        }
        record.exog.price = draw_bin(bins.price, price_mu, price_sigma, rng);

        trace.records.push_back(record);
    }
    return trace;
}

}  // namespace microgrid
