#pragma once

// Paired claim-severity data: CSV ingestion with row-level validation,
// descriptive statistics and histogram export.
//
// Quartiles use linear interpolation between order statistics
// (Hyndman-Fan type 7, the R default). Skewness is m3 / m2^(3/2) and kurtosis
// is m4 / m2^2 (NOT excess kurtosis), with central moments m_k taken with
// divisor n.

#include <bivcomp/copula.hpp>
#include <bivcomp/detail/order_stats.hpp>
#include <bivcomp/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace bivcomp {

struct CsvOptions {
    char delimiter = ',';
    char decimal_separator = '.';
    /// nullopt: detect (a first row whose selected fields are not numbers is a header).
    std::optional<bool> has_header;
    /// Abort on the first bad row instead of rejecting it.
    bool strict = false;
};

/// Two columns, each a header name or a 0-based index.
struct ColumnSpec {
    std::string first = "0";
    std::string second = "1";

    /// "name1,name2" or "0,1"
    static ColumnSpec parse(std::string_view text) {
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || comma == 0 || comma + 1 == text.size())
            throw input_error("column spec must name two columns separated by ',', got '" + std::string(text) + "'");
        return ColumnSpec{std::string(text.substr(0, comma)), std::string(text.substr(comma + 1))};
    }
};

struct RowIssue {
    std::size_t line;  // 1-based line number in the file
    std::string message;
};

struct ClaimPairSample {
    std::vector<ClaimPair> records;
    std::string source;
    std::string first_name = "claim1";
    std::string second_name = "claim2";
    std::vector<RowIssue> rejected;

    std::size_t size() const noexcept { return records.size(); }

    std::vector<double> column(int which) const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(which == 0 ? r.first : r.second);
        return out;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::optional<double> parse_number(std::string_view field, char decimal) {
    std::string buf(field);
    if (decimal != '.') std::replace(buf.begin(), buf.end(), decimal, '.');
    if (!buf.empty() && buf.front() == '+') buf.erase(0, 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{} || ptr != buf.data() + buf.size() || buf.empty()) return std::nullopt;
    return value;
}

inline bool is_index(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Parses CSV text. Lines starting with '#' and blank lines are skipped.
inline ClaimPairSample parse_csv(std::istream& in, const ColumnSpec& cols, const CsvOptions& opt = {},
                                 std::string source = "<stream>") {
    ClaimPairSample sample;
    sample.source = std::move(source);
    const bool by_name = !detail::is_index(cols.first) || !detail::is_index(cols.second);
    std::optional<std::size_t> i1, i2;
    if (!by_name) {
        i1 = std::stoul(cols.first);
        i2 = std::stoul(cols.second);
    }
    bool first_row = true;
    std::string line;
    std::size_t lineno = 0;

    auto reject = [&](std::string msg) {
        if (opt.strict) throw input_error(sample.source + ": row " + std::to_string(lineno) + ": " + msg);
        sample.rejected.push_back({lineno, std::move(msg)});
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = detail::trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto fields = detail::split_fields(line, opt.delimiter);

        if (first_row) {
            first_row = false;
            bool header = false;
            if (opt.has_header) {
                header = *opt.has_header;
            } else if (by_name) {
                header = true;
            } else {
                const bool numeric = *i1 < fields.size() && *i2 < fields.size() &&
                                     detail::parse_number(fields[*i1], opt.decimal_separator) &&
                                     detail::parse_number(fields[*i2], opt.decimal_separator);
                header = !numeric;
            }
            if (header) {
                if (by_name) {
                    for (std::size_t k = 0; k < fields.size(); ++k) {
                        if (fields[k] == cols.first && !i1) i1 = k;
                        if (fields[k] == cols.second && !i2) i2 = k;
                    }
                    if (!i1) throw input_error(sample.source + ": column not found: '" + cols.first + "'");
                    if (!i2) throw input_error(sample.source + ": column not found: '" + cols.second + "'");
                }
                if (*i1 < fields.size()) sample.first_name = std::string(fields[*i1]);
                if (*i2 < fields.size()) sample.second_name = std::string(fields[*i2]);
                continue;
            }
            if (by_name) throw input_error(sample.source + ": column names given but the file has no header row");
        }

        if (*i1 >= fields.size() || *i2 >= fields.size()) {
            reject("missing column (row has " + std::to_string(fields.size()) + " fields)");
            continue;
        }
        const auto a = detail::parse_number(fields[*i1], opt.decimal_separator);
        const auto b = detail::parse_number(fields[*i2], opt.decimal_separator);
        if (!a || !b) {
            reject("unparseable value '" + std::string(!a ? fields[*i1] : fields[*i2]) + "'");
            continue;
        }
        if (!(*a > 0.0) || !(*b > 0.0) || !std::isfinite(*a) || !std::isfinite(*b)) {
            reject("non-positive or non-finite value (" + std::string(fields[*i1]) + ", " + std::string(fields[*i2]) +
                   ")");
            continue;
        }
        sample.records.push_back({*a, *b});
    }
    if (sample.records.empty()) throw input_error(sample.source + ": no valid rows");
    return sample;
}

inline ClaimPairSample load_csv(const std::filesystem::path& path, const ColumnSpec& cols, const CsvOptions& opt = {}) {
    std::ifstream in(path);
    if (!in) throw input_error("file not found or unreadable: " + path.string());
    return parse_csv(in, cols, opt, path.string());
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, const ClaimPairSample& sample, char delimiter = ',') {
    out << sample.first_name << delimiter << sample.second_name << '\n';
    for (const auto& r : sample.records) out << format_double(r.first) << delimiter << format_double(r.second) << '\n';
}

struct SummaryStats {
    std::size_t n = 0;
    double min = 0, max = 0, q1 = 0, median = 0, q3 = 0, mean = 0;
    double skewness = 0;
    double kurtosis = 0;  // non-excess: 3 for a normal sample
};

inline SummaryStats summarize(std::span<const double> values) {
    if (values.size() < 2) throw degenerate_error("summary: need at least 2 observations");
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    SummaryStats out;
    out.n = s.size();
    out.min = s.front();
    out.max = s.back();
    out.q1 = detail::linear_quantile(s, 0.25);
    out.median = detail::linear_quantile(s, 0.5);
    out.q3 = detail::linear_quantile(s, 0.75);

    // sum in sorted order so the result does not depend on input order
    const double n = static_cast<double>(s.size());
    double sum = 0.0;
    for (double x : s) sum += x;
    out.mean = sum / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : s) {
        const double d = x - out.mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw degenerate_error("summary: zero variance, skewness and kurtosis are undefined");
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
    return out;
}

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges spanning [min, max]
    std::vector<std::size_t> counts;
    bool log_scale = false;

    /// counts / (n * width)
    std::vector<double> density() const {
        std::size_t n = 0;
        for (auto c : counts) n += c;
        std::vector<double> d(counts.size(), 0.0);
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const double w = edges[k + 1] - edges[k];
            if (w > 0.0 && n > 0) d[k] = static_cast<double>(counts[k]) / (static_cast<double>(n) * w);
        }
        return d;
    }
};

/// Equal-width (or, with log_scale, equal-ratio) bins over [min, max]; the last bin is closed.
inline Histogram histogram(std::span<const double> values, std::size_t bins, bool log_scale = false) {
    if (values.empty()) throw domain_error("histogram: no values");
    if (bins < 1) throw domain_error("histogram: bin count must be >= 1");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (log_scale && !(lo > 0.0)) throw domain_error("histogram: log-scale bins need positive values");

    Histogram h;
    h.log_scale = log_scale;
    h.counts.assign(bins, 0);
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    const double width = (b - a) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        const double e = a + width * static_cast<double>(k);
        h.edges[k] = log_scale ? std::exp(e) : e;
    }
    h.edges.front() = lo;
    h.edges.back() = hi;
    for (double x : values) {
        std::size_t k = 0;
        if (width > 0.0) {
            const double t = ((log_scale ? std::log(x) : x) - a) / width;
            k = std::min(static_cast<std::size_t>(std::max(t, 0.0)), bins - 1);
        }
        ++h.counts[k];
    }
    return h;
}

}  // namespace bivcomp
