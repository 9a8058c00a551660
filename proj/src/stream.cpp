#include "taskdiag/stream.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "taskdiag/errors.hpp"

namespace taskdiag {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool looks_like_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// Days since civil epoch, Howard Hinnant's algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t parse_timestamp(const std::string& raw) {
    const std::string s = trim(raw);
    if (looks_like_integer(s)) return std::stoll(s);
    // ISO-8601: YYYY-MM-DD[{T| }HH:MM:SS[Z]]
    int y, mo, d, h = 0, mi = 0, se = 0;
    char sep = 0;
    int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &se);
    if (n != 3 && n != 7)
        throw MalformedRow("unparseable timestamp '" + s + "'");
    if (n == 7 && sep != 'T' && sep != ' ')
        throw MalformedRow("unparseable timestamp '" + s + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

double parse_cell(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    if (s.empty() || s == "nan" || s == "NaN" || s == "NAN")
        return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw MalformedRow("trailing characters in cell");
        return v;
    } catch (const MalformedRow&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedRow("unparseable cell '" + s + "' at line " +
                           std::to_string(line_no));
    }
}

// Fills NaN runs per channel by linear interpolation between the nearest
// finite neighbors. Runs longer than `limit` and runs touching either end
// are errors.
void interpolate_gaps(std::vector<double>& col, std::size_t limit) {
    const std::size_t n = col.size();
    std::size_t i = 0;
    while (i < n) {
        if (!std::isnan(col[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && std::isnan(col[j])) ++j;
        const std::size_t run = j - i;
        if (i == 0 || j == n)
            throw IrregularStep("leading or trailing missing values cannot be interpolated");
        if (run > limit)
            throw IrregularStep("gap of " + std::to_string(run) +
                                " steps exceeds gap_fill_limit " + std::to_string(limit));
        const double lo = col[i - 1];
        const double hi = col[j];
        for (std::size_t k = 0; k < run; ++k)
            col[i + k] = lo + (hi - lo) * static_cast<double>(k + 1) /
                                  static_cast<double>(run + 1);
        i = j;
    }
}

}  // namespace

void validate(const Stream& s) {
    if (s.t_steps < 2) throw MalformedRow("stream needs at least 2 samples");
    if (s.channels < 1) throw MalformedRow("stream needs at least 1 channel");
    if (s.step_seconds <= 0) throw MalformedRow("step_duration must be positive");
    if (s.channel_names.size() != s.channels)
        throw MalformedRow("channel_names size mismatch");
    std::unordered_set<std::string> seen;
    for (const auto& name : s.channel_names) {
        if (name.empty()) throw MalformedRow("empty channel name");
        if (!seen.insert(name).second)
            throw MalformedRow("duplicate channel name '" + name + "'");
    }
    if (s.values.size() != s.t_steps * s.channels)
        throw MalformedRow("values size mismatch");
    for (double v : s.values)
        if (std::isnan(v)) throw MalformedRow("NaN in stream values");
}

std::size_t steps_per_day(const Stream& s) {
    if (s.step_seconds <= 0 || 86400 % s.step_seconds != 0)
        throw IrregularStep("step_duration " + std::to_string(s.step_seconds) +
                            " s does not divide one day evenly");
    return static_cast<std::size_t>(86400 / s.step_seconds);
}

std::size_t resolve_channel(const Stream& s, const ChannelSelector& sel) {
    if (sel.mode == ChannelSelector::Mode::all) {
        if (s.channels == 1) return 0;
        throw UnknownChannel("selector 'all' is ambiguous on a multi-channel stream");
    }
    for (std::size_t c = 0; c < s.channels; ++c)
        if (s.channel_names[c] == sel.name) return c;
    throw UnknownChannel("'" + sel.name + "' not in stream '" + s.series_id + "'");
}

Stream load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw EmptyFile("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile(path + " has no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);

    std::size_t ts_col = header.size();
    std::vector<std::size_t> value_cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name == schema.timestamp_column) {
            ts_col = c;
        } else if (schema.value_columns.empty() ||
                   std::find(schema.value_columns.begin(), schema.value_columns.end(),
                             name) != schema.value_columns.end()) {
            value_cols.push_back(c);
            names.push_back(name);
        }
    }
    if (ts_col == header.size())
        throw MalformedRow("timestamp column '" + schema.timestamp_column +
                           "' not found in " + path);
    if (value_cols.empty()) throw MalformedRow("no value columns in " + path);

    std::vector<std::pair<std::int64_t, std::vector<double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() < header.size())
            throw MalformedRow("line " + std::to_string(line_no) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
        std::vector<double> row(value_cols.size());
        for (std::size_t k = 0; k < value_cols.size(); ++k)
            row[k] = parse_cell(cells[value_cols[k]], line_no);
        rows.emplace_back(parse_timestamp(cells[ts_col]), std::move(row));
    }
    if (rows.size() < 2) throw EmptyFile(path + " has fewer than 2 data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw NonMonotonicTime("duplicate timestamp " + std::to_string(rows[i].first));

    // Modal inter-row delta defines the grid step.
    std::map<std::int64_t, std::size_t> delta_counts;
    for (std::size_t i = 1; i < rows.size(); ++i)
        ++delta_counts[rows[i].first - rows[i - 1].first];
    std::int64_t step = 0;
    std::size_t best = 0;
    for (const auto& [d, cnt] : delta_counts)
        if (cnt > best) { best = cnt; step = d; }
    if (step <= 0) throw IrregularStep("could not infer a positive step");

    const std::int64_t start = rows.front().first;
    const std::int64_t span = rows.back().first - start;
    if (span % step != 0)
        throw IrregularStep("timestamps do not align to the inferred step of " +
                            std::to_string(step) + " s");
    const std::size_t t_steps = static_cast<std::size_t>(span / step) + 1;
    const std::size_t chans = value_cols.size();

    std::vector<double> values(t_steps * chans,
                               std::numeric_limits<double>::quiet_NaN());
    for (const auto& [ts, row] : rows) {
        if ((ts - start) % step != 0)
            throw IrregularStep("timestamp " + std::to_string(ts) +
                                " is off the inferred grid");
        const std::size_t t = static_cast<std::size_t>((ts - start) / step);
        for (std::size_t c = 0; c < chans; ++c) values[t * chans + c] = row[c];
    }

    // Interpolate per channel, then reassemble.
    std::vector<double> col(t_steps);
    for (std::size_t c = 0; c < chans; ++c) {
        for (std::size_t t = 0; t < t_steps; ++t) col[t] = values[t * chans + c];
        interpolate_gaps(col, schema.gap_fill_limit);
        for (std::size_t t = 0; t < t_steps; ++t) values[t * chans + c] = col[t];
    }

    Stream s;
    s.values = std::move(values);
    s.t_steps = t_steps;
    s.channels = chans;
    s.step_seconds = step;
    s.start_time = start;
    s.channel_names = std::move(names);
    // series_id defaults to the file stem
    std::string stem = path;
    if (auto pos = stem.find_last_of("/\\"); pos != std::string::npos)
        stem = stem.substr(pos + 1);
    if (auto pos = stem.find_last_of('.'); pos != std::string::npos)
        stem = stem.substr(0, pos);
    s.series_id = stem;
    validate(s);
    return s;
}

void write_csv(const Stream& s, const std::string& path,
               const std::string& timestamp_column) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << timestamp_column;
    for (const auto& name : s.channel_names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (std::size_t t = 0; t < s.t_steps; ++t) {
        out << (s.start_time + static_cast<std::int64_t>(t) * s.step_seconds);
        for (std::size_t c = 0; c < s.channels; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", s.at(t, c));
            out << ',' << buf;
        }
        out << '\n';
    }
}

Stream slice_channel(const Stream& s, const ChannelSelector& sel) {
    if (sel.mode == ChannelSelector::Mode::all) return s;
    const std::size_t c = resolve_channel(s, sel);
    Stream out;
    out.values.resize(s.t_steps);
    for (std::size_t t = 0; t < s.t_steps; ++t) out.values[t] = s.at(t, c);
    out.t_steps = s.t_steps;
    out.channels = 1;
    out.step_seconds = s.step_seconds;
    out.start_time = s.start_time;
    out.channel_names = {s.channel_names[c]};
    out.series_id = s.series_id;
    return out;
}

StreamSummary summarize(const Stream& s) {
    StreamSummary sum;
    sum.series_id = s.series_id;
    sum.t_steps = s.t_steps;
    sum.step_seconds = s.step_seconds;
    sum.start_time = s.start_time;
    sum.duration_seconds = s.duration_seconds();
    for (std::size_t c = 0; c < s.channels; ++c) {
        ChannelSummary cs;
        cs.name = s.channel_names[c];
        double mn = s.at(0, c), mx = s.at(0, c), acc = 0;
        for (std::size_t t = 0; t < s.t_steps; ++t) {
            const double v = s.at(t, c);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            acc += v;
        }
        cs.min = mn;
        cs.max = mx;
        cs.mean = acc / static_cast<double>(s.t_steps);
        double var = 0;
        for (std::size_t t = 0; t < s.t_steps; ++t) {
            const double d = s.at(t, c) - cs.mean;
            var += d * d;
        }
        cs.std = std::sqrt(var / static_cast<double>(s.t_steps));
        sum.channels.push_back(cs);
    }
    return sum;
}

}  // namespace taskdiag
