#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace taskdiag {

/// A temporally ordered, uniformly sampled multivariate series.
///
/// Immutable after construction; safe to share across threads. `values` is
/// row-major T_steps x channels, gap-free and NaN-free (ingestion resolves
/// missing entries by linear interpolation).
struct Stream {
    std::vector<double> values;
    std::size_t t_steps = 0;
    std::size_t channels = 0;
    std::int64_t step_seconds = 0;       // duration of one sample
    std::int64_t start_time = 0;         // UTC epoch seconds of sample 0
    std::vector<std::string> channel_names;
    std::string series_id;

    double at(std::size_t t, std::size_t c) const { return values[t * channels + c]; }
    std::int64_t duration_seconds() const {
        return static_cast<std::int64_t>(t_steps) * step_seconds;
    }
};

/// Validates the Stream invariants; throws MalformedRow on violation.
void validate(const Stream& s);

/// Steps per calendar day. step_seconds must divide 86400 evenly.
std::size_t steps_per_day(const Stream& s);

struct ChannelSelector {
    enum class Mode { single, all };
    Mode mode = Mode::all;
    std::string name;

    static ChannelSelector all() { return {Mode::all, {}}; }
    static ChannelSelector single(std::string channel) {
        return {Mode::single, std::move(channel)};
    }
};

/// Index of the selector's channel; throws UnknownChannel. In `all` mode with
/// a single-channel stream, returns 0.
std::size_t resolve_channel(const Stream& s, const ChannelSelector& sel);

struct CsvSchema {
    std::string timestamp_column = "id_time";
    std::vector<std::string> value_columns;  // empty = every non-timestamp column
    std::size_t gap_fill_limit = 6;          // max missing steps bridged by interpolation
};

struct ChannelSummary {
    std::string name;
    double min = 0, max = 0, mean = 0, std = 0;
};

struct StreamSummary {
    std::string series_id;
    std::size_t t_steps = 0;
    std::int64_t step_seconds = 0;
    std::int64_t start_time = 0;
    std::int64_t duration_seconds = 0;
    std::vector<ChannelSummary> channels;
};

/// Loads a CSV export into a Stream. Rows are sorted by timestamp, the step
/// is inferred from the modal inter-row delta, and gaps of at most
/// schema.gap_fill_limit steps are linearly interpolated. Timestamps may be
/// integer epoch seconds or ISO-8601.
Stream load_csv(const std::string& path, const CsvSchema& schema = {});

/// Writes the standard Stream CSV (epoch-second timestamps).
void write_csv(const Stream& s, const std::string& path,
               const std::string& timestamp_column = "id_time");

Stream slice_channel(const Stream& s, const ChannelSelector& sel);

StreamSummary summarize(const Stream& s);

}  // namespace taskdiag
