#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dqteleop {

enum class TelemetryFormat { csv, jsonl };

/// "csv" or "jsonl"; throws std::invalid_argument otherwise.
TelemetryFormat parse_telemetry_format(const std::string& name);
/// Format implied by a file extension (.jsonl/.json -> jsonl, anything else csv).
TelemetryFormat telemetry_format_for(const std::string& path);

/// Shortest text that reads back to the same double ("%.17g").
std::string format_number(double v);

/// Streams records with a fixed column schema. CSV gets a header row; JSONL
/// writes one object per record with keys in column order.
class TelemetryWriter {
public:
    TelemetryWriter(std::ostream& out, TelemetryFormat format, std::vector<std::string> columns);

    /// Throws std::invalid_argument when the row width does not match the schema.
    void write(const std::vector<double>& row);
    std::size_t records() const { return records_; }

private:
    std::ostream& out_;
    TelemetryFormat format_;
    std::vector<std::string> columns_;
    std::size_t records_ = 0;
};

struct TelemetryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Column index by name; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    std::vector<double> series(const std::string& name) const;
};

/// Reads a telemetry file written by TelemetryWriter; the format is detected from the content.
TelemetryTable read_telemetry(const std::string& path);
TelemetryTable read_telemetry(std::istream& in);

}  // namespace dqteleop
