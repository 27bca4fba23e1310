#include "dqteleop/telemetry.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dqteleop {

TelemetryFormat parse_telemetry_format(const std::string& name)
{
    if (name == "csv") {
        return TelemetryFormat::csv;
    }
    if (name == "jsonl") {
        return TelemetryFormat::jsonl;
    }
    throw std::invalid_argument("unknown telemetry format '" + name + "' (expected csv or jsonl)");
}

TelemetryFormat telemetry_format_for(const std::string& path)
{
    const auto ends_with = [&](const std::string& suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return ends_with(".jsonl") || ends_with(".json") ? TelemetryFormat::jsonl : TelemetryFormat::csv;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TelemetryWriter::TelemetryWriter(std::ostream& out, TelemetryFormat format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns))
{
    if (format_ == TelemetryFormat::csv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out_ << (i ? "," : "") << columns_[i];
        }
        out_ << '\n';
    }
}

void TelemetryWriter::write(const std::vector<double>& row)
{
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("telemetry row has " + std::to_string(row.size()) + " values, schema has " +
                                    std::to_string(columns_.size()));
    }
    if (format_ == TelemetryFormat::csv) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out_ << (i ? "," : "") << format_number(row[i]);
        }
    } else {
        out_ << '{';
        for (std::size_t i = 0; i < row.size(); ++i) {
            out_ << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':';
            // JSON has no literal for non-finite numbers.
            out_ << (std::isfinite(row[i]) ? format_number(row[i]) : std::string("null"));
        }
        out_ << '}';
    }
    out_ << '\n';
    ++records_;
}

std::size_t TelemetryTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("telemetry has no column '" + name + "'");
}

bool TelemetryTable::has_column(const std::string& name) const
{
    for (const auto& c : columns) {
        if (c == name) {
            return true;
        }
    }
    return false;
}

std::vector<double> TelemetryTable::series(const std::string& name) const
{
    const auto k = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r[k]);
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw std::runtime_error("telemetry line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

TelemetryTable read_telemetry(std::istream& in)
{
    TelemetryTable table;
    std::string line;
    std::size_t lineno = 0;
    bool jsonl = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        if (lineno == 1) {
            jsonl = line.front() == '{';
            if (!jsonl) {
                table.columns = split(line);
                continue;
            }
        }
        if (jsonl) {
            const auto obj = nlohmann::ordered_json::parse(line);
            if (table.columns.empty()) {
                for (const auto& [key, value] : obj.items()) {
                    table.columns.push_back(key);
                }
            }
            std::vector<double> row;
            row.reserve(table.columns.size());
            for (const auto& c : table.columns) {
                const auto& v = obj.at(c);
                row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
            }
            table.rows.push_back(std::move(row));
        } else {
            const auto cells = split(line);
            if (cells.size() != table.columns.size()) {
                throw std::runtime_error("telemetry line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(table.columns.size()) + " values");
            }
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) {
                row.push_back(parse_double(c, lineno));
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

TelemetryTable read_telemetry(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open telemetry file '" + path + "'");
    }
    return read_telemetry(in);
}

}  // namespace dqteleop
