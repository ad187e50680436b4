// csv.hpp — numeric CSV tables with a declared column schema
#pragma once

#include <string>
#include <vector>

namespace bjj::csv {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // every row has columns.size() entries

    void add_row(const std::vector<double>& row);
    int column_index(const std::string& name) const; // -1 if absent
    std::vector<double> column(const std::string& name) const;
};

// Doubles are written with enough digits to round-trip exactly.
void write_file(const Table& t, const std::string& path);
std::string to_string(const Table& t);

// Throws ConfigError on malformed input.
Table read_file(const std::string& path);
Table parse(const std::string& text);

// Throws ConfigError unless t.columns == expected.
void require_schema(const Table& t, const std::vector<std::string>& expected);

} // namespace bjj::csv
