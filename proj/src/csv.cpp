#include "bjj/csv.hpp"

#include "bjj/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bjj::csv {

void Table::add_row(const std::vector<double>& row) {
    if (row.size() != columns.size())
        throw ConfigError("csv row width " + std::to_string(row.size()) +
                          " does not match " + std::to_string(columns.size()) + " columns");
    rows.push_back(row);
}

int Table::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> Table::column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw ConfigError("csv column not found: " + name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

std::string to_string(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    char buf[40];
    for (const auto& r : t.rows) {
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", r[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_file(const Table& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << to_string(t);
    if (!f) throw ConfigError("write failed: " + path);
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

Table parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty input");
    Table t;
    for (auto& name : split_line(line)) t.columns.push_back(name);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto parts = split_line(line);
        if (parts.size() != t.columns.size())
            throw ConfigError("csv line " + std::to_string(lineno) + ": expected " +
                              std::to_string(t.columns.size()) + " fields, got " +
                              std::to_string(parts.size()));
        std::vector<double> row;
        row.reserve(parts.size());
        for (const auto& p : parts) {
            try {
                size_t pos = 0;
                const double v = std::stod(p, &pos);
                if (pos != p.size()) throw std::invalid_argument(p);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError("csv line " + std::to_string(lineno) +
                                  ": not a number: '" + p + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

void require_schema(const Table& t, const std::vector<std::string>& expected) {
    if (t.columns == expected) return;
    std::string got;
    for (const auto& c : t.columns) got += c + ",";
    std::string want;
    for (const auto& c : expected) want += c + ",";
    throw ConfigError("csv schema mismatch: got [" + got + "] want [" + want + "]");
}

} // namespace bjj::csv
