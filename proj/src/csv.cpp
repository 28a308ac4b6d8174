#include "gyrofdi/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gyrofdi {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void put_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

bool getline_stripped(std::istream& is, std::string& line) {
    if (!std::getline(is, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::size_t CsvTable::index_of(const std::string& column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == column) return i;
    }
    throw CsvError("no column '" + column + "' in " + schema);
}

std::vector<double> CsvTable::numeric(const std::string& column) const {
    const std::size_t k = index_of(column);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(parse_cell(r.at(k)));
    return v;
}

std::vector<std::string> CsvTable::text(const std::string& column) const {
    const std::size_t k = index_of(column);
    std::vector<std::string> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.at(k));
    return v;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
        throw CsvError(schema + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(columns.size()));
    }
    rows.push_back(std::move(cells));
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }

double parse_cell(const std::string& cell) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw CsvError("not a number: '" + cell + "'");
    }
    return v;
}

void write_csv(std::ostream& os, const CsvTable& t) {
    if (t.units.size() != t.columns.size()) throw CsvError(t.schema + ": units row does not match columns");
    os << "# schema=" << t.schema << '/' << t.version << '\n';
    put_row(os, t.columns);
    put_row(os, t.units);
    for (const auto& r : t.rows) put_row(os, r);
}

void write_csv_file(const std::string& path, const CsvTable& t) {
    std::ofstream os(path);
    if (!os) throw CsvError("cannot write " + path);
    write_csv(os, t);
    if (!os) throw CsvError("write failed for " + path);
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!getline_stripped(is, line) || line.rfind("# schema=", 0) != 0) throw CsvError("missing schema line");
    const std::string tag = line.substr(9);
    const auto slash = tag.rfind('/');
    if (slash == std::string::npos) throw CsvError("schema line needs name/version");
    t.schema = tag.substr(0, slash);
    try {
        t.version = std::stoi(tag.substr(slash + 1));
    } catch (const std::exception&) {
        throw CsvError("bad schema version in '" + line + "'");
    }
    if (!getline_stripped(is, line)) throw CsvError(t.schema + ": missing header row");
    t.columns = split(line);
    if (!getline_stripped(is, line)) throw CsvError(t.schema + ": missing units row");
    t.units = split(line);
    if (t.units.size() != t.columns.size()) throw CsvError(t.schema + ": units row does not match columns");
    while (getline_stripped(is, line)) {
        if (line.empty()) continue;
        t.add_row(split(line));
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CsvError("cannot read " + path);
    return read_csv(is);
}

}  // namespace gyrofdi
