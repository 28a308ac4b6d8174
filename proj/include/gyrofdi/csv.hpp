#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gyrofdi {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// In-memory table. On disk:
///   # schema=<name>/<version>
///   col,col,...
///   unit,unit,...
///   rows...
struct CsvTable {
    std::string schema;
    int version = 1;
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<std::string>> rows;

    std::size_t index_of(const std::string& column) const;  // throws CsvError
    std::vector<double> numeric(const std::string& column) const;
    std::vector<std::string> text(const std::string& column) const;

    void add_row(std::vector<std::string> cells);
};

/// Round-trips exactly through read_csv.
std::string fmt(double v);
std::string fmt(std::size_t v);
std::string fmt(bool v);

void write_csv(std::ostream& os, const CsvTable& t);
void write_csv_file(const std::string& path, const CsvTable& t);
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

/// Parses a cell written by fmt(double); "nan", "inf" and "-inf" included.
double parse_cell(const std::string& cell);

}  // namespace gyrofdi
