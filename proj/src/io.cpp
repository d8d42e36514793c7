#include "otto/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace otto::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::comment(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) os_ << "# " << line << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_field(columns[i]);
    }
    os_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        if (const auto* s = std::get_if<std::string>(&cells[i]))
            os_ << csv_field(*s);
        else if (const auto* d = std::get_if<double>(&cells[i]))
            os_ << format_double(*d);
        else
            os_ << std::get<long long>(cells[i]);
    }
    os_ << '\n';
}

}  // namespace otto::io
