// io.hpp: CSV and number formatting shared by the library and the CLI.
#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace otto::io {

// Shortest round-trip-safe decimal with 17 significant digits; "inf", "-inf",
// "nan" for non-finite values.
std::string format_double(double v);

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are wrapped in
// double quotes with embedded quotes doubled.
std::string csv_field(const std::string& s);

using Cell = std::variant<std::string, double, long long>;

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    // Each line is written prefixed with "# ".
    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<Cell>& cells);

private:
    std::ostream& os_;
};

}  // namespace otto::io
