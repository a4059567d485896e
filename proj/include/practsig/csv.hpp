#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace practsig::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws InputError if absent.
    std::size_t column(const std::string& name) const;
};

/// RFC 4180 subset: comma separated, double-quoted fields may contain
/// commas, quotes ("") and newlines. Every row must match the header width.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

void write_row(std::ostream& out, const std::vector<std::string>& fields);
void write(std::ostream& out, const Table& table);
void write_file(const std::filesystem::path& path, const Table& table);

/// Shortest round-trip text for doubles: 17 significant digits.
std::string format_double(double v);

double parse_double(const std::string& text, const std::string& context);
long long parse_integer(const std::string& text, const std::string& context);

} // namespace practsig::csv
