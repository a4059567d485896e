#include "practsig/csv.hpp"

#include "practsig/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace practsig::csv {

std::size_t Table::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw InputError("missing CSV column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

/// Reads one record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields)
{
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof())
        return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c = 0;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (quoted)
        throw InputError("unterminated quoted CSV field");
    if (!any)
        return false;
    fields.push_back(std::move(field));
    return true;
}

bool needs_quotes(const std::string& s)
{
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

} // namespace

Table read(std::istream& in)
{
    Table t;
    std::vector<std::string> fields;
    if (!read_record(in, t.header))
        throw InputError("CSV input is empty");
    std::size_t line = 1;
    while (read_record(in, fields)) {
        ++line;
        if (fields.size() == 1 && fields.front().empty())
            continue;
        if (fields.size() != t.header.size())
            throw InputError("CSV row " + std::to_string(line - 1) + " has " + std::to_string(fields.size()) +
                             " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(fields);
    }
    return t;
}

Table read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    return read(in);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        if (needs_quotes(fields[i])) {
            out << '"';
            for (char c : fields[i]) {
                if (c == '"')
                    out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << fields[i];
        }
    }
    out << '\n';
}

void write(std::ostream& out, const Table& table)
{
    write_row(out, table.header);
    for (const auto& r : table.rows)
        write_row(out, r);
}

void write_file(const std::filesystem::path& path, const Table& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    write(out, table);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& context)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    // ERANGE on underflow still yields a usable (subnormal) value
    if (text.empty() || end != text.c_str() + text.size() || (errno == ERANGE && std::isinf(v)))
        throw InputError(context + ": '" + text + "' is not a number");
    return v;
}

long long parse_integer(const std::string& text, const std::string& context)
{
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
        throw InputError(context + ": '" + text + "' is not an integer");
    return v;
}

} // namespace practsig::csv
