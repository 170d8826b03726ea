#include "choqmax/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace choqmax {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

std::string read_line(std::istream& in, const std::string& source, int line) {
    std::string text;
    if (!std::getline(in, text)) fail(source, line, "unexpected end of file");
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return text;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(text.substr(start));
            return fields;
        }
        fields.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

long parse_int(const std::string& field, const std::string& source, int line,
               const std::string& role) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        fail(source, line, "cannot parse " + role + " from '" + field + "'");
    return v;
}

double parse_value(const std::string& field, const std::string& source, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        fail(source, line, "cannot parse value '" + field + "'");
    if (std::isnan(v)) fail(source, line, "NaN value '" + field + "'");
    if (std::isinf(v)) fail(source, line, "infinite value '" + field + "'");
    if (v < 0.0) fail(source, line, "negative value '" + field + "'");
    return v;
}

GridSpec parse_header(const std::string& text, const std::string& source) {
    const auto fields = split_commas(text);
    if (fields.size() != 2) fail(source, 1, "header must be 'n,L'");
    const long n = parse_int(fields[0], source, 1, "n");
    const long L = parse_int(fields[1], source, 1, "L");
    try {
        return GridSpec(static_cast<int>(n), static_cast<int>(L));
    } catch (const ParamError& e) {
        fail(source, 1, e.what());
    }
}

std::vector<double> parse_values(const GridSpec& spec, const std::string& text,
                                 const std::string& source) {
    const auto fields = split_commas(text);
    if (fields.size() != spec.cell_count())
        fail(source, 2,
             "expected " + std::to_string(spec.cell_count()) + " values, found " +
                 std::to_string(fields.size()));
    std::vector<double> values;
    values.reserve(fields.size());
    for (const auto& field : fields) values.push_back(parse_value(field, source, 2));
    return values;
}

void reject_trailing(std::istream& in, const std::string& source) {
    std::string extra;
    while (std::getline(in, extra)) {
        if (!extra.empty() && extra.back() == '\r') extra.pop_back();
        if (!extra.empty()) fail(source, 3, "unexpected trailing content");
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    return out;
}

}  // namespace

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

GridFunction read_grid_function(std::istream& in, const std::string& source_name) {
    const GridSpec spec = parse_header(read_line(in, source_name, 1), source_name);
    auto values = parse_values(spec, read_line(in, source_name, 2), source_name);
    reject_trailing(in, source_name);
    return GridFunction(spec, std::move(values));
}

GridFunction read_grid_function_file(const std::string& path) {
    auto in = open_input(path);
    return read_grid_function(in, path);
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
    out << f.spec().n << ',' << f.spec().L << '\n';
    const auto& values = f.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_value(values[i]);
    }
    out << '\n';
}

void write_grid_function_file(const std::string& path, const GridFunction& f) {
    auto out = open_output(path);
    write_grid_function(out, f);
}

CellSet read_cell_set(std::istream& in, const std::string& source_name) {
    const GridSpec spec = parse_header(read_line(in, source_name, 1), source_name);
    const auto fields = split_commas(read_line(in, source_name, 2));
    if (fields.size() != spec.cell_count())
        fail(source_name, 2,
             "expected " + std::to_string(spec.cell_count()) + " flags, found " +
                 std::to_string(fields.size()));
    std::vector<std::uint8_t> mask;
    mask.reserve(fields.size());
    for (const auto& field : fields) {
        if (field == "0")
            mask.push_back(0);
        else if (field == "1")
            mask.push_back(1);
        else
            fail(source_name, 2, "membership flag must be 0 or 1, found '" + field + "'");
    }
    reject_trailing(in, source_name);
    return CellSet(spec, std::move(mask));
}

CellSet read_cell_set_file(const std::string& path) {
    auto in = open_input(path);
    return read_cell_set(in, path);
}

void write_cell_set(std::ostream& out, const CellSet& set) {
    out << set.spec().n << ',' << set.spec().L << '\n';
    const auto& mask = set.membership();
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (i) out << ',';
        out << static_cast<int>(mask[i]);
    }
    out << '\n';
}

void write_cell_set_file(const std::string& path, const CellSet& set) {
    auto out = open_output(path);
    write_cell_set(out, set);
}

}  // namespace choqmax
