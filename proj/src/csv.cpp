#include "voltrisk/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "voltrisk/errors.hpp"

namespace voltrisk {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return -1;
    return static_cast<int>(it - header.begin());
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open file: " + path);
    CsvTable t;
    t.path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_fields(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            t.rows.push_back(std::move(fields));
            t.line_numbers.push_back(lineno);
        }
    }
    if (t.header.empty())
        throw InputError(path + ": missing header row");
    return t;
}

namespace {

[[noreturn]] void fail_cell(const CsvTable& t, std::size_t row, int col, const char* what) {
    throw InputError(t.path + ":" + std::to_string(t.line_numbers[row]) + ": " + what +
                     " in column '" + (col >= 0 && col < static_cast<int>(t.header.size())
                                           ? t.header[col]
                                           : std::string("?")) +
                     "'");
}

const std::string& cell(const CsvTable& t, std::size_t row, int col) {
    if (col < 0 || row >= t.rows.size() || col >= static_cast<int>(t.rows[row].size()))
        fail_cell(t, row < t.rows.size() ? row : 0, col, "missing field");
    return t.rows[row][col];
}

}  // namespace

double csv_double(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = cell(t, row, col);
    const char* begin = s.data();
    const char* end = begin + s.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) fail_cell(t, row, col, "not a number");
    return v;
}

long long csv_int(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = cell(t, row, col);
    const char* begin = s.data();
    const char* end = begin + s.size();
    long long v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) fail_cell(t, row, col, "not an integer");
    return v;
}

}  // namespace voltrisk
