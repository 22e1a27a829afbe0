#ifndef VOLTRISK_CSV_HPP_
#define VOLTRISK_CSV_HPP_

#include <string>
#include <vector>

namespace voltrisk {

// Parsed CSV with a header row. Fields are plain strings; callers convert.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;   // data rows, header excluded
    std::vector<int> line_numbers;                // 1-based source line per row

    // Column index for `name`, or -1 if absent.
    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// Strict numeric conversion; throws InputError citing file:line on failure.
double csv_double(const CsvTable& t, std::size_t row, int col);
long long csv_int(const CsvTable& t, std::size_t row, int col);

}  // namespace voltrisk

#endif  // VOLTRISK_CSV_HPP_
