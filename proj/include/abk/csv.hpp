#ifndef ABK_CSV_HPP
#define ABK_CSV_HPP

#include <string>
#include <vector>

namespace abk {

// Parsed CSV table. Rows retain their 1-based file line numbers so that
// loaders can report the offending line on validation failure.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

// Reads a comma-separated file with a single header line. Empty lines are
// skipped. Throws std::runtime_error on I/O failure or ragged rows.
CsvTable read_csv(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

// Field parsers; `where` is included in the error message (file:line style).
long long parse_int(const std::string& field, const std::string& where);
double parse_double(const std::string& field, const std::string& where);

// Serialises a double with 17 significant digits (round-trip exact).
std::string fmt_double(double x);

// Writes `text` to a temporary file in the same directory and renames it
// over `path`.
void write_file_atomic(const std::string& path, const std::string& text);

// FNV-1a 64-bit hash of a string, hex-encoded. Used for config hashes.
std::string fnv1a_hex(const std::string& text);

}  // namespace abk

#endif
