#include "abk/csv.hpp"

#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abk {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (t.header.empty()) {
            t.header = fields;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(t.header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    if (t.header.empty()) throw std::runtime_error(path + ": empty file");
    return t;
}

long long parse_int(const std::string& field, const std::string& where) {
    try {
        size_t pos = 0;
        long long v = std::stoll(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": not an integer: '" + field + "'");
    }
}

double parse_double(const std::string& field, const std::string& where) {
    try {
        size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": not a number: '" + field + "'");
    }
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write: " + tmp);
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace abk
