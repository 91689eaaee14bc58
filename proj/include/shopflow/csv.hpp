#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shopflow::csv {

// Splits one CSV line into fields. Handles RFC-4180 quoting ("" escapes a
// quote inside a quoted field); embedded newlines are not supported, event
// logs never contain them.
void split_line(std::string_view line, std::vector<std::string>& out);

// Quotes a field only when it contains a delimiter, quote or CR.
std::string escape_field(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

// Shortest round-trip decimal rendering of a double.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

inline int64_t parse_int(std::string_view s) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

// Buffered line reader; strips one trailing CR.
class LineReader {
public:
    explicit LineReader(const std::string& path);
    bool next(std::string& line);
    const std::string& path() const { return path_; }
    uint64_t line_no() const { return line_no_; }

private:
    std::ifstream in_;
    std::vector<char> buf_;
    std::string path_;
    uint64_t line_no_ = 0;
};

class Writer {
public:
    explicit Writer(const std::string& path);
    void write_row(const std::vector<std::string>& fields);
    void write_line(std::string_view line);
    uint64_t rows_written() const { return rows_; }
    void flush() { out_.flush(); }

private:
    std::ofstream out_;
    uint64_t rows_ = 0;
};

}  // namespace shopflow::csv
