#include "shopflow/csv.hpp"

namespace shopflow::csv {

void split_line(std::string_view line, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    size_t i = 0;
    const size_t n = line.size();
    while (true) {
        field.clear();
        if (i < n && line[i] == '"') {
            ++i;
            while (i < n) {
                char c = line[i];
                if (c == '"') {
                    if (i + 1 < n && line[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        ++i;
                        break;
                    }
                } else {
                    field.push_back(c);
                    ++i;
                }
            }
        } else {
            while (i < n && line[i] != ',') {
                field.push_back(line[i]);
                ++i;
            }
        }
        out.push_back(field);
        if (i >= n) break;
        if (line[i] == ',') {
            ++i;
            if (i == n) {  // trailing comma -> empty last field
                out.emplace_back();
                break;
            }
        }
    }
}

std::string escape_field(std::string_view field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\r' || c == '\n') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += escape_field(fields[i]);
    }
    return line;
}

LineReader::LineReader(const std::string& path) : buf_(1 << 20), path_(path) {
    in_.rdbuf()->pubsetbuf(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    in_.open(path, std::ios::binary);
    if (!in_) throw std::runtime_error("cannot open file: " + path);
}

bool LineReader::next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open file for writing: " + path);
}

void Writer::write_row(const std::vector<std::string>& fields) {
    out_ << join_row(fields) << '\n';
    ++rows_;
}

void Writer::write_line(std::string_view line) {
    out_ << line << '\n';
    ++rows_;
}

}  // namespace shopflow::csv
