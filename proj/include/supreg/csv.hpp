#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace supreg {

/// Shortest round-trip decimal form of a double; locale independent, so
/// repeated runs serialize byte-identically.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// CSV table writer: '#'-prefixed metadata lines, a header row, then
/// comma separated rows with '.' decimal separator.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << ": " << value << "\n";
    }
    void meta(const std::string& key, double value) { meta(key, format_double(value)); }
    void meta(const std::string& key, std::uint64_t value) { meta(key, std::to_string(value)); }

    void header(const std::vector<std::string>& cols) { write_row(cols); }

    void row(const std::vector<std::string>& cells) { write_row(cells); }

    /// Numeric row; every cell rendered with format_double.
    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(cells[i]);
        }
        out_ << "\n";
    }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::ofstream out_;
};

/// Dataset CSV reader counterpart: skips '#' lines and the header row.
struct CsvTable {
    std::vector<std::string> meta_lines;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    CsvTable t;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.meta_lines.push_back(line);
            continue;
        }
        std::vector<double> cells;
        std::size_t pos = 0;
        bool numeric = true;
        while (pos <= line.size()) {
            const auto comma = line.find(',', pos);
            const auto end = comma == std::string::npos ? line.size() : comma;
            double v = 0.0;
            const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
            if (res.ec != std::errc() || res.ptr != line.data() + end) {
                numeric = false;
                break;
            }
            cells.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!numeric) {
            if (header_skipped)
                throw std::runtime_error("non-numeric row in " + path + ": " + line);
            header_skipped = true;
            continue;
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

} // namespace supreg
