#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheat {

// 12 significant digits, fixed exponent form, so output is byte-stable.
inline std::string csv_number(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
        if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
    }

    class Row {
      public:
        Row& operator<<(double v) { return add(csv_number(v)); }
        Row& operator<<(const std::string& s) { return add(s); }
        Row& operator<<(const char* s) { return add(s); }
        Row& operator<<(std::size_t n) { return add(std::to_string(n)); }
        Row& operator<<(int n) { return add(std::to_string(n)); }

      private:
        friend class CsvTable;
        explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
        Row& add(std::string s) {
            if (s.find_first_of(",\n\"") != std::string::npos)
                throw std::invalid_argument("CsvTable: cell '" + s + "' needs quoting");
            cells_.push_back(std::move(s));
            return *this;
        }
        std::vector<std::string>& cells_;
    };

    Row row() {
        check_last();
        rows_.emplace_back();
        return Row(rows_.back());
    }

    // Trailing comment line, prefixed with '#'.
    void note(const std::string& text) { notes_.push_back(text); }

    std::size_t size() const noexcept { return rows_.size(); }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    void write(std::ostream& out) const {
        check_last();
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
            out << "\n";
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        for (const auto& n : notes_) out << "# " << n << "\n";
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        write(out);
        if (!out) throw std::runtime_error("error while writing '" + path + "'");
    }

  private:
    void check_last() const {
        if (!rows_.empty() && rows_.back().size() != header_.size())
            throw std::logic_error("CsvTable: row has " + std::to_string(rows_.back().size()) + " cells, header has " +
                                   std::to_string(header_.size()));
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> notes_;
};

}  // namespace qheat
