#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace torwalk {

// RFC-4180-style CSV: LF line endings, '.' decimal separator, header row
// naming units. Numeric formatting is fixed so identical runs are
// byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        write_row_strings(header);
    }

    void field(const std::string& s) { row_.push_back(escape(s)); }
    void field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        row_.push_back(buf);
    }
    void field(long v) { row_.push_back(std::to_string(v)); }
    void field(std::size_t v) { row_.push_back(std::to_string(v)); }

    void end_row() {
        write_row_strings(row_);
        row_.clear();
    }

private:
    static std::string escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        q += "\"";
        return q;
    }
    void write_row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::vector<std::string> row_;
};

inline void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace torwalk
