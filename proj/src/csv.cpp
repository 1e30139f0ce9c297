#include "liability/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace liability {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), columns_(columns.size()), path_(path) {
    if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.10g", x);
    return buffer;
}

void CsvWriter::row(const std::vector<double>& numeric) {
    if (numeric.size() != columns_)
        throw std::logic_error("csv row width mismatch in '" + path_ + "'");
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        if (i) out_ << ',';
        out_ << format(numeric[i]);
    }
    out_ << '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::logic_error("csv row width mismatch in '" + path_ + "'");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::flush() { out_.flush(); }

void write_manifest(const std::string& path, const std::vector<std::string>& config_lines,
                    const std::string& command, const std::string& version) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest file '" + path + "'");
    out << "# run manifest\n";
    out << "command = " << command << '\n';
    out << "version = " << version << '\n';
    for (const auto& line : config_lines) out << line << '\n';
}

}  // namespace liability
