// CSV and manifest output. Numeric cells are fixed at 10 significant
// digits so identical runs produce byte-identical artifacts.
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace liability {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<double>& numeric);
    // Mixed row: any cell already formatted as text.
    void row_text(const std::vector<std::string>& cells);
    void flush();

    static std::string format(double x);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::string path_;
};

void write_manifest(const std::string& path, const std::vector<std::string>& config_lines,
                    const std::string& command, const std::string& version);

}  // namespace liability
