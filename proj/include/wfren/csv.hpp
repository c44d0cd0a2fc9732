#pragma once

#include <string>
#include <vector>

namespace wfren {

// Minimal RFC-4180-style CSV with a header row, '.' decimal separator and
// %.17g value formatting, so identical runs produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    void add_row_raw(const std::vector<std::string>& fields);
    void write(const std::string& path) const;
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

// Reads a numeric CSV with a header row; returns column-major data.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};
CsvTable read_csv(const std::string& path);

}  // namespace wfren
