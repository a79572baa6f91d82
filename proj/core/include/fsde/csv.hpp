#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace fsde {

// RFC-4180-style CSV with '.' decimal separator and 17-significant-digit
// floats so rereading reproduces the values bit-exactly.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& line);  // "# ..." metadata line
  void header(std::span<const std::string> columns);
  void row(std::span<const double> values);
  void row(const std::string& first, std::span<const double> rest);

  static std::string format(double value);

 private:
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

// Reads a CSV produced by CsvWriter: skips '#' comments, first non-comment
// line is the header, every field after it must parse as a double.
CsvTable read_csv(const std::string& path);

}  // namespace fsde
